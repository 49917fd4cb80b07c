"""Planar curve profiles and the geometric fields derived from them.

A wire is the graph ``(x, f(x), 0)`` of a height profile over the interval
``[0, L]``. Everything the effective one-dimensional Schrödinger problem
needs (curvature, effective mass, geometric and effective potentials) is a
local function of the first three derivatives of ``f``.

Gaussian profiles are described in a *window frame*: ``center`` and the dent
shifts are measured from the left edge of a reference window of width
``window``. A flat ``padding`` is added on both sides so the tails have room
to decay; the computational domain is ``[0, window + 2*padding]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import make_interp_spline

FLATNESS_TOL = 1e-8
MIN_TABULATED_SAMPLES = 7


class ProfileError(ValueError):
    """Invalid profile parameters or a profile that is not flat at its ends."""


class DomainError(ValueError):
    """Evaluation point outside the profile domain."""


class InsufficientDataError(ProfileError):
    """Too few samples to build a tabulated profile."""


def _gaussian_derivs(x, amplitude, center, sigma):
    u = (x - center) / sigma
    g = amplitude * np.exp(-0.5 * u * u)
    return (
        g,
        -g * u / sigma,
        g * (u * u - 1.0) / sigma**2,
        g * (3.0 * u - u**3) / sigma**3,
    )


class Profile:
    """Base class for curve profiles on ``[0, length]``.

    Subclasses implement :meth:`derivatives`, which evaluates ``f`` and its
    first three derivatives without a domain check.
    """

    length: float

    def derivatives(self, x):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def _check_flat_ends(self):
        for name, x in (("left", 0.0), ("right", self.length)):
            slope = float(self.derivatives(np.asarray(x))[1])
            if not abs(slope) < FLATNESS_TOL:
                raise ProfileError(
                    f"profile is not flat at the {name} endpoint x={x:g}: "
                    f"|f'| = {abs(slope):.3e} >= {FLATNESS_TOL:g}"
                )


@dataclass(frozen=True)
class Flat(Profile):
    length: float

    def __post_init__(self):
        if not self.length > 0:
            raise ProfileError("length must be positive")

    def derivatives(self, x):
        z = np.zeros_like(np.asarray(x, dtype=float))
        return z, z, z, z

    def describe(self):
        return {"kind": "flat", "length": self.length}


@dataclass(frozen=True)
class SingleGaussian(Profile):
    """``f(x) = A exp(-(x - x0)^2 / (2 sigma^2))`` inside a padded window."""

    amplitude: float
    center: float
    sigma: float
    window: float
    padding: float = 0.0

    def __post_init__(self):
        _check_window(self)
        self._check_flat_ends()

    @property
    def length(self):
        return self.window + 2.0 * self.padding

    def _dents(self):
        return [(self.amplitude, self.padding + self.center, self.sigma)]

    def derivatives(self, x):
        return _sum_dents(np.asarray(x, dtype=float), self._dents())

    def stretched(self, factor: float, mode: str = "both") -> "SingleGaussian":
        """Return the profile widened about its center.

        ``mode="both"`` scales amplitude and width together (slope profile
        keeps its shape); ``mode="sigma"`` scales the width only.
        """
        _check_mode(mode)
        amp = self.amplitude * factor if mode == "both" else self.amplitude
        return SingleGaussian(amp, self.center, self.sigma * factor, self.window, self.padding)

    def describe(self):
        return {
            "kind": "single_gaussian",
            "amplitude": self.amplitude,
            "center": self.center,
            "sigma": self.sigma,
            "window": self.window,
            "padding": self.padding,
        }


@dataclass(frozen=True)
class DoubleGaussian(Profile):
    """Two dents at ``center -/+ shift``; the right one flipped for odd parity."""

    amplitude: float
    center: float
    sigma: float
    shift: float
    parity: str
    window: float
    padding: float = 0.0

    def __post_init__(self):
        _check_window(self)
        if self.parity not in ("even", "odd"):
            raise ProfileError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not self.shift > 0:
            raise ProfileError("shift must be positive")
        self._check_flat_ends()

    @property
    def length(self):
        return self.window + 2.0 * self.padding

    def _dents(self):
        sign = 1.0 if self.parity == "even" else -1.0
        x0 = self.padding + self.center
        return [
            (self.amplitude, x0 - self.shift, self.sigma),
            (sign * self.amplitude, x0 + self.shift, self.sigma),
        ]

    def derivatives(self, x):
        return _sum_dents(np.asarray(x, dtype=float), self._dents())

    def stretched(self, factor: float, mode: str = "both") -> "DoubleGaussian":
        _check_mode(mode)
        if mode == "both":
            amp, shift = self.amplitude * factor, self.shift * factor
        else:
            amp, shift = self.amplitude, self.shift
        return DoubleGaussian(
            amp, self.center, self.sigma * factor, shift, self.parity, self.window, self.padding
        )

    def describe(self):
        return {
            "kind": "double_gaussian",
            "amplitude": self.amplitude,
            "center": self.center,
            "sigma": self.sigma,
            "shift": self.shift,
            "parity": self.parity,
            "window": self.window,
            "padding": self.padding,
        }


@dataclass(frozen=True, eq=False)
class Tabulated(Profile):
    """Profile interpolated from ``(x, f)`` samples.

    Samples are interpolated by a quintic spline (C4), so derivatives up to
    third order are continuous. Abscissae are shifted so the first sample
    sits at ``x = 0``.
    """

    xs: Sequence[float]
    fs: Sequence[float]
    _splines: tuple = field(init=False, repr=False)
    length: float = field(init=False)

    def __post_init__(self):
        x = np.asarray(self.xs, dtype=float)
        f = np.asarray(self.fs, dtype=float)
        if x.ndim != 1 or x.shape != f.shape:
            raise ProfileError("tabulated x and f must be 1-D arrays of equal length")
        if x.size < MIN_TABULATED_SAMPLES:
            raise InsufficientDataError(
                f"tabulated profile needs at least {MIN_TABULATED_SAMPLES} samples, got {x.size}"
            )
        if not np.all(np.diff(x) > 0):
            raise ProfileError("tabulated abscissae must be strictly increasing")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(f))):
            raise ProfileError("tabulated samples must be finite")
        x = x - x[0]
        x.setflags(write=False)
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "xs", x)
        object.__setattr__(self, "fs", f)
        object.__setattr__(self, "length", float(x[-1]))
        if np.ptp(f) == 0.0:
            # constant height is geometrically a straight line
            splines = None
        else:
            spl = make_interp_spline(x, f, k=5)
            splines = (spl, spl.derivative(1), spl.derivative(2), spl.derivative(3))
        object.__setattr__(self, "_splines", splines)
        self._check_flat_ends()

    def derivatives(self, x):
        x = np.asarray(x, dtype=float)
        if self._splines is None:
            z = np.zeros_like(x)
            return np.full_like(x, self.fs[0]), z, z, z
        return tuple(np.asarray(s(x)) for s in self._splines)

    def __eq__(self, other):
        if not isinstance(other, Tabulated):
            return NotImplemented
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.fs, other.fs)

    __hash__ = None

    def describe(self):
        return {"kind": "tabulated", "n_samples": int(len(self.xs)), "length": self.length}

    @classmethod
    def from_pairs(cls, samples) -> "Tabulated":
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ProfileError("samples must be a list of (x, f) pairs")
        return cls(arr[:, 0], arr[:, 1])


def _check_window(p):
    if not p.window > 0:
        raise ProfileError("window must be positive")
    if not p.sigma > 0:
        raise ProfileError("sigma must be positive")
    if p.padding < 0:
        raise ProfileError("padding must be non-negative")
    if not math.isfinite(p.amplitude):
        raise ProfileError("amplitude must be finite")


def _check_mode(mode):
    if mode not in ("both", "sigma"):
        raise ProfileError(f"stretch mode must be 'both' or 'sigma', got {mode!r}")


def _sum_dents(x, dents):
    out = [np.zeros_like(x) for _ in range(4)]
    for amp, c, s in dents:
        for acc, d in zip(out, _gaussian_derivs(x, amp, c, s)):
            acc += d
    return tuple(out)


def required_padding(dents_window_frame, window, step=None, max_stretch=1.0, mode="both"):
    """Smallest padding (a multiple of ``step``) that makes the ends flat.

    ``dents_window_frame`` lists ``(amplitude, center, sigma)`` with centers in
    the window frame. Stretching about ``center_of_mass`` is accounted for by
    also checking the profile at ``max_stretch``. Endpoint slopes are kept a
    factor 4 below the flatness tolerance.
    """
    step = window / 100.0 if step is None else step
    x_mid = np.mean([c for _, c, _ in dents_window_frame])
    variants = [dents_window_frame]
    if max_stretch != 1.0:
        s = max_stretch
        variants.append(
            [
                (a * s if mode == "both" else a, x_mid + (c - x_mid) * (s if mode == "both" else 1.0), w * s)
                for a, c, w in dents_window_frame
            ]
        )
    for n in range(10_000):
        pad = n * step
        ends = np.array([-pad, window + pad])
        if all(np.all(np.abs(_sum_dents(ends, d)[1]) < FLATNESS_TOL / 4) for d in variants):
            return pad
    raise ProfileError("could not find a padding that flattens the profile ends")


def reference_single_gaussian(window=1000.0, padding=None, max_stretch=1.0, mode="both"):
    """Single dent with ``A = 0.2 L``, ``x0 = 0.5 L``, ``sigma = L / 4 pi``.

    ``padding=None`` chooses the smallest flat padding (multiple of L/100)
    that satisfies the endpoint flatness tolerance, including for profiles
    stretched up to ``max_stretch``.
    """
    amp, x0, sigma = 0.2 * window, 0.5 * window, window / (4.0 * math.pi)
    if padding is None:
        padding = required_padding([(amp, x0, sigma)], window, max_stretch=max_stretch, mode=mode)
    return SingleGaussian(amp, x0, sigma, window, padding)


def reference_double_gaussian(shift_fraction, parity, window=1000.0, padding=None, max_stretch=1.0, mode="both"):
    amp, x0, sigma = 0.2 * window, 0.5 * window, window / (4.0 * math.pi)
    shift = shift_fraction * window
    if padding is None:
        sign = 1.0 if parity == "even" else -1.0
        dents = [(amp, x0 - shift, sigma), (sign * amp, x0 + shift, sigma)]
        padding = required_padding(dents, window, max_stretch=max_stretch, mode=mode)
    return DoubleGaussian(amp, x0, sigma, shift, parity, window, padding)


def eval_profile(profile: Profile, x):
    """Return ``(f, f1, f2, f3)`` at ``x``; raises :class:`DomainError` outside ``[0, L]``."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa > profile.length) or not np.all(np.isfinite(xa)):
        raise DomainError(f"x outside the profile domain [0, {profile.length:g}]")
    out = profile.derivatives(xa)
    if xa.ndim == 0:
        return tuple(float(v) for v in out)
    return out


def curvature(f1, f2):
    return np.abs(f2) / (1.0 + np.square(f1)) ** 1.5


def effective_mass(f1, mass=1.0):
    return (1.0 + np.square(f1)) * mass


def geometric_potential(kappa, mass=1.0):
    return -np.square(kappa) / (8.0 * mass)


def effective_potential(f1, f2, f3, mass=1.0):
    """Scalar potential of the flat-axis equation with position-dependent mass.

    Regular everywhere; :func:`effective_potential_geo_form` is the
    equivalent expression in units of the geometric potential.
    """
    w = 1.0 + np.square(f1)
    num = -3.0 * (np.square(f1) - 1.0) * np.square(f2) + 2.0 * w * f1 * f3
    return -num / (2.0 * mass * w * 4.0 * w * w)


def effective_potential_geo_form(f1, f2, f3, mass=1.0):
    """Same quantity written as a multiple of ``V_geo``; singular where ``f2 == 0``."""
    w = 1.0 + np.square(f1)
    vgeo = geometric_potential(curvature(f1, f2), mass)
    return (2.0 * w * f1 * f3 / np.square(f2) + 3.0 * (1.0 - np.square(f1))) * vgeo


def alpha_factor(f1):
    return (1.0 + np.square(f1)) ** 0.25


@dataclass(frozen=True, eq=False)
class GeometryField:
    x: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    kappa: np.ndarray
    m_eff: np.ndarray
    v_geo: np.ndarray
    v_eff: np.ndarray
    alpha: np.ndarray


def geometry_field(profile: Profile, x, mass=1.0) -> GeometryField:
    x = np.asarray(x, dtype=float)
    _, f1, f2, f3 = eval_profile(profile, x)
    f1, f2, f3 = (np.asarray(v, dtype=float) for v in (f1, f2, f3))
    kappa = curvature(f1, f2)
    arrays = dict(
        x=x,
        f1=f1,
        f2=f2,
        f3=f3,
        kappa=kappa,
        m_eff=effective_mass(f1, mass),
        v_geo=geometric_potential(kappa, mass),
        v_eff=effective_potential(f1, f2, f3, mass),
        alpha=alpha_factor(f1),
    )
    for v in arrays.values():
        v.setflags(write=False)
    return GeometryField(**arrays)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _composite_gauss(func, a, b, panels):
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    return float(np.sum(half * (func(pts) @ _GL_WEIGHTS)))


def arc_length(profile: Profile, a: float, b: float, rtol: float = 1e-11) -> float:
    """Arc length of the graph between ``a`` and ``b``.

    Composite 8-point Gauss-Legendre; the panel count doubles until two
    successive estimates agree to ``rtol``.
    """
    eval_profile(profile, np.array([a, b]))
    if b < a:
        raise DomainError("arc_length needs a <= b")
    if a == b:
        return 0.0

    def integrand(x):
        return np.sqrt(1.0 + np.square(profile.derivatives(x)[1]))

    panels = 64
    prev = _composite_gauss(integrand, a, b, panels)
    for _ in range(16):
        panels *= 2
        cur = _composite_gauss(integrand, a, b, panels)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return cur
