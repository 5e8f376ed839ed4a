"""Named reference functions used by the command-line front end and the tests.

All profiles are smooth in the coordinates (hence group-smooth) and carry
analytic gradients and Hessians, so second-order expansions of them are exact
and far fields are either exactly supported or exponentially negligible.
"""
from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

import numpy as np

from . import calculus, group
from .calculus import SmoothFunction
from .errors import ConfigError


def _euclid_sq(coords: np.ndarray) -> np.ndarray:
    return np.sum(np.asarray(coords, dtype=float) ** 2, axis=-1)


def constant(value: float = 1.0, n: int = 1) -> SmoothFunction:
    """The constant function; exact zero support radius and far value."""
    d = group.dim_of(n)

    def ev(coords):
        coords = np.asarray(coords, dtype=float)
        return np.full(coords.shape[:-1], float(value))

    return SmoothFunction(
        evaluator=ev, n=n,
        gradient=lambda xi: np.zeros(d),
        hessian=lambda xi: np.zeros((d, d)),
        support_radius=0.0, far_value=float(value), name="constant",
    )


def gaussian_bump(
    amplitude: float = 1.0,
    width: float = 0.5,
    center: Optional[Sequence[float]] = None,
    n: int = 1,
) -> SmoothFunction:
    """Gaussian in the Euclidean radius of the coordinates.

    Outside the reported support radius the value is below machine epsilon
    times the amplitude, so the zero far field is exact to working precision.
    """
    if width <= 0:
        raise ConfigError("gaussian-bump width must be positive")
    A = float(amplitude)
    w2 = float(width) ** 2
    d = group.dim_of(n)

    def ev(coords):
        return A * np.exp(-_euclid_sq(coords) / w2)

    def grad(xi):
        xi = np.asarray(xi, dtype=float)
        return ev(xi) * (-2.0 / w2) * xi

    def hess(xi):
        xi = np.asarray(xi, dtype=float)
        return ev(xi) * (4.0 / (w2 * w2) * np.outer(xi, xi) - 2.0 / w2 * np.eye(d))

    # beyond gauge radius max(1, 6.1w) the Euclidean radius dominates the
    # gauge one, putting the value below 1e-16 * A
    out = SmoothFunction(
        evaluator=ev, n=n, gradient=grad, hessian=hess,
        support_radius=max(1.0, 6.1 * float(width)), far_value=0.0,
        name="gaussian-bump",
    )
    if center is not None:
        out = calculus.translate(out, group.group_inv(np.asarray(center, dtype=float)))
    return out


def poly_cutoff(
    amplitude: float = 1.0,
    radius: float = 1.0,
    exponent: int = 0,
    center: Optional[Sequence[float]] = None,
    n: int = 1,
) -> SmoothFunction:
    """x_1^exponent times the quartic cutoff (1 - r^2/radius^2)_+^4.

    exponent = 0 is the plain compactly supported bump used by the
    asymptotics fixtures; the cutoff is C^3 at its support boundary.
    """
    if radius <= 0:
        raise ConfigError("poly-cutoff radius must be positive")
    e = int(exponent)
    if e < 0:
        raise ConfigError("poly-cutoff exponent must be a nonnegative integer")
    A = float(amplitude)
    R2 = float(radius) ** 2
    d = group.dim_of(n)

    def _g(coords):
        return np.clip(1.0 - _euclid_sq(coords) / R2, 0.0, None)

    def ev(coords):
        coords = np.asarray(coords, dtype=float)
        cut = A * _g(coords) ** 4
        if e == 0:
            return cut
        return coords[..., 0] ** e * cut

    def grad(xi):
        xi = np.asarray(xi, dtype=float)
        g = float(_g(xi))
        cut = A * g ** 4
        dcut = (-8.0 * A / R2) * g ** 3 * xi
        if e == 0:
            return dcut
        x1 = xi[0]
        mono = x1 ** e
        dmono = np.zeros(d)
        dmono[0] = e * x1 ** (e - 1)
        return dmono * cut + mono * dcut

    def hess(xi):
        xi = np.asarray(xi, dtype=float)
        g = float(_g(xi))
        cut = A * g ** 4
        dcut = (-8.0 * A / R2) * g ** 3 * xi
        hcut = (48.0 * A / R2 ** 2) * g ** 2 * np.outer(xi, xi) \
            - (8.0 * A / R2) * g ** 3 * np.eye(d)
        if e == 0:
            return hcut
        x1 = xi[0]
        mono = x1 ** e
        dmono = np.zeros(d)
        dmono[0] = e * x1 ** (e - 1)
        H = mono * hcut + np.outer(dmono, dcut) + np.outer(dcut, dmono)
        if e >= 2:
            H[0, 0] += e * (e - 1) * x1 ** (e - 2) * cut
        return H

    # support r_euclid < radius implies gauge norm below (R^4 + R^2)^(1/4)
    support = (R2 * R2 + R2) ** 0.25
    out = SmoothFunction(
        evaluator=ev, n=n, gradient=grad, hessian=hess,
        support_radius=support, far_value=0.0, name="poly-cutoff",
    )
    if center is not None:
        out = calculus.translate(out, group.group_inv(np.asarray(center, dtype=float)))
    return out


def sign_flip_shell(
    amplitude: float = 1.0,
    flip_radius: float = 1.45,
    width: float = 0.05,
    n: int = 1,
) -> SmoothFunction:
    """Smooth step from +amplitude inside to -amplitude beyond the flip radius.

    The flip surface is the gauge sphere: the step argument uses the fourth
    power of the gauge norm, which is polynomial in the coordinates, so the
    profile is smooth everywhere and its sign on a gauge ball is decided by
    the ball radius alone.  width is the transition width in gauge distance
    at the flip surface.
    """
    if width <= 0 or flip_radius <= 0:
        raise ConfigError("sign-flip-shell width and flip_radius must be positive")
    A = float(amplitude)
    R0 = float(flip_radius)
    scale = 4.0 * R0 ** 3 * float(width)
    d = group.dim_of(n)

    def _quartic(coords):
        coords = np.asarray(coords, dtype=float)
        z = coords[..., : 2 * n]
        t = coords[..., -1]
        return np.sum(z * z, axis=-1) ** 2 + t * t

    def ev(coords):
        return A * np.tanh((R0 ** 4 - _quartic(coords)) / scale)

    def grad(xi):
        xi = np.asarray(xi, dtype=float)
        T = math.tanh((R0 ** 4 - float(_quartic(xi))) / scale)
        zsq = float(np.sum(xi[: 2 * n] ** 2))
        dq = np.empty(d)
        dq[: 2 * n] = 4.0 * zsq * xi[: 2 * n]
        dq[-1] = 2.0 * xi[-1]
        return A * (1.0 - T * T) * (-dq / scale)

    def hess(xi):
        xi = np.asarray(xi, dtype=float)
        T = math.tanh((R0 ** 4 - float(_quartic(xi))) / scale)
        sech2 = 1.0 - T * T
        zsq = float(np.sum(xi[: 2 * n] ** 2))
        dq = np.empty(d)
        dq[: 2 * n] = 4.0 * zsq * xi[: 2 * n]
        dq[-1] = 2.0 * xi[-1]
        hq = np.zeros((d, d))
        zz = np.outer(xi[: 2 * n], xi[: 2 * n])
        hq[: 2 * n, : 2 * n] = 8.0 * zz + 4.0 * zsq * np.eye(2 * n)
        hq[-1, -1] = 2.0
        gp = -dq / scale
        return A * sech2 * (-2.0 * T * np.outer(gp, gp) - hq / scale)

    # tanh is within 1e-16 of its limit once the argument passes ~19
    support = (R0 ** 4 + 19.5 * scale) ** 0.25
    return SmoothFunction(
        evaluator=ev, n=n, gradient=grad, hessian=hess,
        support_radius=support, far_value=-A, name="sign-flip-shell",
    )


def gauge_cutoff(radius: float, n: int = 1) -> Callable[[np.ndarray], np.ndarray]:
    """Quintic smoothstep in the gauge distance, 1 at the origin, 0 outside B_radius.

    Plain node-data callable (the gauge norm has a vertical-direction kink, so
    this is not offered as a SmoothFunction).
    """
    if radius <= 0:
        raise ConfigError("cutoff radius must be positive")

    def phi(coords):
        x = np.clip(1.0 - group.koranyi_norm(coords) / radius, 0.0, 1.0)
        return x ** 3 * (10.0 - 15.0 * x + 6.0 * x * x)

    return phi


PROFILES = {
    "constant": constant,
    "gaussian-bump": gaussian_bump,
    "poly-cutoff": poly_cutoff,
    "sign-flip-shell": sign_flip_shell,
}


def make(name: str, n: int = 1, **params) -> SmoothFunction:
    """Look up a named profile and build it with the given numeric parameters."""
    if name not in PROFILES:
        known = ", ".join(sorted(PROFILES))
        raise ConfigError(f"unknown profile {name!r}; known profiles: {known}")
    try:
        return PROFILES[name](n=n, **params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for profile {name!r}: {exc}") from None
