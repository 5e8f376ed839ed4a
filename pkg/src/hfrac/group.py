"""Heisenberg group arithmetic, dilations and homogeneous norms.

Points of H^n live in R^(2n+1) and are stored as flat coordinate arrays
[x_1..x_n, y_1..y_n, t].  All functions broadcast over leading axes, so a
single point is a shape (2n+1,) array and a batch is (N, 2n+1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

KORANYI = "koranyi"
BOX = "box"


def dim_of(n: int) -> int:
    return 2 * n + 1


def n_of(coords: np.ndarray) -> int:
    """Recover n from the trailing axis length, which must be odd and >= 3."""
    d = coords.shape[-1]
    if d < 3 or d % 2 == 0:
        raise ValueError(f"coordinate arrays need odd trailing dimension >= 3, got {d}")
    return (d - 1) // 2


def identity(n: int) -> np.ndarray:
    return np.zeros(dim_of(n))


def split_coords(coords: np.ndarray):
    """Return (x, y, t) views with x and y of shape (..., n)."""
    coords = np.asarray(coords, dtype=float)
    n = n_of(coords)
    return coords[..., :n], coords[..., n : 2 * n], coords[..., 2 * n]


def horizontal(coords: np.ndarray) -> np.ndarray:
    """The horizontal part z = (x, y) of shape (..., 2n)."""
    coords = np.asarray(coords, dtype=float)
    return coords[..., : coords.shape[-1] - 1]


def group_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Group law (x,y,t)*(x',y',t') = (x+x', y+y', t+t'+2<y,x'>-2<x,y'>)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    xa, ya, ta = split_coords(a)
    xb, yb, tb = split_coords(b)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    n = n_of(a)
    out[..., :n] = xa + xb
    out[..., n : 2 * n] = ya + yb
    out[..., 2 * n] = ta + tb + 2.0 * (np.sum(ya * xb, axis=-1) - np.sum(xa * yb, axis=-1))
    return out


def group_inv(a: np.ndarray) -> np.ndarray:
    """Group inverse, which for this law is coordinatewise negation."""
    return -np.asarray(a, dtype=float)


def dilate(lam: float, a: np.ndarray) -> np.ndarray:
    """Anisotropic dilation Phi_lam: (z, t) -> (lam z, lam^2 t)."""
    if lam <= 0:
        raise ValueError(f"dilation parameter must be positive, got {lam}")
    a = np.asarray(a, dtype=float)
    out = a * lam
    out[..., -1] = a[..., -1] * lam * lam
    return out


def homogeneous_dimension(n: int) -> int:
    if n < 1:
        raise ValueError("n must be a positive integer")
    return 2 * n + 2


def koranyi_norm(coords: np.ndarray) -> np.ndarray:
    """Gauge (|z|^4 + t^2)^(1/4)."""
    coords = np.asarray(coords, dtype=float)
    z = horizontal(coords)
    t = coords[..., -1]
    zsq = np.sum(z * z, axis=-1)
    return (zsq * zsq + t * t) ** 0.25


def box_norm(coords: np.ndarray) -> np.ndarray:
    """max(|z|, |t|^(1/2)); equivalent to the gauge with constant 2^(1/4)."""
    coords = np.asarray(coords, dtype=float)
    z = horizontal(coords)
    t = coords[..., -1]
    return np.maximum(np.sqrt(np.sum(z * z, axis=-1)), np.sqrt(np.abs(t)))


# Analytic equivalence constant between the two norms: |.|_box <= |.|_K <= 2^(1/4)|.|_box.
BOX_EQUIVALENCE = 2.0 ** 0.25

_NORM_FUNCS = {KORANYI: koranyi_norm, BOX: box_norm}


@dataclass(frozen=True)
class HomNorm:
    """A homogeneous norm: 1-homogeneous under dilations, symmetric, positive.

    `lambda_equiv` is the equivalence constant against the Koranyi gauge:
    lambda^-1 |xi|_K <= value(xi) <= lambda |xi|_K.
    """

    kind: str = KORANYI

    def __post_init__(self):
        if self.kind not in _NORM_FUNCS:
            raise ValueError(f"unknown norm kind {self.kind!r}; choose from {sorted(_NORM_FUNCS)}")

    @property
    def lambda_equiv(self) -> float:
        return 1.0 if self.kind == KORANYI else BOX_EQUIVALENCE

    def value(self, coords: np.ndarray) -> np.ndarray:
        return _NORM_FUNCS[self.kind](coords)

    def __call__(self, coords: np.ndarray) -> np.ndarray:
        return self.value(coords)


def norm_equivalence_constant(norm: HomNorm, samples: np.ndarray) -> float:
    """Empirical equivalence constant against the gauge over nonzero samples."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    ref = koranyi_norm(samples)
    other = norm.value(samples)
    keep = ref > 0
    if not np.any(keep):
        raise ValueError("need at least one nonzero sample")
    r = other[keep] / ref[keep]
    return float(max(np.max(r), np.max(1.0 / r)))


def pseudo_dist(norm: HomNorm, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Quasi-distance d(xi, eta) = norm(eta^-1 * xi)."""
    return norm.value(group_mul(group_inv(eta), xi))


def koranyi_dist(xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    return koranyi_norm(group_mul(group_inv(eta), xi))


def ball_volume(n: int) -> float:
    """Lebesgue volume of the unit gauge ball; pi^2/2 for n = 1.

    Closed form |S^{2n-1}| * B(n/2, 3/2) / 2 from integrating the t-thickness
    2 sqrt(1 - |z|^4) over the unit disc of R^{2n}.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    sphere = 2.0 * np.pi ** n / special.gamma(n)  # |S^{2n-1}|
    return float(sphere * 0.5 * special.beta(n / 2.0, 1.5))


def sphere_surface(n: int) -> float:
    """Total polar-coordinate surface measure of the unit gauge sphere, Q|B_1|."""
    return homogeneous_dimension(n) * ball_volume(n)


def euclidean_sphere_surface(dim: int) -> float:
    """|S^(dim-1)|, surface measure of the Euclidean unit sphere in R^dim."""
    return float(2.0 * np.pi ** (dim / 2.0) / special.gamma(dim / 2.0))
