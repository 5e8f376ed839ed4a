"""Left-invariant calculus: horizontal fields, stratified Taylor expansion.

The frame is X_j = d/dx_j + 2 y_j d/dt and X_{n+j} = d/dy_j - 2 x_j d/dt for
j = 1..n, with the vertical field T = d/dt exposed as index 0.  Second-order
objects are assembled from plain Euclidean jets, so a function only needs a
(vectorized) evaluator; analytic partials are used when supplied and
fourth-order central differences otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import group

# Sentinel returned by remainder_order when the remainder sits at rounding level.
REMAINDER_EXACT = np.inf


@dataclass
class SmoothFunction:
    """A scalar function on H^n with optional analytic Euclidean partials.

    evaluator maps a coords array (..., 2n+1) to values (...,).  gradient and
    hessian, when given, must return (..., d) and (..., d, d) Euclidean
    partials.  support_radius is a gauge radius outside which the function
    equals far_value identically (zero for a compactly supported function);
    bound is a global sup bound used for far-field estimates when neither is
    available.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    n: int = 1
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = 1e-4
    support_radius: Optional[float] = None
    far_value: float = 0.0
    bound: Optional[float] = None
    name: str = ""

    def __call__(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(coords, dtype=float)), dtype=float)

    @property
    def dim(self) -> int:
        return group.dim_of(self.n)


def euclidean_gradient(u: SmoothFunction, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if u.gradient is not None:
        return np.asarray(u.gradient(xi), dtype=float)
    d = xi.shape[-1]
    h = u.fd_step
    # 4th-order central stencil, one batched evaluator call for all 4d points.
    offsets = np.zeros((4 * d, d))
    for k in range(d):
        offsets[4 * k + 0, k] = -2 * h
        offsets[4 * k + 1, k] = -h
        offsets[4 * k + 2, k] = h
        offsets[4 * k + 3, k] = 2 * h
    vals = u(xi[None, :] + offsets).reshape(d, 4)
    return (vals[:, 0] - 8.0 * vals[:, 1] + 8.0 * vals[:, 2] - vals[:, 3]) / (12.0 * h)


def euclidean_hessian(u: SmoothFunction, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if u.hessian is not None:
        return np.asarray(u.hessian(xi), dtype=float)
    d = xi.shape[-1]
    h = u.fd_step
    H = np.empty((d, d))
    pts = [xi]
    for k in range(d):
        for m in (-2, -1, 1, 2):
            q = xi.copy()
            q[k] += m * h
            pts.append(q)
    for i in range(d):
        for j in range(i):
            for si in (1, -1):
                for sj in (1, -1):
                    q = xi.copy()
                    q[i] += si * h
                    q[j] += sj * h
                    pts.append(q)
    vals = u(np.stack(pts))
    u0 = vals[0]
    k = 1
    for idx in range(d):
        m2, m1, p1, p2 = vals[k : k + 4]
        H[idx, idx] = (-m2 + 16 * m1 - 30 * u0 + 16 * p1 - p2) / (12.0 * h * h)
        k += 4
    for i in range(d):
        for j in range(i):
            pp, pm, mp, mm = vals[k : k + 4]
            H[i, j] = H[j, i] = (pp - pm - mp + mm) / (4.0 * h * h)
            k += 4
    return H


def _field_coefficients(n: int, xi: np.ndarray) -> np.ndarray:
    """c_i(xi) with X_i = d/dcoord_i + c_i d/dt for the 2n horizontal fields."""
    c = np.empty(2 * n)
    c[:n] = 2.0 * xi[n : 2 * n]
    c[n:] = -2.0 * xi[:n]
    return c


def vector_field(index: int, u: SmoothFunction, xi: np.ndarray) -> float:
    """Apply one frame field at xi: index 0 is T = d/dt, 1..2n are X_1..X_2n."""
    n = u.n
    if not 0 <= index <= 2 * n:
        raise ValueError(f"field index must lie in 0..{2 * n}, got {index}")
    xi = np.asarray(xi, dtype=float)
    g = euclidean_gradient(u, xi)
    if index == 0:
        return float(g[-1])
    i = index - 1
    c = _field_coefficients(n, xi)
    return float(g[i] + c[i] * g[-1])


def horizontal_gradient(u: SmoothFunction, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    g = euclidean_gradient(u, xi)
    c = _field_coefficients(u.n, xi)
    return g[:-1] + c * g[-1]


def second_horizontal(u: SmoothFunction, xi: np.ndarray, i: int, j: int) -> float:
    """X_i X_j u(xi) for 1-based horizontal indices i, j."""
    n = u.n
    xi = np.asarray(xi, dtype=float)
    g = euclidean_gradient(u, xi)
    H = euclidean_hessian(u, xi)
    c = _field_coefficients(n, xi)
    i0, j0 = i - 1, j - 1
    td = 2 * n
    # d/dcoord_{i0} of c_{j0}: nonzero only on conjugate pairs.
    if j0 < n and i0 == n + j0:
        dc = 2.0
    elif j0 >= n and i0 == j0 - n:
        dc = -2.0
    else:
        dc = 0.0
    return float(
        H[i0, j0]
        + dc * g[td]
        + c[j0] * H[i0, td]
        + c[i0] * H[td, j0]
        + c[i0] * c[j0] * H[td, td]
    )


def symmetrized_hessian(u: SmoothFunction, xi: np.ndarray) -> np.ndarray:
    """(1/2)(X_i X_j + X_j X_i) u, a symmetric (2n, 2n) matrix.

    Assembled from a single Euclidean jet; the antisymmetric part (which
    carries the commutator -4 d/dt) cancels, so no first-order term appears.
    """
    n = u.n
    xi = np.asarray(xi, dtype=float)
    H = euclidean_hessian(u, xi)
    c = _field_coefficients(n, xi)
    td = 2 * n
    Hzz = H[:td, :td]
    Hzt = H[:td, td]
    Htt = H[td, td]
    return Hzz + np.outer(Hzt, c) + np.outer(c, Hzt) + np.outer(c, c) * Htt


def sublaplacian(u: SmoothFunction, xi: np.ndarray) -> float:
    """Sum of squares of the horizontal fields; trace of the symmetrized Hessian."""
    return float(np.trace(symmetrized_hessian(u, xi)))


@dataclass
class TaylorPoly2:
    """Left Taylor polynomial of homogeneous degree 2 anchored at base."""

    base: np.ndarray
    value: float
    grad: np.ndarray  # horizontal gradient, length 2n
    dt: float
    hess: np.ndarray  # symmetrized horizontal Hessian, (2n, 2n)
    n: int = field(default=1)

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        return taylor_eval(self, xi)


def maclaurin_p2(u: SmoothFunction, xi0: np.ndarray) -> TaylorPoly2:
    """Degree-2 expansion of u at xi0 in the group sense.

    The coefficients are the derivatives of xi -> u(xi0 * xi) at the identity,
    which by left invariance of the frame are the frame derivatives of u at xi0.
    """
    xi0 = np.asarray(xi0, dtype=float)
    return TaylorPoly2(
        base=xi0.copy(),
        value=float(u(xi0)),
        grad=horizontal_gradient(u, xi0),
        dt=vector_field(0, u, xi0),
        hess=symmetrized_hessian(u, xi0),
        n=u.n,
    )


def taylor_eval(poly: TaylorPoly2, xi: np.ndarray) -> np.ndarray:
    """Evaluate the polynomial using the group increment xi0^-1 * xi."""
    xi = np.asarray(xi, dtype=float)
    inc = group.group_mul(group.group_inv(poly.base), xi)
    z = group.horizontal(inc)
    t = inc[..., -1]
    quad = 0.5 * np.sum(z * (z @ poly.hess), axis=-1)
    return poly.value + z @ poly.grad + poly.dt * t + quad


def remainder_order(
    u: SmoothFunction,
    xi0: np.ndarray,
    direction: np.ndarray,
    ks: range = range(2, 11),
) -> float:
    """Fitted decay slope of |u - P_2| along xi0 * Phi_lam(direction), lam = 2^-k.

    Returns REMAINDER_EXACT when every remainder is at rounding level, which is
    what happens for polynomials of homogeneous degree <= 2.
    """
    xi0 = np.asarray(xi0, dtype=float)
    direction = np.asarray(direction, dtype=float)
    nrm = group.koranyi_norm(direction)
    if nrm == 0:
        raise ValueError("direction must be nonzero")
    direction = group.dilate(1.0 / nrm, direction)
    poly = maclaurin_p2(u, xi0)
    lams = np.array([2.0 ** -k for k in ks])
    pts = np.stack([group.group_mul(xi0, group.dilate(l, direction)) for l in lams])
    resid = np.abs(u(pts) - taylor_eval(poly, pts))
    scale = max(abs(poly.value), float(np.max(np.abs(u(pts)))), 1.0)
    if np.all(resid < 1e-14 * scale):
        return REMAINDER_EXACT
    # Rounding-dominated rungs would pollute the fit; keep the resolvable ones.
    keep = resid > 1e-13 * scale
    if np.count_nonzero(keep) < 3:
        return REMAINDER_EXACT
    slope = np.polyfit(np.log(lams[keep]), np.log(resid[keep]), 1)[0]
    return float(slope)


def translate(u: SmoothFunction, zeta: np.ndarray) -> SmoothFunction:
    """Left translation u(zeta * .), with partials mapped through the constant Jacobian."""
    zeta = np.asarray(zeta, dtype=float)
    n = u.n
    d = group.dim_of(n)
    J = np.eye(d)
    # t-row of d(zeta*xi)/dxi: dt'/dx = 2 y_zeta, dt'/dy = -2 x_zeta, dt'/dt = 1.
    J[-1, :n] = 2.0 * zeta[n : 2 * n]
    J[-1, n : 2 * n] = -2.0 * zeta[:n]

    def ev(coords):
        return u(group.group_mul(zeta, coords))

    grad = None
    hess = None
    if u.gradient is not None:
        def grad(coords, _J=J):
            return u.gradient(group.group_mul(zeta, coords)) @ _J

    if u.hessian is not None:
        def hess(coords, _J=J):
            H = u.hessian(group.group_mul(zeta, coords))
            return _J.T @ H @ _J

    support = None
    if u.support_radius is not None:
        # Support shifts; a gauge ball around zeta^-1 covers it (triangle inequality).
        support = u.support_radius + float(group.koranyi_norm(zeta))
    return SmoothFunction(
        evaluator=ev, n=n, gradient=grad, hessian=hess, fd_step=u.fd_step,
        support_radius=support, far_value=u.far_value, bound=u.bound, name=u.name,
    )


def dilate_function(u: SmoothFunction, lam: float) -> SmoothFunction:
    """Precomposition with the dilation, u(lam z, lam^2 t)."""
    if lam <= 0:
        raise ValueError("dilation factor must be positive")
    n = u.n
    d = group.dim_of(n)
    scale = np.full(d, lam)
    scale[-1] = lam * lam

    def ev(coords):
        return u(group.dilate(lam, coords))

    grad = None
    hess = None
    if u.gradient is not None:
        def grad(coords):
            return u.gradient(group.dilate(lam, coords)) * scale

    if u.hessian is not None:
        def hess(coords):
            return u.hessian(group.dilate(lam, coords)) * np.outer(scale, scale)

    support = None
    if u.support_radius is not None:
        support = u.support_radius / lam
    return SmoothFunction(
        evaluator=ev, n=n, gradient=grad, hessian=hess, fd_step=u.fd_step,
        support_radius=support, far_value=u.far_value, bound=u.bound, name=u.name,
    )
