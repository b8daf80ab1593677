"""Gegenbauer-Gauss quadrature, barycentric interpolation, and integration matrices.

The temporal discretization rests on the Gauss nodes of the ultraspherical
weight (1 - x^2)^(lam - 1/2) on (-1, 1), the barycentric form of the Lagrange
basis at those nodes, and the first-order operational integration matrix Q
whose row l maps nodal samples f(z_j) to the primitive value at z_l:

    (Q f)_l  ~  integral of f from -1 to z_l.

All values are plain numpy arrays, frozen after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

# The quadrature degenerates as lam -> -1/2 (weight mass blows up); keep a
# small buffer above the theoretical limit.
LAMBDA_MIN_GUARD = 1e-6

# Evaluation points closer than this to a node take the nodal value directly
# (removable singularity of the barycentric ratio).
NODE_COINCIDENCE_TOL = 1e-14


@dataclass(frozen=True)
class GegenbauerBasis:
    """Gauss nodes, Christoffel numbers and barycentric weights for one index.

    Attributes
    ----------
    lam : float
        Gegenbauer index, must exceed -1/2 + LAMBDA_MIN_GUARD.
    order : int
        Highest node index; the rule has order + 1 nodes.
    nodes : ndarray
        Strictly increasing, interior to (-1, 1), symmetric about 0.
    christoffel : ndarray
        Positive quadrature weights summing to the weight-function mass.
    bary_weights : ndarray
        Barycentric weights with alternating signs; the global positive scale
        is arbitrary since it cancels in the barycentric ratio.
    """

    lam: float
    order: int
    nodes: np.ndarray
    christoffel: np.ndarray
    bary_weights: np.ndarray


@dataclass(frozen=True)
class IntegrationMatrix:
    """Dense first-order integration matrix at the basis nodes."""

    order: int
    entries: np.ndarray


@dataclass(frozen=True)
class TimeGrid:
    """Gauss nodes mapped onto (0, T) via t = T (z + 1) / 2."""

    horizon: float
    nodes: np.ndarray


def _recurrence_offdiag(lam: float, n: int) -> tuple[float, np.ndarray]:
    # Monic three-term recurrence b-coefficients of the symmetric Jacobi
    # polynomials with alpha = beta = lam - 1/2, plus the total weight mass
    # b_0 = integral of (1 - x^2)^(lam - 1/2) over (-1, 1).
    a = lam - 0.5
    b0 = 2.0 ** (2.0 * a + 1.0) * math.gamma(a + 1.0) ** 2 / math.gamma(2.0 * a + 2.0)
    m = np.arange(1.0, n + 1.0)
    s = 2.0 * m + 2.0 * a
    with np.errstate(invalid="ignore"):
        b = 4.0 * m * (m + a) ** 2 * (m + 2.0 * a) / (s * s * (s * s - 1.0))
    # The m = 1 term is 0/0 at a = -1/2 (Chebyshev); its reduced form
    # 1 / (3 + 2a) holds for every a > -1.
    b[0] = 1.0 / (3.0 + 2.0 * a)
    return b0, b


def build_basis(lam: float, order: int) -> GegenbauerBasis:
    """Build the Gauss rule and barycentric weights for index ``lam``.

    Nodes and Christoffel numbers come from the Golub-Welsch symmetric
    tridiagonal eigensolve of the Jacobi recurrence with alpha = beta =
    lam - 1/2. Barycentric weights use the trigonometric form
    (-1)^l sin(arccos z_l) sqrt(w_l).

    Parameters
    ----------
    lam : float
        Gegenbauer index, > -1/2 + LAMBDA_MIN_GUARD.
    order : int
        Highest node index, >= 1; yields order + 1 nodes.
    """
    if not lam > -0.5 + LAMBDA_MIN_GUARD:
        raise ValueError(
            f"lam must exceed {-0.5 + LAMBDA_MIN_GUARD}; got {lam}"
        )
    if order < 1:
        raise ValueError(f"order must be >= 1; got {order}")

    b0, b = _recurrence_offdiag(lam, order)
    nodes, vectors = eigh_tridiagonal(np.zeros(order + 1), np.sqrt(b))
    weights = b0 * vectors[0, :] ** 2

    # The exact rule is symmetric about 0; enforce it to kill the last few
    # ulps of eigensolver asymmetry.
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])

    bary = (-1.0) ** np.arange(order + 1) * np.sin(np.arccos(nodes)) * np.sqrt(weights)

    for arr in (nodes, weights, bary):
        arr.setflags(write=False)
    return GegenbauerBasis(lam=lam, order=order, nodes=nodes,
                           christoffel=weights, bary_weights=bary)


def bary_interpolate(basis: GegenbauerBasis, nodal_values, t: float):
    """Evaluate the Lagrange interpolant of the nodal values at t in [-1, 1].

    Uses the second barycentric form; if t coincides with a node within
    NODE_COINCIDENCE_TOL the nodal value is returned exactly.
    """
    values = np.asarray(nodal_values)
    if values.shape != (basis.order + 1,):
        raise ValueError(
            f"expected {basis.order + 1} nodal values, got shape {values.shape}"
        )
    diff = t - basis.nodes
    hit = np.abs(diff) < NODE_COINCIDENCE_TOL
    if hit.any():
        return values[int(np.argmax(hit))]
    ratios = basis.bary_weights / diff
    return (ratios @ values) / ratios.sum()


def _lagrange_matrix(basis: GegenbauerBasis, points) -> np.ndarray:
    # Rows are the Lagrange basis values L_j(points[p]) in barycentric form.
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    diff = pts[:, None] - basis.nodes[None, :]
    hit = np.abs(diff) < NODE_COINCIDENCE_TOL
    rows_hit = hit.any(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = basis.bary_weights[None, :] / diff
        out = ratios / ratios.sum(axis=1, keepdims=True)
    if rows_hit.any():
        out[rows_hit] = hit[rows_hit].astype(float)
    return out


def build_integration_matrix(basis: GegenbauerBasis) -> IntegrationMatrix:
    """First-order barycentric integration matrix Q at the basis nodes.

    Entry Q[l, j] is the exact integral of the Lagrange basis polynomial L_j
    from -1 to z_l, computed with a Gauss-Legendre rule of
    ceil((order + 1) / 2) + 1 points, exact for degree <= order integrands.
    """
    npts = (basis.order + 2) // 2 + 1
    glx, glw = np.polynomial.legendre.leggauss(npts)
    size = basis.order + 1
    entries = np.empty((size, size))
    for l in range(size):
        half = 0.5 * (basis.nodes[l] + 1.0)
        pts = -1.0 + half * (glx + 1.0)
        entries[l] = half * (glw @ _lagrange_matrix(basis, pts))
    entries.setflags(write=False)
    return IntegrationMatrix(order=basis.order, entries=entries)


def shift_integration_matrix(qmat: IntegrationMatrix, horizon: float) -> IntegrationMatrix:
    """Scale Q by T/2, giving the integration matrix on the shifted nodes in (0, T)."""
    if not horizon > 0.0:
        raise ValueError(f"horizon must be positive; got {horizon}")
    entries = 0.5 * horizon * qmat.entries
    entries.setflags(write=False)
    return IntegrationMatrix(order=qmat.order, entries=entries)


def time_grid(basis: GegenbauerBasis, horizon: float) -> TimeGrid:
    """Map the basis nodes onto (0, T)."""
    if not horizon > 0.0:
        raise ValueError(f"horizon must be positive; got {horizon}")
    nodes = 0.5 * horizon * (basis.nodes + 1.0)
    nodes.setflags(write=False)
    return TimeGrid(horizon=horizon, nodes=nodes)
