"""Node selection by determinant maximization, with a swap certificate.

Given a polynomial space of dimension m and a grid G inside a compact set,
we pick m grid points z_1..z_m whose cardinal functions f_k (the unique
space members with f_k(z_l) = delta_kl) are uniformly small on G.  Those
nodes norm the space: expanding any g through its cardinal interpolant,

    max_G |g|  <=  L * max_k |g(z_k)|,    L = max_{z in G} sum_k |f_k(z)|,

and L itself is at most m * max_k max_G |f_k|.

The selection loop is a row-exchange determinant ascent.  By Cramer's
rule, replacing node k with a grid point z multiplies the determinant of
the node evaluation matrix by exactly f_k(z), so "no swap can grow |det|
by more than a (1 + tol_swap) factor" and "every |f_k| stays below
1 + tol_swap on the grid" are the same statement.  Each accepted swap
grows log|det| by at least log(1 + tol_swap); on a finite grid that
bounds the number of swaps and forces termination.

A greedy pass seeds the exchange: rows of the orthonormalized grid
Vandermonde are picked one by one, each maximizing the norm of its
component orthogonal to the span of the rows already chosen (ties go to
the lowest grid index).  All determinant arithmetic runs in log-absolute
form on that orthonormalized basis; cardinal values and determinant
ratios are invariant under the basis change, while the conditioning keeps
moderate degrees far from overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import polyspace, sets
from .errors import NonDeterminingError, ValidationError

DEFAULT_TOL_SWAP = 1e-10
DEFAULT_RANK_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 100


@dataclass
class NodeSet:
    """Selected nodes plus the certificates the selection run produced.

    ``log_abs_det`` is reported in the orthonormalized (conditioned)
    basis.  ``swap_optimal`` records that a full exchange sweep found no
    improving swap, which by the Cramer identity is the same as
    ``lagrange_sup <= 1 + tol_swap``.
    """

    space: polyspace.PolySpace
    nodes: np.ndarray
    node_indices: tuple[int, ...]
    log_abs_det: float
    swap_optimal: bool
    lagrange_sup: float
    tol_swap: float
    seed: int
    grid_size: int
    sweeps: int = 0

    def to_json_dict(self) -> dict:
        return {
            "degree": self.space.d,
            "ambient_dim": self.space.n,
            "points": [[float(x) for x in row] for row in self.nodes],
            "log_abs_det": float(self.log_abs_det),
            "swap_optimal": bool(self.swap_optimal),
            "lagrange_sup": float(self.lagrange_sup),
        }


@dataclass
class LagrangeSystem:
    """Cardinal functions of a node set as monomial coefficient columns.

    Column k of ``coef`` holds the coefficients of f_k over the space's
    basis, so vandermonde(space, nodes) @ coef is the identity up to
    ``residual``.
    """

    node_set: NodeSet
    coef: np.ndarray = field(repr=False)
    residual: float = 0.0


def _conditioned_basis(space: polyspace.PolySpace, grid_points: np.ndarray,
                       rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormalize the grid Vandermonde columns; fail if rank deficient."""
    if grid_points.shape[0] < space.dim:
        raise ValidationError(
            f"grid has {grid_points.shape[0]} points but the space needs at least "
            f"{space.dim} to determine a node set")
    v = polyspace.vandermonde(space, grid_points)
    svals = np.linalg.svd(v, compute_uv=False)
    rank = int(np.count_nonzero(svals > rank_tol * svals[0])) if svals[0] > 0 else 0
    if rank < space.dim:
        raise NonDeterminingError(
            f"grid does not determine the space at degree {space.d}: numerical rank "
            f"{rank} < dimension {space.dim}", rank=rank, dim=space.dim)
    q, _ = np.linalg.qr(v, mode="reduced")
    return q


def _cardinal_values(q: np.ndarray, indices: Sequence[int]) -> np.ndarray:
    """Matrix C with C[z, k] = f_k(grid point z) for nodes q[indices]."""
    sub = q[list(indices)]
    try:
        return np.linalg.solve(sub.T, q.T).T
    except np.linalg.LinAlgError as exc:
        raise ValidationError(f"node matrix is singular to working precision: {exc}") from exc


def _greedy_rows(q: np.ndarray) -> list[int]:
    """Pivoted orthogonalization over rows; ties break to lowest index."""
    n_rows, m = q.shape
    residual = q.copy()
    chosen: list[int] = []
    taken = np.zeros(n_rows, dtype=bool)
    for _ in range(m):
        norms = np.einsum("ij,ij->i", residual, residual)
        norms[taken] = -1.0
        pick = int(np.argmax(norms))
        if norms[pick] <= 0.0:
            raise NonDeterminingError(
                "grid rows span fewer directions than the space dimension",
                rank=len(chosen), dim=m)
        direction = residual[pick] / np.sqrt(norms[pick])
        residual -= np.outer(residual @ direction, direction)
        taken[pick] = True
        chosen.append(pick)
    return chosen


def _log_abs_det(q: np.ndarray, indices: Sequence[int]) -> float:
    sign, logdet = np.linalg.slogdet(q[list(indices)])
    if sign == 0.0:
        raise ValidationError("node matrix is singular to working precision")
    return float(logdet)


def select_nodes(space: polyspace.PolySpace, set_model: sets.CompactSetModel,
                 seed: int = 0, max_sweeps: int = DEFAULT_MAX_SWEEPS,
                 tol_swap: float = DEFAULT_TOL_SWAP) -> NodeSet:
    """Pick dim(space) grid points by greedy init plus exchange sweeps.

    One sweep walks the nodes in index order; for each node the grid is
    scanned in grid order and the first swap improving |det| by a factor
    above 1 + tol_swap is applied immediately.  Sweeps repeat until one
    passes clean (then ``swap_optimal`` is true) or ``max_sweeps`` is
    exhausted (best nodes so far, ``swap_optimal`` false).

    The run is deterministic given (space, set_model, seed, max_sweeps);
    the seed is recorded for provenance and reserved for randomized
    variants, the exchange itself draws no random numbers.
    """
    if not isinstance(max_sweeps, (int, np.integer)) or max_sweeps < 1:
        raise ValidationError(f"max_sweeps must be a positive integer, got {max_sweeps!r}")
    if tol_swap <= 0.0:
        raise ValidationError(f"tol_swap must be positive, got {tol_swap}")
    grid_points = sets.grid(set_model)
    q = _conditioned_basis(space, grid_points)
    chosen = _greedy_rows(q)

    m = space.dim
    cardinals = _cardinal_values(q, chosen)
    swap_optimal = False
    sweeps_used = 0
    for _ in range(int(max_sweeps)):
        sweeps_used += 1
        improved = False
        for k in range(m):
            better = np.flatnonzero(np.abs(cardinals[:, k]) > 1.0 + tol_swap)
            if better.size:
                chosen[k] = int(better[0])
                cardinals = _cardinal_values(q, chosen)
                improved = True
        if not improved:
            swap_optimal = True
            break

    return NodeSet(
        space=space,
        nodes=grid_points[chosen].copy(),
        node_indices=tuple(int(i) for i in chosen),
        log_abs_det=_log_abs_det(q, chosen),
        swap_optimal=swap_optimal,
        lagrange_sup=float(np.abs(cardinals).max()),
        tol_swap=float(tol_swap),
        seed=int(seed),
        grid_size=int(grid_points.shape[0]),
        sweeps=sweeps_used,
    )


def make_node_set(space: polyspace.PolySpace, set_model: sets.CompactSetModel,
                  node_indices: Sequence[int],
                  tol_swap: float = DEFAULT_TOL_SWAP) -> NodeSet:
    """Certify an explicitly chosen set of grid indices as nodes.

    ``swap_optimal`` is computed from the Cramer identity: the node set is
    exchange-stationary exactly when no cardinal exceeds 1 + tol_swap on
    the grid.
    """
    indices = [int(i) for i in node_indices]
    if len(indices) != space.dim:
        raise ValidationError(
            f"need exactly {space.dim} node indices for this space, got {len(indices)}")
    if len(set(indices)) != len(indices):
        raise ValidationError("node indices must be distinct")
    grid_points = sets.grid(set_model)
    if any(i < 0 or i >= grid_points.shape[0] for i in indices):
        raise ValidationError("node index out of grid range")
    q = _conditioned_basis(space, grid_points)
    cardinals = _cardinal_values(q, indices)
    sup = float(np.abs(cardinals).max())
    return NodeSet(
        space=space,
        nodes=grid_points[indices].copy(),
        node_indices=tuple(indices),
        log_abs_det=_log_abs_det(q, indices),
        swap_optimal=sup <= 1.0 + tol_swap,
        lagrange_sup=sup,
        tol_swap=float(tol_swap),
        seed=0,
        grid_size=int(grid_points.shape[0]),
    )


def lagrange(node_set: NodeSet) -> LagrangeSystem:
    """Solve for monomial coefficients of the cardinal functions.

    One step of iterative refinement follows the direct solve; the
    defect against the identity must come out below 1e-8.
    """
    space = node_set.space
    v = polyspace.vandermonde(space, node_set.nodes)
    eye = np.eye(space.dim)
    try:
        coef = np.linalg.solve(v, eye)
        coef += np.linalg.solve(v, eye - v @ coef)
    except np.linalg.LinAlgError as exc:
        raise ValidationError(
            f"node Vandermonde is singular to working precision: {exc}") from exc
    residual = float(np.abs(v @ coef - eye).max())
    if not np.isfinite(residual) or residual > 1e-8:
        raise ValidationError(
            f"cardinal solve residual {residual:.3e} exceeds 1e-8; the node "
            f"Vandermonde is too ill conditioned in the monomial basis")
    return LagrangeSystem(node_set=node_set, coef=coef, residual=residual)


def grid_norming_constant(node_set: NodeSet, set_model: sets.CompactSetModel) -> float:
    """The constant L = max over the grid of sum_k |f_k|.

    Every space member g satisfies max_G |g| <= L * max_k |g(z_k)|.
    Cardinals are evaluated through the conditioned basis; their values
    do not depend on the basis choice.
    """
    grid_points = sets.grid(set_model)
    indices = list(node_set.node_indices)
    if max(indices) >= grid_points.shape[0] or not np.array_equal(
            grid_points[indices], node_set.nodes):
        raise ValidationError(
            "node set does not match this set's grid; certify against the grid "
            "the nodes were selected from")
    q = _conditioned_basis(node_set.space, grid_points)
    cardinals = _cardinal_values(q, indices)
    return float(np.abs(cardinals).sum(axis=1).max())


def norming_certificate(system: LagrangeSystem, set_model: sets.CompactSetModel) -> float:
    """Norming constant for the node set behind a cardinal system."""
    return grid_norming_constant(system.node_set, set_model)
