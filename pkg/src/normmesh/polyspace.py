"""Multivariate polynomial spaces in a graded monomial basis.

The space of real polynomials of total degree at most d in n variables is
carried around as an explicit ordered basis of monomials.  Exponent tuples
are listed degree block by degree block, starting with the zero tuple, and
inside each block lexicographically with the first variable dominant:

    n = 2, d = 2:  1, x1, x2, x1^2, x1*x2, x2^2

Coefficient vectors, Vandermonde matrices, and pointwise evaluation all
follow this one ordering, so indices are meaningful across modules.

Evaluation uses per-coordinate power tables, one multiplication chain per
coordinate, rather than repeated exponentiation.  Coefficient convolution
(`multiply`, `coef_power`) exists for degree bookkeeping and cross checks;
pointwise powering is the intended path for numerics on grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import sets
from .errors import ValidationError


def dim_full(n: int, d: int) -> int:
    """Dimension binomial(d + n, n) of degree-<=d polynomials in n variables.

    Exact integer arithmetic at any size; Python integers do not overflow.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"number of variables must be a positive integer, got {n!r}")
    if not isinstance(d, (int, np.integer)) or d < 0:
        raise ValidationError(f"degree must be a non-negative integer, got {d!r}")
    return math.comb(int(d) + int(n), int(n))


def _degree_block(n: int, total: int) -> Iterator[tuple[int, ...]]:
    """Exponent tuples of exact total degree, leading variable dominant."""
    if n == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _degree_block(n - 1, total - head):
            yield (head,) + tail


@dataclass(frozen=True)
class PolySpace:
    """Polynomials of total degree at most d in n variables."""

    n: int
    d: int
    basis: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)


def poly_space(n: int, d: int) -> PolySpace:
    """Build the space with its graded monomial basis."""
    expected = dim_full(n, d)
    basis = tuple(
        alpha for total in range(int(d) + 1) for alpha in _degree_block(int(n), total))
    if len(basis) != expected:
        raise AssertionError("basis enumeration disagrees with the binomial count")
    return PolySpace(n=int(n), d=int(d), basis=basis)


@dataclass
class CoefVector:
    """A polynomial as coefficients over a space's monomial basis."""

    space: PolySpace
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=float)
        if coeffs.shape != (self.space.dim,):
            raise ValidationError(
                f"coefficient vector must have length {self.space.dim}, got shape {coeffs.shape}")
        self.coefficients = coeffs


def _as_points(points, n: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and n == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[1] != n:
        raise ValidationError(
            f"points must be an array of shape (num_points, {n}), got {pts.shape}")
    if pts.shape[0] < 1:
        raise ValidationError("need at least one evaluation point")
    return pts


def vandermonde(space: PolySpace, points) -> np.ndarray:
    """Evaluation matrix: entry (i, j) is basis monomial j at point i."""
    pts = _as_points(points, space.n)
    npts = pts.shape[0]
    powers = np.ones((space.n, npts, space.d + 1))
    for e in range(1, space.d + 1):
        powers[:, :, e] = powers[:, :, e - 1] * pts.T
    out = np.empty((npts, space.dim))
    for j, alpha in enumerate(space.basis):
        col = powers[0, :, alpha[0]]
        for axis in range(1, space.n):
            col = col * powers[axis, :, alpha[axis]]
        out[:, j] = col
    return out


def evaluate(f: CoefVector, points) -> np.ndarray:
    """Values of the polynomial at the given points."""
    return vandermonde(f.space, points) @ f.coefficients


def sup_norm(f: CoefVector, points) -> float:
    """Max absolute value of the polynomial over the given points."""
    return float(np.abs(evaluate(f, points)).max())


def multiply(f: CoefVector, g: CoefVector) -> CoefVector:
    """Coefficient convolution; the product lives at the summed degree."""
    if f.space.n != g.space.n:
        raise ValidationError("factors must share the number of variables")
    target = poly_space(f.space.n, f.space.d + g.space.d)
    index = {alpha: i for i, alpha in enumerate(target.basis)}
    out = np.zeros(target.dim)
    for i, alpha in enumerate(f.space.basis):
        ca = f.coefficients[i]
        if ca == 0.0:
            continue
        for j, beta in enumerate(g.space.basis):
            cb = g.coefficients[j]
            if cb == 0.0:
                continue
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            out[index[gamma]] += ca * cb
    return CoefVector(target, out)


def coef_power(f: CoefVector, p: int) -> CoefVector:
    """p-th power by repeated convolution (degree bookkeeping path)."""
    if not isinstance(p, (int, np.integer)) or p < 0:
        raise ValidationError(f"power must be a non-negative integer, got {p!r}")
    if p == 0:
        return CoefVector(poly_space(f.space.n, 0), np.ones(1))
    result = f
    for _ in range(int(p) - 1):
        result = multiply(result, f)
    return result


def trace_dimension(space: PolySpace, set_model: sets.CompactSetModel,
                    tol: float = 1e-10) -> int:
    """Numerical dimension of the space restricted to the set's grid.

    Counts singular values of the grid Vandermonde above ``tol`` times the
    largest one.  The set is determining for the space exactly when this
    equals ``space.dim``.
    """
    if tol <= 0.0:
        raise ValidationError(f"tolerance must be positive, got {tol}")
    pts = sets.grid(set_model)
    v = vandermonde(space, pts)
    svals = np.linalg.svd(v, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.count_nonzero(svals > tol * svals[0]))


def is_determining(space: PolySpace, set_model: sets.CompactSetModel,
                   tol: float = 1e-10) -> bool:
    """Whether sup norms over the grid separate the whole space."""
    return trace_dimension(space, set_model, tol) == space.dim
