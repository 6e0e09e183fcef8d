"""Finite-grid models of compact subsets of R^n.

A compact set enters every computation through a deterministic finite grid
contained in it.  Downstream modules take suprema over that grid, so each
certificate is an exact statement about the sampled points; because the
grid lies inside the set it models, certified inequalities remain valid
when the sampling is refined.  Reports carry grid size and resolution so
the surrogate can be judged and tightened.

Supported kinds: axis-aligned boxes, Euclidean balls, spheres (circle in
the plane, latitude-longitude sampled S2 in space), Cartesian products,
affine images, unions, and point clouds read from text files.

Grid construction is a pure function of the model: identical parameters
and resolution yield a bit-identical point list, ordering included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InputError, ValidationError

# Curved sets admit boundary grid points only up to roundoff; the slack
# stays an order of magnitude below the 1e-12 membership contract.
_MEMBERSHIP_SLACK = 1e-13

# Kinds whose grids are driven by the resolution parameter.
SAMPLED_KINDS = ("box", "ball", "sphere")


@dataclass
class CompactSetModel:
    """A compact subset of R^n together with its sampling recipe.

    Instances are built through the module-level constructors (``box``,
    ``ball``, ``sphere``, ``product``, ``affine_image``, ``union``,
    ``from_points``, ``load_point_cloud``), which validate parameters.
    """

    ambient_dim: int
    kind: str
    params: dict[str, Any] = field(repr=False)
    resolution: int = 0

    def describe(self) -> str:
        return f"{self.kind}(n={self.ambient_dim}, resolution={self.resolution})"


def _check_resolution(resolution: int) -> int:
    if not isinstance(resolution, (int, np.integer)) or isinstance(resolution, bool):
        raise ValidationError(f"resolution must be an integer, got {resolution!r}")
    if resolution < 2:
        raise ValidationError(f"resolution must be at least 2, got {resolution}")
    return int(resolution)


def _check_center(center: Sequence[float]) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    if c.ndim != 1 or c.size < 1:
        raise ValidationError("center must be a non-empty 1-d coordinate sequence")
    if not np.all(np.isfinite(c)):
        raise ValidationError("center coordinates must be finite")
    return c


def box(bounds: Sequence[Sequence[float]], resolution: int) -> CompactSetModel:
    """Axis-aligned box given as one (lo, hi) pair per coordinate."""
    pairs = [(float(lo), float(hi)) for lo, hi in bounds]
    if not pairs:
        raise ValidationError("box needs at least one (lo, hi) pair")
    for axis, (lo, hi) in enumerate(pairs):
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValidationError(f"box bounds must be finite (axis {axis})")
        if lo > hi:
            raise ValidationError(f"box lower bound exceeds upper bound on axis {axis}: {lo} > {hi}")
    return CompactSetModel(
        ambient_dim=len(pairs),
        kind="box",
        params={"bounds": pairs},
        resolution=_check_resolution(resolution),
    )


def ball(center: Sequence[float], radius: float, resolution: int) -> CompactSetModel:
    """Closed Euclidean ball of the given center and radius."""
    c = _check_center(center)
    r = float(radius)
    if not np.isfinite(r) or r <= 0.0:
        raise ValidationError(f"ball radius must be positive and finite, got {radius!r}")
    return CompactSetModel(
        ambient_dim=c.size,
        kind="ball",
        params={"center": c, "radius": r},
        resolution=_check_resolution(resolution),
    )


def sphere(center: Sequence[float], radius: float, resolution: int) -> CompactSetModel:
    """Euclidean sphere: a circle for n = 2, latitude-longitude S2 for n = 3."""
    c = _check_center(center)
    if c.size not in (2, 3):
        raise ValidationError(f"sphere supports ambient dimension 2 or 3, got {c.size}")
    r = float(radius)
    if not np.isfinite(r) or r <= 0.0:
        raise ValidationError(f"sphere radius must be positive and finite, got {radius!r}")
    return CompactSetModel(
        ambient_dim=c.size,
        kind="sphere",
        params={"center": c, "radius": r},
        resolution=_check_resolution(resolution),
    )


def product(children: Sequence[CompactSetModel]) -> CompactSetModel:
    """Cartesian product of the child sets, last factor varying fastest."""
    kids = list(children)
    if not kids:
        raise ValidationError("product needs at least one factor")
    for kid in kids:
        if not isinstance(kid, CompactSetModel):
            raise ValidationError("product factors must be CompactSetModel instances")
    return CompactSetModel(
        ambient_dim=sum(k.ambient_dim for k in kids),
        kind="product",
        params={"children": kids},
        resolution=max(k.resolution for k in kids),
    )


def affine_image(matrix: Sequence[Sequence[float]], offset: Sequence[float],
                 child: CompactSetModel) -> CompactSetModel:
    """Image of a child set under x -> A x + b."""
    if not isinstance(child, CompactSetModel):
        raise ValidationError("affine_image child must be a CompactSetModel")
    a = np.asarray(matrix, dtype=float)
    b = np.asarray(offset, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1:
        raise ValidationError("affine matrix must be 2-d with at least one row")
    if a.shape[1] != child.ambient_dim:
        raise ValidationError(
            f"affine matrix has {a.shape[1]} columns but the child set lives in R^{child.ambient_dim}")
    if b.ndim != 1 or b.size != a.shape[0]:
        raise ValidationError("affine offset length must match the matrix row count")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValidationError("affine map entries must be finite")
    return CompactSetModel(
        ambient_dim=a.shape[0],
        kind="affine_image",
        params={"matrix": a, "offset": b, "child": child},
        resolution=child.resolution,
    )


def union(children: Sequence[CompactSetModel]) -> CompactSetModel:
    """Union of child sets in a common ambient space, deduplicated exactly."""
    kids = list(children)
    if not kids:
        raise ValidationError("union needs at least one member")
    dims = {k.ambient_dim for k in kids}
    if len(dims) != 1:
        raise ValidationError(f"union members must share one ambient dimension, got {sorted(dims)}")
    return CompactSetModel(
        ambient_dim=kids[0].ambient_dim,
        kind="union",
        params={"children": kids},
        resolution=max(k.resolution for k in kids),
    )


def from_points(points: Sequence[Sequence[float]]) -> CompactSetModel:
    """Finite point set given directly as an array of coordinates.

    Duplicate rows are dropped, first occurrence kept, so the model is a
    set in the mathematical sense.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
        raise ValidationError("point set must be a non-empty 2-d coordinate array")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("point coordinates must be finite")
    pts = _dedup_rows(pts)
    return CompactSetModel(
        ambient_dim=pts.shape[1],
        kind="point_cloud",
        params={"points": pts},
        resolution=pts.shape[0],
    )


def load_point_cloud(path: str, n: int) -> CompactSetModel:
    """Read a point cloud from a text file, one point per line.

    Coordinates are whitespace separated; blank lines and lines starting
    with ``#`` are ignored.  Every data line must parse as exactly ``n``
    finite reals; parse failures report the offending line number.
    Duplicate points are dropped, first occurrence kept.
    """
    if n < 1:
        raise ValidationError(f"ambient dimension must be at least 1, got {n}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise InputError(f"cannot read point cloud file {path!r}: {exc}") from exc

    rows: list[list[float]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != n:
            raise InputError(
                f"{path}:{lineno}: expected {n} coordinates, found {len(tokens)}")
        try:
            row = [float(tok) for tok in tokens]
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: cannot parse coordinate: {exc}") from exc
        if not all(np.isfinite(row)):
            raise InputError(f"{path}:{lineno}: coordinates must be finite")
        rows.append(row)
    if not rows:
        raise InputError(f"{path}: no data rows found")
    model = from_points(np.asarray(rows, dtype=float))
    model.params["source"] = str(path)
    return model


def _dedup_rows(pts: np.ndarray) -> np.ndarray:
    seen: set[bytes] = set()
    keep: list[int] = []
    for i in range(pts.shape[0]):
        key = pts[i].tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return pts[keep]


def _box_grid(model: CompactSetModel) -> np.ndarray:
    res = model.resolution
    axes = [np.linspace(lo, hi, res) for lo, hi in model.params["bounds"]]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel(order="C") for m in mesh], axis=-1)


def _ball_grid(model: CompactSetModel) -> np.ndarray:
    center = model.params["center"]
    radius = model.params["radius"]
    res = model.resolution
    axes = [np.linspace(c - radius, c + radius, res) for c in center]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel(order="C") for m in mesh], axis=-1)
    dist = np.sqrt(((pts - center) ** 2).sum(axis=1))
    pts = pts[dist <= radius + _MEMBERSHIP_SLACK]
    # Coarse even resolutions can miss the ball entirely; the center is
    # always a member and keeps the grid non-empty.
    if pts.shape[0] == 0 or not np.any(np.all(pts == center, axis=1)):
        pts = np.concatenate([pts, center.reshape(1, -1)], axis=0)
    return pts


def _sphere_grid(model: CompactSetModel) -> np.ndarray:
    center = model.params["center"]
    radius = model.params["radius"]
    res = model.resolution
    if center.size == 2:
        theta = 2.0 * np.pi * np.arange(res) / res
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return center + radius * pts
    # S2: poles plus latitude rings, longitude varying fastest.
    rows = [center + radius * np.array([0.0, 0.0, 1.0])]
    phi = 2.0 * np.pi * np.arange(res) / res
    for i in range(1, res - 1):
        theta = np.pi * i / (res - 1)
        ring = np.stack(
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
             np.full(res, np.cos(theta))], axis=-1)
        rows.append(center + radius * ring)
    rows.append(center + radius * np.array([0.0, 0.0, -1.0]))
    return np.concatenate([np.atleast_2d(r) for r in rows], axis=0)


def _product_grid(model: CompactSetModel) -> np.ndarray:
    grids = [grid(child) for child in model.params["children"]]
    out = grids[0]
    for g in grids[1:]:
        left = np.repeat(out, g.shape[0], axis=0)
        right = np.tile(g, (out.shape[0], 1))
        out = np.concatenate([left, right], axis=1)
    return out


def _affine_grid(model: CompactSetModel) -> np.ndarray:
    child_pts = grid(model.params["child"])
    return child_pts @ model.params["matrix"].T + model.params["offset"]


def _union_grid(model: CompactSetModel) -> np.ndarray:
    parts = [grid(child) for child in model.params["children"]]
    return _dedup_rows(np.concatenate(parts, axis=0))


def _cloud_grid(model: CompactSetModel) -> np.ndarray:
    return model.params["points"].copy()


_GRID_BUILDERS = {
    "box": _box_grid,
    "ball": _ball_grid,
    "sphere": _sphere_grid,
    "product": _product_grid,
    "affine_image": _affine_grid,
    "union": _union_grid,
    "point_cloud": _cloud_grid,
}


def grid(model: CompactSetModel) -> np.ndarray:
    """Deterministic ordered sample of the set, shape (num_points, n).

    Every returned point lies in the modeled set, with at most 1e-12
    deviation for curved boundaries.  The result is never empty.
    """
    if model.kind in SAMPLED_KINDS:
        _check_resolution(model.resolution)
    try:
        builder = _GRID_BUILDERS[model.kind]
    except KeyError:
        raise ValidationError(f"unknown set kind {model.kind!r}") from None
    pts = builder(model)
    if pts.shape[0] < 1:
        raise ValidationError(f"grid for {model.describe()} came out empty")
    return pts
