"""Correlation-space geometry: project states into small Pauli subspaces,
describe the attainable ranges (tetrahedron/octahedron in the diagonal
3-space, square/diamond in the xx-zz plane), locate witness hyperplanes, and
export plot-ready figure data.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import qcore
from .witness import Witness, expected_payoff

DIAGONAL_AXES = ((1, 1), (2, 2), (3, 3))
XZ_AXES = ((1, 1), (3, 3))

TETRAHEDRON_VERTICES = np.array(
    [(1, -1, 1), (-1, 1, 1), (1, 1, -1), (-1, -1, -1)], dtype=np.float64)
OCTAHEDRON_VERTICES = np.array(
    [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    dtype=np.float64)
SQUARE_VERTICES = np.array([(1, 1), (-1, 1), (-1, -1), (1, -1)], dtype=np.float64)
DIAMOND_VERTICES = np.array([(1, 0), (0, 1), (-1, 0), (0, -1)], dtype=np.float64)


@dataclass(frozen=True, eq=False)
class Projection:
    """Coordinates of a state in a chosen Pauli subspace."""

    axes: tuple
    coords: np.ndarray


@dataclass(frozen=True, eq=False)
class RangeModel:
    """Vertex lists of the attainable region for all states and for the
    separable states, in a 2- or 3-dimensional Pauli subspace."""

    dimension: int
    full_vertices: np.ndarray
    separable_vertices: np.ndarray


def project(rho: qcore.DensityMatrix, axes) -> Projection:
    """Project a state onto correlation coordinates Tr(rho * sigma_axis)."""
    axes = tuple(tuple(int(l) for l in ax) for ax in axes)
    table = qcore.pauli_coefficients(rho)
    for ax in axes:
        if len(ax) != rho.n_qubits or any(l not in (0, 1, 2, 3) for l in ax):
            raise ValueError(f"bad axis {ax} for a {rho.n_qubits}-qubit state")
    coords = np.array([table[ax] for ax in axes], dtype=np.float64)
    return Projection(axes=axes, coords=coords)


def range_model(dimension: int) -> RangeModel:
    """Attainable ranges in the diagonal subspaces.

    dimension 3 (axes xx, yy, zz): all two-qubit states project into the
    tetrahedron spanned by the four maximally entangled vertices, separable
    states into the unit octahedron.  dimension 2 (axes xx, zz): the full
    range is the square [-1, 1]^2, the separable range the diamond
    |x| + |y| <= 1.
    """
    if dimension == 3:
        return RangeModel(3, TETRAHEDRON_VERTICES.copy(), OCTAHEDRON_VERTICES.copy())
    if dimension == 2:
        return RangeModel(2, SQUARE_VERTICES.copy(), DIAMOND_VERTICES.copy())
    raise ValueError(f"supported dimensions are 2 and 3, got {dimension}")


def in_full_range(coords, tol: float = 1e-9) -> bool:
    """Tetrahedron membership of diagonal-correlation coordinates: the Bell
    projector expectations (1 + v.c)/4 must all be nonnegative."""
    c = np.asarray(coords, dtype=np.float64)
    return bool(np.min(1.0 + TETRAHEDRON_VERTICES @ c) >= -4.0 * tol)


def werner_line_intersection(witness: Witness) -> float:
    """Parameter z* where the Werner family's payoff changes sign.

    The payoff is affine in z, so two exact evaluations at z = 0 and z = 1
    determine the crossing.  A witness whose payoff does not depend on z has
    no crossing and raises ValueError.
    """
    p0 = expected_payoff(qcore.make_werner(0.0), witness)
    p1 = expected_payoff(qcore.make_werner(1.0), witness)
    slope = p1 - p0
    if abs(slope) < 1e-12:
        raise ValueError("payoff is constant along the Werner line; no intersection")
    return float(-p0 / slope)


def subspace_hyperplane(witness: Witness, axes) -> tuple[np.ndarray, float]:
    """Normal vector and offset of {coords : Tr(rho W) = 0} inside a subspace.

    Valid only when the witness weights are supported on the identity plus
    the subspace axes; then Tr(rho W) = offset + normal . coords with
    normal[k] = w[axes[k]] and offset = w[0,...,0].
    """
    axes = tuple(tuple(int(l) for l in ax) for ax in axes)
    n = witness.n_qubits
    support = {tuple(ix) for ix in np.argwhere(witness.weights.table != 0.0)}
    allowed = set(axes) | {(0,) * n}
    if not support <= allowed:
        raise ValueError(
            f"witness weights outside the subspace: {sorted(support - allowed)}")
    normal = np.array([witness.weights[ax] for ax in axes], dtype=np.float64)
    offset = witness.weights[(0,) * n]
    return normal, float(offset)


# ---------------------------------------------------------------------------
# Figure data export
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FigureData:
    """Plot-ready geometry: polytope edges as point pairs and labeled point
    series (hyperplane patches, witness lines, the Werner segment and its
    zero-payoff intersections)."""

    figure: str
    dimension: int
    edges: list = field(default_factory=list)    # (series, point, point)
    points: list = field(default_factory=list)   # (series, point, werner_z | None)

    def series_points(self, series: str) -> np.ndarray:
        pts = [p for s, p, _ in self.points if s == series]
        if not pts:
            raise KeyError(f"no point series {series!r} in {self.figure}")
        return np.array(pts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        coord_cols = ["x1", "y1", "z1", "x2", "y2", "z2"]
        writer.writerow(["series", "kind", "index", "werner_z"] + coord_cols)

        def fmt(x):
            return f"{x:.17g}"

        def pad(p):
            p = list(p)
            return [fmt(v) for v in p] + [""] * (3 - len(p))

        for i, (series, p, q) in enumerate(self.edges):
            writer.writerow([series, "edge", i, ""] + pad(p) + pad(q))
        for i, (series, p, z) in enumerate(self.points):
            zcol = "" if z is None else fmt(z)
            writer.writerow([series, "point", i, zcol] + pad(p) + [""] * 3)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "figure": self.figure,
            "dimension": self.dimension,
            "edges": [
                {"series": s, "from": list(map(float, p)), "to": list(map(float, q))}
                for s, p, q in self.edges
            ],
            "points": [
                {"series": s, "coords": list(map(float, p)),
                 **({} if z is None else {"werner_z": float(z)})}
                for s, p, z in self.points
            ],
        }


def _polytope_edges(vertices: np.ndarray, tol: float = 1e-9) -> list:
    # For the four regular solids used here, the edge set is exactly the
    # vertex pairs that are not antipodal through the centroid.

    center = vertices.mean(axis=0)
    edges = []
    for i, j in combinations(range(len(vertices)), 2):
        if np.allclose(vertices[i] - center, -(vertices[j] - center), atol=tol):
            continue
        edges.append((vertices[i].copy(), vertices[j].copy()))
    return edges


def _clip_line_to_square(normal: np.ndarray, offset: float) -> tuple[np.ndarray, np.ndarray]:
    """Intersection segment of {offset + normal . c = 0} with [-1, 1]^2."""
    hits = []
    for axis in (0, 1):
        other = 1 - axis
        for border in (-1.0, 1.0):
            if normal[other] == 0.0:
                continue
            val = -(offset + normal[axis] * border) / normal[other]
            if abs(val) <= 1.0 + 1e-12:
                pt = np.empty(2)
                pt[axis] = border
                pt[other] = val
                hits.append(pt)
    uniq = []
    for h in hits:
        if not any(np.allclose(h, u, atol=1e-9) for u in uniq):
            uniq.append(h)
    if len(uniq) < 2:
        raise ValueError("hyperplane does not cross the unit square")
    return uniq[0], uniq[1]


def _line_points(p: np.ndarray, q: np.ndarray, resolution: int) -> np.ndarray:
    lam = np.linspace(0.0, 1.0, resolution)[:, None]
    return (1.0 - lam) * p[None, :] + lam * q[None, :]


def _figure_diagonal(resolution: int) -> FigureData:
    from .witness import werner_witness

    fig = FigureData(figure="fig2", dimension=3)
    for p, q in _polytope_edges(TETRAHEDRON_VERTICES):
        fig.edges.append(("tetrahedron", p, q))
    for p, q in _polytope_edges(OCTAHEDRON_VERTICES):
        fig.edges.append(("octahedron", p, q))

    normal, offset = subspace_hyperplane(werner_witness(), DIAGONAL_AXES)
    on_plane = [v for v in OCTAHEDRON_VERTICES
                if abs(offset + normal @ v) < 1e-12]
    if len(on_plane) != 3:
        raise ValueError("witness plane is not an octahedron face")
    v1, v2, v3 = on_plane
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            l1 = i / resolution
            l2 = j / resolution
            l3 = 1.0 - l1 - l2
            fig.points.append(("hyperplane", l1 * v1 + l2 * v2 + l3 * v3, None))

    z_star = werner_line_intersection(werner_witness())
    werner_dir = np.array([1.0, -1.0, 1.0])
    for z in np.linspace(0.0, 1.0, resolution):
        fig.points.append(("werner_line", z * werner_dir, float(z)))
    fig.points.append(("intersection", z_star * werner_dir, z_star))
    return fig


def _figure_xz(resolution: int) -> FigureData:
    from .witness import fixed_chsh_witness, strengthened_chsh_witness, werner_witness

    fig = FigureData(figure="fig3", dimension=2)
    for p, q in _polytope_edges(SQUARE_VERTICES):
        fig.edges.append(("black_square", p, q))
    for p, q in _polytope_edges(DIAMOND_VERTICES):
        fig.edges.append(("blue_square", p, q))

    for series, wit in (("chsh_line", fixed_chsh_witness()),
                        ("strengthened_line", strengthened_chsh_witness())):
        normal, offset = subspace_hyperplane(wit, XZ_AXES)
        p, q = _clip_line_to_square(normal, offset)
        for pt in _line_points(p, q, resolution):
            fig.points.append((series, pt, None))

    werner_dir = np.array([1.0, 1.0])
    for z in np.linspace(0.0, 1.0, resolution):
        fig.points.append(("werner_line", z * werner_dir, float(z)))
    for series, wit in (("intersection_chsh", fixed_chsh_witness()),
                        ("intersection_strengthened", strengthened_chsh_witness())):
        z_star = werner_line_intersection(wit)
        fig.points.append((series, z_star * werner_dir, z_star))
    return fig


def export_figure_data(which: str, resolution: int = 20) -> FigureData:
    """Geometry tables for the two standard figures.

    "fig2": diagonal-correlation 3-space with the tetrahedron, octahedron,
    the witness plane x - y + z = 1 and the Werner segment.  "fig3": the
    xx/zz plane with both squares, the two CHSH witness lines and the Werner
    diagonal.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if which == "fig2":
        return _figure_diagonal(resolution)
    if which == "fig3":
        return _figure_xz(resolution)
    raise ValueError(f"unknown figure {which!r}; use 'fig2' or 'fig3'")
