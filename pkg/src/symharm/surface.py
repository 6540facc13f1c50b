"""Grid tabulation of basis functions and radial surface meshes.

The surface of one basis function ``F_j`` is the set of points
``r(theta, phi) * x(theta, phi)`` with ``r = kappa1 + kappa2 * F_j``.  With
``kappa1 = 0.75`` and ``kappa2 = 0.25 / max |F_j|`` over the grid, ``r`` lies
in ``[0.5, 1]``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import CoefficientBlock, evaluate_basis
from .datafiles import format_float
from .harmonics import unit_vectors

KAPPA1 = 0.75
RADIUS_SPAN = 0.25
MIN_THETA = 16


def angle_grid(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """``theta`` from 0 to pi inclusive and ``phi = 2 pi k / n_phi``, as 2-D arrays."""
    if n_theta < 2 or n_phi < 1:
        raise ValueError("grid needs n_theta >= 2 and n_phi >= 1")
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return np.meshgrid(theta, phi, indexing="ij")


def parse_grid(text: str) -> tuple[int, int]:
    """``"NTHETAxNPHI"`` to a pair of ints."""
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise ValueError(f"grid {text!r} is not of the form NTHETAxNPHI")
    return int(parts[0]), int(parts[1])


def write_grid_csv(block: CoefficientBlock, n_theta: int, n_phi: int, path) -> Path:
    """Tabulate all ``d_p`` functions of a block; columns ``theta,phi,f_1..f_dp``."""
    T, P = angle_grid(n_theta, n_phi)
    F = evaluate_basis(block, T, P)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta", "phi"] + [f"f_{j + 1}" for j in range(block.dim)])
        for t, p, f in zip(T.ravel(), P.ravel(), F.reshape(-1, block.dim)):
            writer.writerow([format_float(t), format_float(p)] + [format_float(v) for v in f])
    return path


@dataclass(frozen=True)
class MeshSpec:
    n_theta: int = 91
    n_phi: int = 180
    kappa1: float = KAPPA1
    kappa2: float | None = None  # None: RADIUS_SPAN / max |F| on the grid

    def __post_init__(self):
        if self.n_theta < MIN_THETA:
            raise ValueError(f"n_theta must be at least {MIN_THETA}")
        if self.n_phi < 3:
            raise ValueError("n_phi must be at least 3")


@dataclass
class Mesh:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3), 0-based
    values: np.ndarray  # (V,) function value per vertex
    radius: np.ndarray  # (V,)

    def edges(self) -> np.ndarray:
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        return np.sort(e, axis=1)

    def neighbours(self) -> list[set[int]]:
        nb = [set() for _ in range(len(self.vertices))]
        for a, b in self.edges():
            nb[a].add(b)
            nb[b].add(a)
        return nb


def sphere_topology(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pole-plus-rings vertex angles and outward-oriented triangles.

    Vertex 0 is the north pole, then ``n_theta - 2`` rings of ``n_phi``
    vertices, then the south pole.
    """
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    rings = n_theta - 2
    vt = np.concatenate([[0.0], np.repeat(theta[1:-1], n_phi), [np.pi]])
    vp = np.concatenate([[0.0], np.tile(phi, rings), [0.0]])
    south = 1 + rings * n_phi

    def ring(i, k):
        return 1 + i * n_phi + (k % n_phi)

    faces = []
    for k in range(n_phi):
        faces.append((0, ring(0, k), ring(0, k + 1)))
    for i in range(rings - 1):
        for k in range(n_phi):
            a, b = ring(i, k), ring(i, k + 1)
            c, d = ring(i + 1, k), ring(i + 1, k + 1)
            faces.append((a, c, d))
            faces.append((a, d, b))
    for k in range(n_phi):
        faces.append((ring(rings - 1, k), south, ring(rings - 1, k + 1)))
    return vt, vp, np.array(faces, dtype=int)


def build_mesh(block: CoefficientBlock, j: int, spec: MeshSpec = MeshSpec()) -> Mesh:
    """Radial surface of function ``j`` (1-based) of a block."""
    if not 1 <= j <= block.dim:
        raise ValueError(f"function index j={j} outside 1..{block.dim}")
    vt, vp, faces = sphere_topology(spec.n_theta, spec.n_phi)
    F = evaluate_basis(block, vt, vp)[:, j - 1]
    peak = np.max(np.abs(F))
    if spec.kappa2 is not None:
        kappa2 = spec.kappa2
    else:
        kappa2 = RADIUS_SPAN / peak if peak > 0 else 0.0
    r = spec.kappa1 + kappa2 * F
    return Mesh(unit_vectors(vt, vp) * r[:, None], faces, F, r)


def write_obj(mesh: Mesh, path, comment: str | None = None) -> Path:
    path = Path(path)
    lines = [f"# {comment}"] if comment else []
    lines += [f"v {x:.12f} {y:.12f} {z:.12f}" for x, y, z in mesh.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_obj(path) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and 0-based faces of an OBJ written by :func:`write_obj`."""
    verts, faces = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("v "):
            verts.append([float(t) for t in line.split()[1:4]])
        elif line.startswith("f "):
            faces.append([int(t.split("/")[0]) - 1 for t in line.split()[1:4]])
    return np.array(verts), np.array(faces, dtype=int)


def is_watertight(faces: np.ndarray) -> bool:
    """Every undirected edge is used by exactly two faces, once in each direction."""
    directed = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    fwd = {tuple(e) for e in directed.tolist()}
    if len(fwd) != len(directed):
        return False
    return all((b, a) in fwd for a, b in fwd)


def local_extrema(mesh: Mesh, rtol: float = 1e-12) -> tuple[list[int], list[int]]:
    """Local maxima and minima of the vertex values, one vertex per extremum.

    Neighbouring vertices whose values agree within ``rtol * max|F|`` form a
    plateau (symmetric peaks often fall between grid points and tie exactly).
    A plateau is a maximum (minimum) when every vertex bordering it is
    strictly lower (higher); it is reported by its smallest vertex index.
    """
    F = mesh.values
    tol = rtol * float(np.max(np.abs(F), initial=0.0))
    nb = mesh.neighbours()
    label = np.full(len(F), -1)
    maxima, minima = [], []
    for start in range(len(F)):
        if label[start] >= 0:
            continue
        label[start] = start
        plateau, stack, border = [start], [start], set()
        while stack:
            v = stack.pop()
            for w in nb[v]:
                if abs(F[w] - F[v]) <= tol:
                    if label[w] < 0:
                        label[w] = start
                        plateau.append(w)
                        stack.append(w)
                else:
                    border.add(w)
        others = F[list(border)]
        if not len(others):
            continue
        if np.all(others < F[start]):
            maxima.append(start)
        elif np.all(others > F[start]):
            minima.append(start)
    return maxima, minima
