import csv

import numpy as np
import pytest
from numpy.testing import assert_allclose

from symharm.basis import assemble_basis, evaluate_basis
from symharm.surface import (
    Mesh,
    MeshSpec,
    angle_grid,
    build_mesh,
    is_watertight,
    local_extrema,
    parse_grid,
    read_obj,
    sphere_topology,
    write_grid_csv,
    write_obj,
)


def icosahedral_invariant():
    (blk,) = [b for b in assemble_basis("I", 6).real if b.p == 1]
    return blk


def signed_volume(vertices, faces):
    a, b, c = (vertices[faces[:, k]] for k in range(3))
    return np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6


def test_angle_grid():
    T, P = angle_grid(5, 4)
    assert T.shape == (5, 4)
    assert_allclose(T[:, 0], np.linspace(0, np.pi, 5))
    assert_allclose(P[0], [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    with pytest.raises(ValueError):
        angle_grid(1, 4)


def test_parse_grid():
    assert parse_grid("91x180") == (91, 180)
    assert parse_grid("3X4") == (3, 4)
    for bad in ("91", "ax3", "3x", "-3x4", "3x4x5"):
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_csv_layout(tmp_path):
    blk = [b for b in assemble_basis("O", 3).real if b.dim == 3][0]
    path = write_grid_csv(blk, 4, 6, tmp_path / "f.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    rows = list(csv.reader(path.open(newline="")))
    assert rows[0] == ["theta", "phi", "f_1", "f_2", "f_3"]
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (24, 5)
    assert_allclose(evaluate_basis(blk, data[:, 0], data[:, 1]), data[:, 2:], atol=1e-15)


def test_mesh_spec_limits():
    with pytest.raises(ValueError):
        MeshSpec(n_theta=15)
    with pytest.raises(ValueError):
        MeshSpec(n_phi=2)
    assert MeshSpec().n_theta == 91 and MeshSpec().n_phi == 180


@pytest.mark.parametrize("nt,nphi", [(16, 3), (20, 7), (91, 180)])
def test_topology_closed_and_outward(nt, nphi):
    vt, vp, faces = sphere_topology(nt, nphi)
    assert len(vt) == 2 + (nt - 2) * nphi
    assert len(faces) == 2 * (nt - 2) * nphi
    assert is_watertight(faces)
    # Euler characteristic of a sphere
    edges = {tuple(sorted(e)) for f in faces.tolist() for e in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0]))}
    assert len(vt) - len(edges) + len(faces) == 2
    x = np.stack([np.sin(vt) * np.cos(vp), np.sin(vt) * np.sin(vp), np.cos(vt)], axis=-1)
    assert signed_volume(x, faces) > 0


def test_watertight_detects_holes_and_flips():
    _, _, faces = sphere_topology(16, 5)
    assert not is_watertight(faces[1:])
    flipped = faces.copy()
    flipped[0] = flipped[0, ::-1]
    assert not is_watertight(flipped)


def test_mesh_radius_range_and_obj_roundtrip(tmp_path):
    mesh = build_mesh(icosahedral_invariant(), 1, MeshSpec(31, 60))
    assert mesh.radius.min() >= 0.5 - 1e-12 and mesh.radius.max() <= 1 + 1e-12
    assert abs(np.max(np.abs(mesh.radius - 0.75)) - 0.25) < 1e-12
    assert_allclose(np.linalg.norm(mesh.vertices, axis=1), mesh.radius, atol=1e-12)
    path = write_obj(mesh, tmp_path / "m.obj", comment="test")
    assert path.read_text().startswith("# test\n")
    v, f = read_obj(path)
    assert_allclose(v, mesh.vertices, atol=1e-11)
    assert np.array_equal(f, mesh.faces)
    assert is_watertight(f) and signed_volume(v, f) > 0


def test_fixed_kappa():
    mesh = build_mesh(icosahedral_invariant(), 1, MeshSpec(16, 8, kappa1=1.0, kappa2=0.0))
    assert_allclose(mesh.radius, 1.0)


def test_mesh_rejects_bad_function_index():
    with pytest.raises(ValueError):
        build_mesh(icosahedral_invariant(), 2, MeshSpec(16, 8))


@pytest.mark.parametrize("nt,nphi", [(91, 180), (90, 181), (121, 240), (61, 120)])
def test_icosahedral_invariant_extrema(nt, nphi):
    # degree-6 invariant: extrema sit on the 12 five-fold and 20 three-fold axes
    mesh = build_mesh(icosahedral_invariant(), 1, MeshSpec(nt, nphi))
    maxima, minima = local_extrema(mesh)
    counts = sorted([len(maxima), len(minima)])
    assert counts == [12, 20]


@pytest.mark.parametrize("name,l,expected", [("T", 3, [4, 4]), ("O", 4, [6, 8])])
@pytest.mark.parametrize("nt,nphi", [(91, 180), (90, 181)])
def test_lowest_invariant_extrema(name, l, expected, nt, nphi):
    # xyz has its extrema on the cube diagonals; the cubic quartic on the
    # 6 four-fold axes and 8 three-fold axes
    (blk,) = [b for b in assemble_basis(name, l).real if b.p == 1]
    maxima, minima = local_extrema(build_mesh(blk, 1, MeshSpec(nt, nphi)))
    assert sorted([len(maxima), len(minima)]) == expected


def test_local_extrema_merges_plateaus():
    # octahedron with two adjacent tied peaks; vertices 3 and 5 are separate minima
    faces = np.array([[0, 2, 3], [0, 3, 1], [1, 3, 4], [1, 4, 5], [1, 5, 0], [0, 5, 2], [2, 5, 4], [2, 4, 3]])
    values = np.array([1.0, 1.0, 0.2, 0.1, 0.3, -0.5])
    mesh = Mesh(np.zeros((6, 3)), faces, values, np.ones(6))
    assert local_extrema(mesh) == ([0], [3, 5])


def test_local_extrema_on_toy_mesh():
    faces = np.array([[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]])
    mesh = Mesh(np.eye(4)[:, :3], faces, np.array([3.0, 1.0, 2.0, 0.0]), np.ones(4))
    assert local_extrema(mesh) == ([0], [3])
