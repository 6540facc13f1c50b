import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_angles
from symharm import basis as basis_mod
from symharm.basis import (
    CoefficientBlock,
    assemble_basis,
    evaluate_basis,
    get_context,
    gram_schmidt_blocks,
    imaginary_residue,
    normalize_block,
    projection_rows,
    verify_transformation,
)
from symharm.errors import CountMismatch, IrrepNotRealified
from symharm.harmonics import check_d_stack, real_sph_harm_all, spherical_angles, sphere_quadrature, ul_matrix, unit_vectors
from symharm.irreps import character, multiplicity_on_sphere


def blocks_of(basis, p):
    return [b for b in basis.real if b.p == p]


# --- projection -------------------------------------------------------------------


def test_projection_trivial_constant(group_name):
    assert_allclose(projection_rows(group_name, 1, 1, 0, 0), [[1.0]], atol=1e-14)


def test_projection_icosahedral_invariant_absent_at_l1():
    for m in (-1, 0, 1):
        assert np.max(np.abs(projection_rows("I", 1, 1, 1, m))) < 1e-14


def test_projection_matches_direct_group_average(rng):
    # (1/60) sum_g Yr_{6,0}(R_g^{-1} x), evaluated pointwise
    ctx = get_context("I")
    th, ph = random_angles(rng, 40)
    x = unit_vectors(th, ph)
    avg = np.zeros(len(th))
    for R in ctx.group.rotations:
        avg += real_sph_harm_all(6, *spherical_angles(x @ R))[:, 6]
    avg /= 60
    row = projection_rows("I", 1, 1, 6, 0)
    assert np.max(np.abs(row)) > 0.1
    assert_allclose(real_sph_harm_all(6, th, ph) @ row[0], avg, atol=1e-12)
    # after normalization it is the unique degree-6 invariant, up to sign
    H = normalize_block(row, 1)[0]
    (inv,) = blocks_of(assemble_basis("I", 6), 1)
    assert abs(abs(H @ inv.H[0]) - 1) < 1e-12


def test_projection_complex_flavor_consistent():
    real = projection_rows("O", 5, 1, 4, 2)
    cplx = projection_rows("O", 5, 1, 4, 2, flavor="complex")
    assert_allclose(cplx, real @ ul_matrix(4).conj().T, atol=1e-15)


def test_projection_requires_real_form():
    with pytest.raises(IrrepNotRealified):
        projection_rows("T", 2, 1, 3, 0)


def test_normalize_block_cases():
    assert normalize_block(np.zeros((3, 5)), 1) is None
    assert_allclose(normalize_block(np.array([[1.0]]), 1), [[1.0]])
    B = normalize_block(np.array([[0.0, 2.0], [2.0, 0.0]]), 2)
    assert_allclose(B, [[0, 1], [1, 0]])


@pytest.mark.parametrize("name,p,l", [("O", 4, 1), ("I", 5, 6), ("T", 4, 7), ("O", 3, 8)])
def test_candidate_blocks_are_row_orthonormal(name, p, l):
    for m in range(-l, l + 1):
        B = normalize_block(projection_rows(name, p, 1, l, m), 1)
        if B is not None:
            assert np.max(np.abs(B @ B.T - np.eye(B.shape[0]))) < 1e-9


def test_octahedral_vector_single_candidate_direction():
    cands = [normalize_block(projection_rows("O", 4, 1, 1, m), 1) for m in (-1, 0, 1)]
    cands = [c for c in cands if c is not None]
    assert len(cands) >= 1
    assert len(gram_schmidt_blocks(cands, 1)) == 1


def test_gram_schmidt_orders_and_rejects_duplicates():
    a = np.array([[1.0, 0.0, 0.0]])
    b = np.array([[0.6, 0.8, 0.0]])
    out = gram_schmidt_blocks([a, a, b], 1)
    assert len(out) == 2
    assert_allclose(out[0], a)
    assert_allclose(out[1], [[0.0, 1.0, 0.0]], atol=1e-15)


# --- assembly -----------------------------------------------------------------


def test_assembly_examples():
    b = assemble_basis("I", 0)
    assert [(x.p, x.n) for x in b.real] == [(1, 1)]
    b = assemble_basis("O", 2)
    assert [(x.p, x.dim) for x in b.real] == [(3, 2), (5, 3)]
    b = assemble_basis("T", 2)
    assert b.n_functions == 3
    assert len(blocks_of(assemble_basis("T", 4), 4)) == 2
    assert len(blocks_of(assemble_basis("I", 30), 1)) == 2


@pytest.mark.parametrize("l", [0, 1, 2, 3, 6, 9, 12])
def test_counts_and_stacked_orthogonality(group_name, l):
    ctx = get_context(group_name)
    b = assemble_basis(group_name, l)
    assert b.counts == b.oracle_counts
    for p, n in b.counts.items():
        assert n == multiplicity_on_sphere(ctx.irrep(p), l)
    H = b.stacked()
    assert np.max(np.abs(H @ H.T - np.eye(H.shape[0])), initial=0.0) < 1e-10
    if group_name in "OI":
        assert H.shape == (2 * l + 1, 2 * l + 1)
    else:
        mE = multiplicity_on_sphere(ctx.irrep(2), l)
        assert H.shape[0] == 2 * l + 1 - 2 * mE
    Hc = b.stacked("complex")
    assert np.max(np.abs(Hc - H @ ul_matrix(l).conj().T)) < 1e-10
    assert np.max(np.abs(Hc @ Hc.conj().T - np.eye(H.shape[0])), initial=0.0) < 1e-10


def test_block_rows_real_and_orthonormal():
    for b in assemble_basis("I", 11).real:
        assert b.H.dtype == float
        assert np.max(np.abs(b.H @ b.H.T - np.eye(b.dim))) < 1e-10


@pytest.mark.parametrize("l", range(0, 7))
def test_span_matches_character_projector(group_name, l):
    # the span of all blocks of irrep p is the isotypic component, whose
    # projector (d/N) sum_g conj(chi(g)) P(g) needs only the character
    ctx = get_context(group_name)
    D = check_d_stack(l, ctx.group.rotations)
    b = assemble_basis(group_name, l)
    for p in ctx.real_ps:
        ir = ctx.irrep(p)
        Pi = np.einsum("g,gij->ij", np.conj(character(ir)), D).real * ir.dim / ctx.group.order
        blocks = blocks_of(b, p)
        span = sum((x.H.T @ x.H for x in blocks), np.zeros_like(Pi))
        assert np.max(np.abs(span - Pi)) < 1e-10


def test_count_mismatch_is_fatal(monkeypatch):
    monkeypatch.setattr(basis_mod, "multiplicity_on_sphere", lambda irrep, l: 7)
    with pytest.raises(CountMismatch):
        assemble_basis("O", 3)


def test_assembly_is_deterministic():
    a = assemble_basis("I", 20)
    get_context.cache_clear()
    b = assemble_basis("I", 20)
    assert np.array_equal(a.stacked(), b.stacked())


def test_k_fallback_when_first_row_vanishes(monkeypatch):
    # a distinguished row that is identically zero forces k = 2
    from symharm.basis import _blocks_for_irrep

    ctx = get_context("O")
    G = ctx.gamma_r(4)
    D = check_d_stack(1, ctx.group.rotations)
    real_rows = basis_mod.projection_rows_all

    def fake(gamma_r, dstack, k):
        raw = real_rows(gamma_r, dstack, k)
        return raw * 0 if k == 0 else raw

    monkeypatch.setattr(basis_mod, "projection_rows_all", fake)
    blocks, k = _blocks_for_irrep(G, D)
    assert k == 2 and len(blocks) == 1


# --- evaluation ---------------------------------------------------------------------


def test_constant_block_value(group_name, rng):
    (blk,) = assemble_basis(group_name, 0).real
    th, ph = random_angles(rng, 10)
    assert_allclose(np.abs(evaluate_basis(blk, th, ph)), 1 / (2 * np.sqrt(np.pi)), atol=1e-15)


@pytest.mark.parametrize("l", [1, 4, 6, 10])
def test_quadrature_orthonormality_across_blocks(group_name, l):
    b = assemble_basis(group_name, l)
    th, ph, w = sphere_quadrature(l)
    F = np.concatenate([evaluate_basis(x, th, ph) for x in b.real], axis=1)
    assert np.max(np.abs((F.T * w) @ F - np.eye(F.shape[1]))) < 1e-8


def test_flavors_agree_pointwise(rng):
    th, ph = random_angles(rng, 100)
    b = assemble_basis("O", 9)
    for r, c in zip(b.real, b.complex):
        assert np.max(np.abs(evaluate_basis(r, th, ph) - evaluate_basis(c, th, ph))) < 1e-9
        assert imaginary_residue(c, th, ph) < 1e-10


def test_complex_evaluation_rejects_imaginary_values():
    # a lone Y_{1,-1} coefficient is not a real function
    blk = CoefficientBlock("O", 4, 1, 1, "complex", np.array([[1.0, 0.0, 0.0]], dtype=complex))
    with pytest.raises(ArithmeticError):
        evaluate_basis(blk, np.array([1.0]), np.array([0.5]))


def test_icosahedral_invariant_constant_on_orbit():
    ctx = get_context("I")
    (blk,) = blocks_of(assemble_basis("I", 6), 1)
    axis = np.array([0.0, 0.0, 1.0])
    images = np.array([R @ axis for R in ctx.group.rotations])
    vals = evaluate_basis(blk, *spherical_angles(images))[:, 0]
    assert np.ptp(vals) < 1e-12


def test_verify_transformation_examples(rng):
    th, ph = random_angles(rng, 30)
    (inv,) = blocks_of(assemble_basis("I", 6), 1)
    assert verify_transformation(inv, "I", th, ph) < 1e-9
    (vec,) = blocks_of(assemble_basis("I", 1), 2)
    assert verify_transformation(vec, "I", th, ph) < 1e-9
    for b in assemble_basis("O", 7).real:
        assert verify_transformation(b, "O", th, ph, elements=[0]) < 1e-12


def test_wrong_irrep_fails_transformation(rng):
    th, ph = random_angles(rng, 30)
    (vec,) = blocks_of(assemble_basis("I", 3), 3)
    wrong = CoefficientBlock("I", 2, vec.l, vec.n, "real", vec.H)
    assert verify_transformation(wrong, "I", th, ph) > 1e-3


@settings(max_examples=25, deadline=None)
@given(st.sampled_from("TOI"), st.integers(0, 14), st.integers(0, 2**32 - 1))
def test_transformation_law_property(name, l, seed):
    th, ph = random_angles(np.random.default_rng(seed), 5)
    for b in assemble_basis(name, l).real:
        assert verify_transformation(b, name, th, ph) < 1e-9
