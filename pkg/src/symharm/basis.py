"""Real orthonormal harmonics that transform as rows of the real irreps.

For an irrep ``p`` with real matrices ``Gamma_r`` the projector

    P_jk = (d_p / N) sum_g Gamma_r(g)[j, k] P(g)

applied to one real harmonic ``Yr_{l,m}`` yields ``d_p`` functions, one per
row ``j``, that transform together as the rows of ``Gamma_r``.  Sweeping
``m`` gives ``2l + 1`` such candidate blocks; Gram-Schmidt on the blocks
keeps ``N_{p;l}`` of them.  The real coefficients ``Hr`` (in ``Yr_l``) are
primary, the complex ones follow as ``Hc = Hr U_l^H``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import CountMismatch, IrrepNotRealified
from .groups import FiniteRotationGroup, build_group
from .harmonics import check_d_stack, real_sph_harm_all, sph_harm_all, ul_matrix
from .irreps import Irrep, load_irreps, multiplicity_on_sphere
from .realify import RealificationResult, realify_irrep

NORM_TOL = 1e-8
ACCEPT_TOL = 1e-6
FLAVORS = ("real", "complex")


@dataclass(frozen=True)
class CoefficientBlock:
    """``d_p x (2l+1)`` coefficients of one vector of basis functions.

    ``flavor == "real"`` means the columns multiply ``Yr_{l,m}``,
    ``"complex"`` that they multiply ``Y_{l,m}``; ``n`` is 1-based.
    """

    group: str
    p: int
    l: int
    n: int
    flavor: str
    H: np.ndarray

    @property
    def dim(self) -> int:
        return self.H.shape[0]


@dataclass
class BasisSetL:
    group: str
    l: int
    real: list[CoefficientBlock]
    complex: list[CoefficientBlock]
    counts: dict[int, int]
    oracle_counts: dict[int, int] = field(default_factory=dict)

    def blocks(self, flavor: str = "real") -> list[CoefficientBlock]:
        return self.real if flavor == "real" else self.complex

    def stacked(self, flavor: str = "real") -> np.ndarray:
        """All block rows stacked in (p, n) order."""
        blocks = self.blocks(flavor)
        if not blocks:
            return np.zeros((0, 2 * self.l + 1))
        return np.vstack([b.H for b in blocks])

    @property
    def n_functions(self) -> int:
        return sum(b.dim for b in self.real)


@dataclass(frozen=True)
class SymmetryContext:
    """A group with its irreps and the realified forms of the potentially-real ones."""

    group: FiniteRotationGroup
    irreps: tuple[Irrep, ...]
    realified: dict[int, RealificationResult]

    def gamma_r(self, p: int) -> np.ndarray:
        try:
            return self.realified[p].gamma_r
        except KeyError:
            raise IrrepNotRealified(f"irrep p={p} of {self.group.name} has no real form") from None

    def irrep(self, p: int) -> Irrep:
        return self.irreps[p - 1]

    @property
    def real_ps(self) -> list[int]:
        return sorted(self.realified)


@functools.lru_cache(maxsize=None)
def get_context(name: str) -> SymmetryContext:
    irreps = tuple(load_irreps(name))
    realified = {ir.p: realify_irrep(ir) for ir in irreps if ir.realness == "potentially_real"}
    return SymmetryContext(build_group(name), irreps, realified)


def _context(group) -> SymmetryContext:
    return group if isinstance(group, SymmetryContext) else get_context(group)


def projection_rows_all(gamma_r: np.ndarray, dstack: np.ndarray, k: int) -> np.ndarray:
    """Projection coefficients for every ``m`` at once, shape ``(2l+1, d_p, 2l+1)``.

    ``out[m, j, :]`` expands ``P_jk Yr_{l,m}`` in ``Yr_l``; ``k`` is 0-based.
    """
    d = gamma_r.shape[1]
    return np.einsum("gj,gmn->mjn", gamma_r[:, :, k], dstack) * (d / len(gamma_r))


def projection_rows(group, p: int, k: int, l: int, m: int, flavor: str = "real") -> np.ndarray:
    """Coefficients of ``P_jk Yr_{l,m}`` for ``j = 1..d_p``; ``k`` is 1-based.

    The real flavor expands in ``Yr_l``, the complex flavor in ``Y_l``.
    """
    ctx = _context(group)
    G = ctx.gamma_r(p)
    dstack = check_d_stack(l, ctx.group.rotations)
    raw = projection_rows_all(G, dstack, k - 1)[m + l]
    if flavor == "complex":
        return raw @ ul_matrix(l).conj().T
    return raw


def normalize_block(raw: np.ndarray, k: int, tol: float = NORM_TOL) -> np.ndarray | None:
    """Divide all rows by the norm of row ``k`` (1-based); ``None`` if that norm is ~0."""
    c = np.linalg.norm(raw[k - 1])
    if c <= tol:
        return None
    return raw / c


def _project_out(B: np.ndarray, accepted: list[np.ndarray], k: int) -> np.ndarray:
    # blocks that transform alike overlap only row-to-row, with one common
    # coefficient; the distinguished row k is enough to read it off
    for H in accepted:
        B = B - (H[k] @ B[k]) * H
    return B


def gram_schmidt_blocks(candidates, k: int = 1, tol: float = ACCEPT_TOL, projector=None) -> list[np.ndarray]:
    """Orthonormalize row-orthonormal candidate blocks that transform alike.

    Candidates are visited in order; each is projected against the accepted
    set (twice, for stability) and kept when the residual of row ``k``
    exceeds ``tol``.  With ``projector`` (the output of
    :func:`projection_rows_all` for the same ``k``) every accepted block is
    regenerated from its row ``k``, which strips the rounding noise a
    weakly-populated candidate picks up when it is normalized.
    """
    accepted: list[np.ndarray] = []
    k0 = k - 1
    for B in candidates:
        B = _project_out(np.asarray(B, dtype=float), accepted, k0)
        r = np.linalg.norm(B[k0])
        if r <= tol:
            continue
        B = _project_out(B / r, accepted, k0)
        B = B / np.linalg.norm(B[k0])
        if projector is not None:
            B = np.einsum("m,mjn->jn", B[k0], projector)
            B = _project_out(B, accepted, k0)
            B = B / np.linalg.norm(B[k0])
        accepted.append(B)
    return accepted


def _blocks_for_irrep(G: np.ndarray, dstack: np.ndarray) -> tuple[list[np.ndarray], int]:
    d = G.shape[1]
    for k in range(1, d + 1):
        raw = projection_rows_all(G, dstack, k - 1)
        cands = [c for c in (normalize_block(raw[i], k) for i in range(raw.shape[0])) if c is not None]
        if cands:
            return gram_schmidt_blocks(cands, k, projector=raw), k
    return [], 1


def assemble_basis(group, l: int) -> BasisSetL:
    """All real-irrep blocks of degree ``l`` for a group name or context.

    Raises :class:`CountMismatch` when a Gram-Schmidt count disagrees with
    the character multiplicity.
    """
    ctx = _context(group)
    dstack = check_d_stack(l, ctx.group.rotations)
    Uh = ul_matrix(l).conj().T
    real, cplx, counts, oracle = [], [], {}, {}
    for p in ctx.real_ps:
        blocks, _ = _blocks_for_irrep(ctx.gamma_r(p), dstack)
        expected = multiplicity_on_sphere(ctx.irrep(p), l)
        oracle[p] = expected
        if len(blocks) != expected:
            raise CountMismatch(
                f"{ctx.group.name} p={p} l={l}: Gram-Schmidt kept {len(blocks)} blocks, characters give {expected}"
            )
        counts[p] = len(blocks)
        for n, H in enumerate(blocks, start=1):
            real.append(CoefficientBlock(ctx.group.name, p, l, n, "real", H))
            cplx.append(CoefficientBlock(ctx.group.name, p, l, n, "complex", H @ Uh))
    return BasisSetL(ctx.group.name, l, real, cplx, counts, oracle)


def evaluate_basis(block: CoefficientBlock, theta, phi, tol: float = 1e-10) -> np.ndarray:
    """Values of the ``d_p`` basis functions, shape ``theta.shape + (d_p,)``.

    Complex-flavor evaluations must come out real to within ``tol``.
    """
    if block.flavor == "real":
        return real_sph_harm_all(block.l, theta, phi) @ block.H.T
    vals = sph_harm_all(block.l, theta, phi) @ block.H.T
    resid = np.max(np.abs(vals.imag), initial=0.0)
    if resid > tol:
        raise ArithmeticError(f"basis evaluation has imaginary residue {resid:.3e}")
    return vals.real


def imaginary_residue(block: CoefficientBlock, theta, phi) -> float:
    """Largest imaginary part of the complex-flavor evaluation, before truncation."""
    H = block.H if block.flavor == "complex" else block.H @ ul_matrix(block.l).conj().T
    vals = sph_harm_all(block.l, theta, phi) @ H.T
    return float(np.max(np.abs(vals.imag), initial=0.0))


def verify_transformation(block: CoefficientBlock, group, theta, phi, elements=None) -> float:
    """Max of ``|F(R_g^{-1} x) - Gamma_r(g)^T F(x)|`` over elements and sample points."""
    ctx = _context(group)
    G = ctx.gamma_r(block.p)
    idx = range(ctx.group.order) if elements is None else elements
    st = np.sin(theta)
    x = np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)
    F = evaluate_basis(block, theta, phi)
    worst = 0.0
    for g in idx:
        y = x @ ctx.group.rotations[g]  # rows R_g^T x
        th = np.arccos(np.clip(y[..., 2], -1.0, 1.0))
        ph = np.arctan2(y[..., 1], y[..., 0])
        lhs = evaluate_basis(block, th, ph)
        rhs = F @ G[g]  # (Gamma^T F)_j = sum_i Gamma[i, j] F_i
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
