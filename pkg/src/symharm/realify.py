"""Turn a potentially-real complex unitary irrep into a real orthogonal one.

The similarity ``S`` is found without solving for it directly:

1. average ``Gamma(g) A Gamma(g)^T`` over the group to get a symmetric
   ``Z`` that intertwines ``Gamma`` with its conjugate;
2. rescale ``Z`` to the symmetric unitary ``C``;
3. factor ``C = S S^T`` (Takagi) through the eigenvectors of the real
   ``2d x 2d`` matrix ``[[Re C, Im C], [Im C, -Re C]]``.

Then ``S^H Gamma(g) S`` is real for every ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllProbesZero, EigenFailure, NotIsotropic, NotPotentiallyReal, SpectrumViolation
from .irreps import Irrep, exchange_matrix

PROBE_SEED = 0x5EED
MAX_RANDOM_PROBES = 16
ZERO_TOL = 1e-8
IMAG_TOL = 1e-9


def jacobi_eigh(B, max_sweeps: int = 100, tol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a small real symmetric matrix.

    Cyclic Jacobi: every sweep visits the pairs ``(p, q)``, ``p < q``, in
    row order and annihilates ``B[p, q]`` with a plane rotation.  Converges
    when the off-diagonal Frobenius norm falls below ``tol`` times the norm of
    ``B``.  Ties in the sorted eigenvalues keep their diagonal order.
    """
    A = np.array(B, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or np.max(np.abs(A - A.T), initial=0.0) > 1e-12:
        raise ValueError("jacobi_eigh needs a symmetric square matrix")
    V = np.eye(n)
    scale = max(np.linalg.norm(A), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                J = np.array([[c, s], [-s, c]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ J
    else:
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off > tol * scale * 1e3:
            raise EigenFailure(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})")
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def compute_Z(irrep, A) -> np.ndarray:
    """Group average ``(1/N) sum_g Gamma(g) A (Gamma(g)^*)^{-1}``.

    For unitary ``Gamma`` the inverse of the conjugate is the transpose.
    """
    G = irrep.matrices if hasattr(irrep, "matrices") else np.asarray(irrep)
    return np.einsum("gij,jk,glk->il", G, np.asarray(A, dtype=complex), G) / len(G)


def normalize_C(Z, tol: float = ZERO_TOL) -> tuple[np.ndarray, float]:
    """Scale a nonzero symmetric ``Z`` with ``Z^* Z = c I`` to a symmetric unitary ``C``."""
    Z = np.asarray(Z, dtype=complex)
    if np.max(np.abs(Z)) <= tol:
        raise ValueError("Z is zero; choose another probe")
    d = Z.shape[0]
    P = Z.conj() @ Z
    c = np.trace(P).real / d
    diag = np.diag(P)
    if np.max(np.abs(P - np.diag(diag))) > tol or np.ptp(diag.real) > tol or np.max(np.abs(diag.imag)) > tol:
        raise NotIsotropic("Z^* Z is not a multiple of the identity")
    return Z / np.sqrt(c), float(c)


def real_form(C) -> np.ndarray:
    C = np.asarray(C, dtype=complex)
    return np.block([[C.real, C.imag], [C.imag, -C.real]])


def takagi_factor(C, spectrum_tol: float = 1e-7) -> np.ndarray:
    """Unitary ``S`` with ``S S^T = C`` for a symmetric unitary ``C``.

    The eigenvectors of :func:`real_form` with positive eigenvalue have the
    form ``[x; -y]``; ``x - i y`` are coneigenvectors of ``C`` and stacking
    them gives ``S``.
    """
    C = np.asarray(C, dtype=complex)
    d = C.shape[0]
    w, V = jacobi_eigh(real_form(C))
    if np.max(np.abs(np.abs(w) - 1.0)) > spectrum_tol:
        raise SpectrumViolation(f"eigenvalues {w} of the real form are not all +-1")
    pos = V[:, w > 0]
    if pos.shape[1] != d:
        raise SpectrumViolation(f"{pos.shape[1]} positive eigenvalues, expected {d}")
    return pos[:d] + 1j * pos[d:]


@dataclass(frozen=True)
class RealificationResult:
    irrep: Irrep
    S: np.ndarray
    gamma_r: np.ndarray
    c_Z: float
    probe: np.ndarray
    imag_residue: float

    @property
    def C(self) -> np.ndarray:
        return self.S @ self.S.T


def _probes(d: int):
    yield exchange_matrix(d).astype(complex)
    yield np.eye(d, dtype=complex)
    rng = np.random.default_rng(PROBE_SEED)
    for _ in range(MAX_RANDOM_PROBES):
        M = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        yield M + M.T


def realify_irrep(irrep: Irrep) -> RealificationResult:
    """Real orthogonal form ``S^H Gamma(g) S`` of a potentially-real irrep.

    Probes for ``Z`` are tried in a fixed order: exchange matrix, identity,
    then seeded random symmetric matrices.
    """
    if irrep.realness != "potentially_real":
        raise NotPotentiallyReal(f"irrep {irrep.label} is {irrep.realness}")
    for A in _probes(irrep.dim):
        Z = compute_Z(irrep, A)
        if np.max(np.abs(Z)) > ZERO_TOL:
            break
    else:
        raise AllProbesZero(f"every probe gave Z = 0 for irrep {irrep.label}")
    C, c_Z = normalize_C(Z)
    S = takagi_factor(C)
    G = np.conj(S.T) @ irrep.matrices @ S
    resid = float(np.max(np.abs(G.imag)))
    if resid > IMAG_TOL:
        raise ArithmeticError(f"imaginary residue {resid:.3e} after realification of {irrep.label}")
    gamma_r = G.real.copy()
    gamma_r.setflags(write=False)
    return RealificationResult(irrep, S, gamma_r, c_Z, A, resid)
