"""Regenerate the bundled group and irrep data files.

Generators are evaluated in 50-digit arithmetic and rounded once to
float64.  Irreps are first built in a real orthogonal form from elementary
constructions (permutation actions, symmetric-square actions, quotient
characters) and then rotated into a complex unitary basis ``W`` with
``W W^T = J`` (J the exchange permutation).  The 3-dimensional vector irreps
use the basis change that links the rotation matrices to the complex
icosahedral irreps, so ``Gamma(g) = S^H R_g S`` for that ``S``.

Usage::

    python scripts/build_irrep_data.py [--out DIR]
"""

from __future__ import annotations

import argparse
from pathlib import Path

import mpmath
import numpy as np

from symharm.datafiles import SCHEMA_VERSION, data_dir, write_json
from symharm.groups import group_from_generators

mpmath.mp.dps = 50

# Basis change relating rotation matrices to the complex 3-dim irreps.
S_VECTOR = np.array(
    [
        [-1 / np.sqrt(2), 0, -1 / np.sqrt(2)],
        [-1j / np.sqrt(2), 0, 1j / np.sqrt(2)],
        [0, 1, 0],
    ]
)


def _to_float(M) -> np.ndarray:
    out = np.array([[float(M[i, j]) for j in range(M.cols)] for i in range(M.rows)])
    out[np.abs(out) < 1e-40] = 0.0  # residue of sin(pi) at working precision
    return out


def _mp_axis_rotation(axis, angle) -> np.ndarray:
    a = mpmath.matrix(axis)
    a = a / mpmath.norm(a)
    K = mpmath.matrix([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    R = mpmath.eye(3) + mpmath.sin(angle) * K + (1 - mpmath.cos(angle)) * (K * K)
    return _to_float(R)


def generators(name: str) -> list[np.ndarray]:
    three_fold = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    if name == "T":
        return [three_fold, np.diag([-1.0, -1.0, 1.0])]
    if name == "O":
        return [np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]), three_fold]
    if name == "I":
        # z through two opposite vertices; the edge from the north vertex to
        # its neighbour at azimuth 0 lies in the xz-plane.  The 2-fold axis
        # passes through that edge's midpoint.
        half = mpmath.atan(2) / 2
        return [
            _mp_axis_rotation([0, 0, 1], 2 * mpmath.pi / 5),
            _mp_axis_rotation([mpmath.sin(half), 0, mpmath.cos(half)], mpmath.pi),
        ]
    raise ValueError(name)


def pairing_basis(d: int) -> np.ndarray:
    """Unitary ``W`` with ``W W^T = J``."""
    W = np.zeros((d, d), dtype=complex)
    r = 1 / np.sqrt(2)
    for i in range(d // 2):
        j = d - 1 - i
        W[i, i], W[j, i] = r, r
        W[i, j], W[j, j] = 1j * r, -1j * r
    if d % 2:
        W[d // 2, d // 2] = 1.0
    return W


def sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis of the complement of (1, ..., 1), Helmert style."""
    Q = np.zeros((n, n - 1))
    for k in range(1, n):
        Q[:k, k - 1] = 1.0
        Q[k, k - 1] = -k
        Q[:, k - 1] /= np.linalg.norm(Q[:, k - 1])
    return Q


def symmetric_square_traceless(R: np.ndarray) -> np.ndarray:
    E = []
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        M = np.zeros((3, 3))
        M[i, j] = M[j, i] = 1 / np.sqrt(2)
        E.append(M)
    E.append(np.diag([1.0, -1.0, 0.0]) / np.sqrt(2))
    E.append(np.diag([1.0, 1.0, -2.0]) / np.sqrt(6))
    return np.array([[np.sum(Ei * (R @ Ej @ R.T)) for Ej in E] for Ei in E])


def orthogonal_axis_triples(group) -> list[tuple[int, int, int]]:
    axes = [e.axis_angle[0] for e in group.elements if abs(e.axis_angle[1] - np.pi) < 1e-9]
    triples = set()
    for i, a in enumerate(axes):
        perp = [j for j, b in enumerate(axes) if abs(a @ b) < 1e-9]
        for j in perp:
            for k in perp:
                if j < k and abs(axes[j] @ axes[k]) < 1e-9:
                    triples.add(tuple(sorted((i, j, k))))
    return [tuple(axes[i] for i in t) for t in sorted(triples)]


def triple_permutations(group) -> np.ndarray:
    """Permutation matrices of the action of I on its five orthogonal 2-fold triples."""
    triples = orthogonal_axis_triples(group)
    assert len(triples) == 5

    def which(vec):
        for t, trip in enumerate(triples):
            if any(abs(abs(vec @ a) - 1) < 1e-9 for a in trip):
                return t
        raise AssertionError

    P = np.zeros((group.order, 5, 5))
    for g, R in enumerate(group.rotations):
        for t, trip in enumerate(triples):
            P[g, which(R @ trip[0]), t] = 1.0
    return P


def real_irreps(group) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """``(label, real family, basis W)`` per irrep, in the conventional order."""
    N = group.order
    R = group.rotations
    ones = np.ones((N, 1, 1))
    vector = S_VECTOR.conj().T

    if group.name == "T":
        # T / V4 = Z3, generated by the 3-fold generator (word letter 0)
        k = np.array([sum(1 for c in w if c == 0) % 3 for w in group.words])
        omega = np.exp(2j * np.pi / 3)
        return [
            ("A", ones, None),
            ("1E", (omega**k).reshape(N, 1, 1), None),
            ("2E", (omega ** (2 * k)).reshape(N, 1, 1), None),
            ("T", R, vector),
        ]

    if group.name == "O":
        perms = np.abs(np.rint(R))
        sign = np.array([np.linalg.det(P) for P in perms]).reshape(N, 1, 1)
        Q = sum_zero_basis(3)
        E = np.einsum("ia,gij,jb->gab", Q, perms, Q)
        return [
            ("A1", ones, None),
            ("A2", sign, None),
            ("E", E, pairing_basis(2)),
            ("T1", R, vector),
            ("T2", sign * R, pairing_basis(3)),
        ]

    if group.name == "I":
        perms = triple_permutations(group)
        Q = sum_zero_basis(5)
        G = np.einsum("ia,gij,jb->gab", Q, perms, Q)
        H = np.array([symmetric_square_traceless(Rg) for Rg in R])
        # outer automorphism: conjugate the S5 image by a transposition
        tau = np.eye(5)[[1, 0, 2, 3, 4]]
        flat = perms.reshape(N, -1)
        sigma = [int(np.argmin(np.abs(flat - (tau @ P @ tau).ravel()).sum(axis=1))) for P in perms]
        T2 = R[sigma]
        return [
            ("A", ones, None),
            ("T1", R, vector),
            ("T2", T2, S_VECTOR.T),  # conj(S)^H = S^T
            ("G", G, pairing_basis(4)),
            ("H", H, pairing_basis(5)),
        ]
    raise ValueError(group.name)


def check_family(group, F: np.ndarray, label: str) -> None:
    T = group.mult_table
    err = np.max(np.abs(F[:, None] @ F[None, :] - F[T]))
    d = F.shape[1]
    unit = np.max(np.abs(F @ np.conj(np.transpose(F, (0, 2, 1))) - np.eye(d)))
    assert err < 1e-12 and unit < 1e-12, (group.name, label, err, unit)


def build(name: str, out: Path) -> None:
    gens = generators(name)
    order = {"T": 12, "O": 24, "I": 60}[name]
    group = group_from_generators(name, gens, order)
    write_json(
        out / f"group_{name}.json",
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "group",
            "name": name,
            "expected_order": order,
            "generators": [g.ravel() for g in gens],
        },
    )

    gen_idx = group.generator_indices()
    entries = []
    chars = []
    for p, (label, F, W) in enumerate(real_irreps(group), start=1):
        if W is not None:
            F = W @ F @ W.conj().T
        F = F.astype(complex)
        check_family(group, F, label)
        chars.append(np.trace(F, axis1=1, axis2=2))
        entries.append(
            {
                "p": p,
                "label": label,
                "dim": F.shape[1],
                "generators": [{"re": F[g].real.ravel(), "im": F[g].imag.ravel()} for g in gen_idx],
            }
        )
    X = np.array(chars)
    assert np.allclose(X @ X.conj().T / order, np.eye(len(chars)), atol=1e-12), name
    write_json(
        out / f"irreps_{name}.json",
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "irreps",
            "group": name,
            "words": [list(w) for w in group.words],
            "irreps": entries,
        },
    )
    print(f"{name}: order {order}, dims {[e['dim'] for e in entries]}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=data_dir())
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in ("T", "O", "I"):
        build(name, args.out)


if __name__ == "__main__":
    main()
