"""Complex unitary irreps of T, O, I: loading, classification and comparison."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .datafiles import load_irrep_data
from .errors import AmbiguousMatch, NoIsomorphism, NotClosed, NonIntegerIndicator, ProbeFailed, SchemaMismatch
from .groups import FiniteRotationGroup, build_group, multiplication_table

REALNESS = {1: "potentially_real", 0: "essentially_complex", -1: "pseudo_real"}


@dataclass
class Irrep:
    """Matrices of one irrep, indexed by the group's canonical element order.

    ``p`` is 1-based, in the conventional irrep numbering.
    """

    group: FiniteRotationGroup
    p: int
    label: str
    matrices: np.ndarray
    realness: str = "unclassified"
    indicator: int | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    d_p = dim


def expand_words(images, words) -> np.ndarray:
    """Multiply out generator words into a full matrix family."""
    d = images[0].shape[0]
    out = np.empty((len(words), d, d), dtype=complex)
    for i, word in enumerate(words):
        M = np.eye(d, dtype=complex)
        for k in word:
            M = M @ images[k]
        out[i] = M
    return out


@functools.lru_cache(maxsize=None)
def _load(name: str) -> tuple[Irrep, ...]:
    group = build_group(name)
    raw = load_irrep_data(name)
    if raw["group"] != name:
        raise SchemaMismatch(f"irrep file for {name} declares group {raw['group']!r}")
    if tuple(raw["words"]) != group.words:
        raise SchemaMismatch(f"irrep file for {name}: element words differ from the group's canonical ordering")
    out = []
    for entry in raw["irreps"]:
        mats = expand_words(entry["generators"], group.words)
        mats.setflags(write=False)
        irrep = Irrep(group, entry["p"], entry["label"], mats)
        frobenius_schur(irrep)
        out.append(irrep)
    return tuple(out)


def load_irreps(name: str) -> list[Irrep]:
    """All irreps of ``T``, ``O`` or ``I`` from the bundled data, classified."""
    return list(_load(name))


def character(irrep) -> np.ndarray:
    return np.trace(_mats(irrep), axis1=1, axis2=2)


def frobenius_schur(irrep: Irrep, tol: float = 1e-8) -> tuple[int, str]:
    """Frobenius-Schur indicator ``(1/N) sum_g tr Gamma(g g)`` and its realness class.

    1 means potentially real, 0 essentially complex, -1 pseudo-real.  The
    irrep's ``realness`` and ``indicator`` fields are updated in place.
    """
    table = irrep.group.mult_table
    squares = table[np.arange(len(table)), np.arange(len(table))]
    value = np.mean(character(irrep)[squares])
    k = int(np.rint(value.real))
    if abs(value - k) > tol or k not in REALNESS:
        raise NonIntegerIndicator(f"irrep {irrep.label}: indicator {value} is not in {{1, 0, -1}}")
    irrep.indicator = k
    irrep.realness = REALNESS[k]
    return k, irrep.realness


def rotation_character(l: int, angles) -> np.ndarray:
    """Character of the degree-``l`` harmonics, ``sin((l+1/2) t) / sin(t/2)``."""
    t = np.asarray(angles, dtype=float)
    half = np.sin(t / 2.0)
    small = np.abs(half) < 1e-12
    safe = np.where(small, 1.0, half)
    return np.where(small, 2.0 * l + 1.0, np.sin((l + 0.5) * t) / safe)


def multiplicity_on_sphere(irrep: Irrep, l: int) -> int:
    """How many copies of ``irrep`` occur among the degree-``l`` harmonics."""
    chi_l = rotation_character(l, irrep.group.rotation_angles)
    value = np.mean(np.conj(character(irrep)) * chi_l)
    k = int(np.rint(value.real))
    if abs(value - k) > 1e-8:
        raise ArithmeticError(f"non-integer multiplicity {value} for {irrep.label} at l={l}")
    return k


def exchange_matrix(d: int) -> np.ndarray:
    return np.eye(d)[::-1].copy()


def _mats(x) -> np.ndarray:
    return np.asarray(x.matrices if hasattr(x, "matrices") else x)


def find_intertwiner(irrep1, irrep2, tol: float = 1e-8) -> np.ndarray | None:
    """Unitary ``S`` with ``Gamma2(g) = S^H Gamma1(g) S`` for every ``g``, or ``None``.

    Averages ``Gamma1(g) A Gamma2(g)^H`` over the group for a probe ``A``
    (exchange matrix first, then the elementary matrices ``E_ij``).  By
    Schur's lemma the average is either zero or a multiple of a unitary
    intertwiner.  Both families must share one element ordering.
    """
    G1, G2 = _mats(irrep1), _mats(irrep2)
    if G1.shape != G2.shape:
        return None
    d = G1.shape[1]
    probes = [exchange_matrix(d)]
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d))
            E[i, j] = 1.0
            probes.append(E)
    for A in probes:
        M = np.einsum("gij,jk,glk->il", G1, A, np.conj(G2)) / len(G1)
        if np.max(np.abs(M)) > tol:
            S = M / np.sqrt(np.trace(M.conj().T @ M).real / d)
            err = np.max(np.abs(np.conj(np.transpose(S)) @ G1 @ S - G2))
            if err < tol:
                return S
    if np.allclose(np.trace(G1, axis1=1, axis2=2), np.trace(G2, axis1=1, axis2=2), atol=tol):
        raise ProbeFailed("characters agree but every probe averaged to zero")
    return None


@dataclass(frozen=True)
class IntertwinerResult:
    permutation: np.ndarray
    similarity: np.ndarray


def _orders(table: np.ndarray) -> np.ndarray:
    """Element orders from a table whose identity may sit at any index."""
    n = len(table)
    idem = np.flatnonzero(table[np.arange(n), np.arange(n)] == np.arange(n))
    if len(idem) != 1:
        raise NoIsomorphism("family has no unique identity element")
    e = idem[0]
    out = np.ones(n, dtype=int)
    for g in range(n):
        k, x = 1, g
        while x != e and k <= n:
            x = table[x, g]
            k += 1
        out[g] = k
    return out


def match_ordering(family, target: Irrep, tol: float = 1e-8) -> np.ndarray:
    """Relabeling ``gamma`` with ``g -> family[gamma[g]]`` isomorphic to ``target``.

    Both families must be faithful (distinct matrices for distinct elements).

    ``gamma`` maps target element indices to family indices such that the
    reordered family has the target's multiplication table and is
    equivalent to it as a representation.  When every target matrix occurs
    verbatim in ``family`` that direct match is returned.  Otherwise the
    images of the target's generators are anchored on family elements of the
    same order and character, propagated along the generator words, and the
    first assignment passing the full table and intertwiner checks wins.
    """
    F = _mats(family)
    T = _mats(target)
    n = len(T)
    if len(F) != n:
        raise NoIsomorphism(f"family has {len(F)} elements, target {n}")

    direct = [np.flatnonzero(np.max(np.abs(F - M), axis=(1, 2)) < tol) for M in T]
    if all(len(c) == 1 for c in direct):
        gamma = np.array([c[0] for c in direct])
        if len(set(gamma.tolist())) == n:
            return gamma

    group = target.group
    target_table = group.mult_table
    try:
        src_table = multiplication_table(F, tol)
    except (AmbiguousMatch, NotClosed) as exc:
        raise NoIsomorphism(f"family is not a faithful matrix group: {exc}") from exc
    src_orders = _orders(src_table)
    identity = int(np.flatnonzero(src_orders == 1)[0])
    src_chars = np.trace(F, axis1=1, axis2=2)
    tgt_chars = character(target)
    gens = group.generator_indices()

    candidates = []
    for g in gens:
        ok = (src_orders == group.element_orders[g]) & (np.abs(src_chars - tgt_chars[g]) < tol)
        candidates.append(np.flatnonzero(ok))

    def extend(images):
        gamma = np.empty(n, dtype=int)
        for i, word in enumerate(group.words):
            x = identity
            for k in word:
                x = src_table[x, images[k]]
            gamma[i] = x
        if len(set(gamma.tolist())) != n:
            return None
        if not np.array_equal(gamma[target_table], src_table[gamma[:, None], gamma[None, :]]):
            return None
        return gamma

    for images in np.array(np.meshgrid(*candidates, indexing="ij")).reshape(len(gens), -1).T:
        gamma = extend(images)
        if gamma is not None and find_intertwiner(F[gamma], T, tol) is not None:
            return gamma
    raise NoIsomorphism("no generator assignment extends to a table-preserving bijection")


def relate_families(family, target: Irrep) -> IntertwinerResult:
    """Permutation and similarity with ``target(g) = S^H family[gamma(g)] S``."""
    gamma = match_ordering(family, target)
    S = find_intertwiner(_mats(family)[gamma], target)
    if S is None:
        raise NoIsomorphism("reordered family is not equivalent to the target")
    return IntertwinerResult(gamma, S)
