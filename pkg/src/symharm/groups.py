"""Finite rotation groups T, O and I realized as 3x3 rotation matrices.

Elements are enumerated breadth-first from the identity, right-multiplying
by the generators in order, so every element carries a generator word and
the ordering is fully determined by the generator list.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .datafiles import load_group_data
from .errors import AmbiguousMatch, ClosureOverflow, NotClosed

MATCH_TOL = 1e-8
GIMBAL_TOL = 1e-12
GROUP_NAMES = ("T", "O", "I")


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def axis_angle_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues' formula for a right-handed rotation by ``angle`` about ``axis``."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    K = np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def euler_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    return rot_z(alpha) @ rot_y(beta) @ rot_z(gamma)


def is_rotation(R, tol: float = 1e-12) -> bool:
    R = np.asarray(R, dtype=float)
    return (
        R.shape == (3, 3)
        and np.max(np.abs(R @ R.T - np.eye(3))) < tol
        and abs(np.linalg.det(R) - 1.0) < tol
    )


def euler_zyz(R) -> tuple[float, float, float]:
    """z-y-z Euler angles with ``R = Rz(alpha) Ry(beta) Rz(gamma)``.

    ``beta`` lies in [0, pi]; ``alpha`` and ``gamma`` in [0, 2 pi).  When
    ``|sin beta| < 1e-12`` the decomposition is degenerate and ``gamma = 0``
    is imposed.
    """
    R = np.asarray(R, dtype=float)
    sb = np.hypot(R[0, 2], R[1, 2])
    beta = float(np.arctan2(sb, R[2, 2]))
    if sb < GIMBAL_TOL:
        gamma = 0.0
        if R[2, 2] > 0:
            beta = 0.0
            alpha = np.arctan2(R[1, 0], R[0, 0])
        else:
            beta = np.pi
            alpha = np.arctan2(-R[1, 0], -R[0, 0])
    else:
        alpha = np.arctan2(R[1, 2], R[0, 2])
        # gamma from the upper 2x2 block: (1 + cos b) e^{i(a+g)} near b = 0 and
        # (cos b - 1) e^{i(a-g)} near b = pi stay accurate when sin b is tiny
        if R[2, 2] >= 0:
            gamma = np.arctan2(R[1, 0] - R[0, 1], R[0, 0] + R[1, 1]) - alpha
        else:
            gamma = alpha - np.arctan2(-(R[1, 0] + R[0, 1]), R[1, 1] - R[0, 0])
    two_pi = 2.0 * np.pi
    alpha = float(alpha) % two_pi
    gamma = float(gamma) % two_pi
    # a tiny negative angle wraps to exactly 2 pi
    return (0.0 if alpha >= two_pi else alpha), beta, (0.0 if gamma >= two_pi else gamma)


def axis_angle(R) -> tuple[np.ndarray, float]:
    """Unit rotation axis and angle in [0, pi].

    The identity returns axis (0, 0, 1).  For half-turns the axis sign is
    chosen so that its largest-magnitude component is positive.
    """
    R = np.asarray(R, dtype=float)
    v = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    s = 0.5 * np.linalg.norm(v)
    c = 0.5 * (np.trace(R) - 1.0)
    theta = float(np.arctan2(s, c))
    if c > 0 or s > 1e-6:
        # away from a half-turn the antisymmetric part fixes the axis
        if s == 0.0:
            return np.array([0.0, 0.0, 1.0]), 0.0
        return v / (2.0 * s), theta
    # theta ~ pi: R + I = 2 a a^T
    M = 0.5 * (R + np.eye(3))
    i = int(np.argmax(np.diag(M)))
    a = M[:, i] / np.sqrt(M[i, i])
    a /= np.linalg.norm(a)
    if a[np.argmax(np.abs(a))] < 0:
        a = -a
    return a, theta


@dataclass(frozen=True)
class GroupElement:
    index: int
    rotation: np.ndarray
    word: tuple[int, ...]
    euler_zyz: tuple[float, float, float]
    axis_angle: tuple[np.ndarray, float]


def _find(mats, R, tol=MATCH_TOL):
    for i, M in enumerate(mats):
        if np.max(np.abs(M - R)) < tol:
            return i
    return None


def expand_generators(generators, expected_order: int, tol: float = MATCH_TOL) -> list[GroupElement]:
    """Close a set of rotation generators into a group by breadth-first search.

    Element 0 is the identity.  Each dequeued element is right-multiplied by
    every generator in order and new products are appended.  Raises
    :class:`ClosureOverflow` as soon as more than ``expected_order`` distinct
    elements appear and :class:`NotClosed` if the search ends early.
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    mats = [np.eye(3)]
    words: list[tuple[int, ...]] = [()]
    head = 0
    while head < len(mats):
        base, word = mats[head], words[head]
        for k, G in enumerate(gens):
            P = base @ G
            if _find(mats, P, tol) is None:
                if len(mats) == expected_order:
                    raise ClosureOverflow(f"generators produce more than {expected_order} elements")
                mats.append(P)
                words.append(word + (k,))
        head += 1
    if len(mats) != expected_order:
        raise NotClosed(f"generators close after {len(mats)} elements, expected {expected_order}")
    return [
        GroupElement(i, _readonly(R), w, euler_zyz(R), axis_angle(R))
        for i, (R, w) in enumerate(zip(mats, words))
    ]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def multiplication_table(mats, tol: float = MATCH_TOL) -> np.ndarray:
    """Index table ``T[g, h] = k`` with ``mats[g] @ mats[h] == mats[k]``.

    Raises :class:`AmbiguousMatch` when a product lies within ``tol`` of more
    than one element and :class:`NotClosed` when it matches none.
    """
    mats = np.asarray(mats)
    n = len(mats)
    flat = mats.reshape(n, -1)
    table = np.empty((n, n), dtype=int)
    for g in range(n):
        prods = np.einsum("ij,hjk->hik", mats[g], mats).reshape(n, -1)
        dist = np.max(np.abs(prods[:, None, :] - flat[None, :, :]), axis=-1)
        hits = dist < tol
        counts = hits.sum(axis=1)
        if np.any(counts > 1):
            h = int(np.argmax(counts > 1))
            raise AmbiguousMatch(f"product of elements {g} and {h} matches {int(counts[h])} elements")
        if np.any(counts == 0):
            h = int(np.argmin(counts))
            raise NotClosed(f"product of elements {g} and {h} is not in the set")
        table[g] = np.argmax(hits, axis=1)
    return table


def conjugacy_classes(table: np.ndarray, inverse: np.ndarray) -> tuple[tuple[int, ...], ...]:
    n = len(table)
    seen = np.zeros(n, dtype=bool)
    classes = []
    for g in range(n):
        if seen[g]:
            continue
        cls = sorted({int(table[table[h, g], inverse[h]]) for h in range(n)})
        seen[cls] = True
        classes.append(tuple(cls))
    return tuple(classes)


@dataclass(frozen=True)
class FiniteRotationGroup:
    name: str
    elements: tuple[GroupElement, ...]
    generators: tuple[np.ndarray, ...]
    mult_table: np.ndarray
    inverse: np.ndarray
    classes: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @functools.cached_property
    def rotations(self) -> np.ndarray:
        return _readonly(np.array([e.rotation for e in self.elements]))

    @functools.cached_property
    def words(self) -> tuple[tuple[int, ...], ...]:
        return tuple(e.word for e in self.elements)

    @functools.cached_property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=int)
        for c, members in enumerate(self.classes):
            out[list(members)] = c
        return _readonly(out)

    @functools.cached_property
    def element_orders(self) -> np.ndarray:
        out = np.ones(self.order, dtype=int)
        for g in range(1, self.order):
            k, x = 1, g
            while x != 0:
                x = self.mult_table[x, g]
                k += 1
            out[g] = k
        return _readonly(out)

    @functools.cached_property
    def rotation_angles(self) -> np.ndarray:
        return _readonly(np.array([e.axis_angle[1] for e in self.elements]))

    def generator_indices(self) -> list[int]:
        """Indices of the elements equal to each generator."""
        return [self.words.index((k,)) if (k,) in self.words else 0 for k in range(len(self.generators))]


def group_from_generators(name: str, generators, expected_order: int) -> FiniteRotationGroup:
    elements = expand_generators(generators, expected_order)
    table = multiplication_table([e.rotation for e in elements])
    _readonly_inplace(table)
    inverse = np.argmin(table, axis=1)  # the identity has index 0
    _readonly_inplace(inverse)
    return FiniteRotationGroup(
        name=name,
        elements=tuple(elements),
        generators=tuple(_readonly(g) for g in generators),
        mult_table=table,
        inverse=inverse,
        classes=conjugacy_classes(table, inverse),
    )


def _readonly_inplace(a: np.ndarray) -> None:
    a.setflags(write=False)


@functools.lru_cache(maxsize=None)
def build_group(name: str) -> FiniteRotationGroup:
    """Load generators for ``T``, ``O`` or ``I`` from the bundled data and build the group."""
    if name not in GROUP_NAMES:
        raise ValueError(f"unknown group {name!r}; expected one of {GROUP_NAMES}")
    data = load_group_data(name)
    return group_from_generators(name, data["generators"], data["expected_order"])
