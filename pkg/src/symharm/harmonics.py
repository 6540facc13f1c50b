"""Complex and real spherical harmonics and their rotation matrices.

Conventions
-----------
* ``Y_{l,m}`` is orthonormal on the unit sphere with the Condon-Shortley
  phase, so ``Y_{l,-m} = (-1)^m conj(Y_{l,m})``.
* Vectors indexed by ``m`` run from ``-l`` to ``+l``; index ``i`` holds
  ``m = i - l``.
* Real harmonics: ``sqrt(2) Im Y_{l,m}`` for ``m < 0`` (negative ``m`` taken
  literally), ``Y_{l,0}``, and ``sqrt(2) Re Y_{l,m}`` for ``m > 0``.  Then
  ``Yr_l = U_l^H Y_l``.
* ``D_l(R)`` is defined by ``Y_l(R^{-1} x) = D_l(R) Y_l(x)``.  With this row
  convention ``D_l(R1 R2) = D_l(R2) D_l(R1)``.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .errors import DegreeOutOfRange
from .groups import euler_zyz

L_MAX = 60
SQRT2 = math.sqrt(2.0)


def _check_degree(l: int) -> None:
    if l < 0 or l > L_MAX:
        raise DegreeOutOfRange(f"degree {l} outside supported range 0..{L_MAX}")


def _m_signs(l: int) -> np.ndarray:
    m = np.arange(-l, l + 1)
    return np.where(m % 2 == 0, 1.0, -1.0)


def legendre_normalized(l: int, theta) -> np.ndarray:
    """Fully normalized associated Legendre values for ``m = 0..l``.

    Returns an array of shape ``theta.shape + (l + 1,)`` holding
    ``Pbar_l^m(cos theta)`` such that ``Y_{l,m} = Pbar_l^m e^{i m phi}`` for
    ``m >= 0`` (Condon-Shortley phase included).  The sectoral seeds are
    built by the m-upward ratio recurrence and each column is then carried
    up in degree, so no factorial is ever formed.
    """
    _check_degree(l)
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    s = np.sin(theta)
    out = np.empty(theta.shape + (l + 1,))
    pmm = np.full(theta.shape, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(l + 1):
        if m > 0:
            pmm = -math.sqrt((2 * m + 1) / (2 * m)) * s * pmm
        if m == l:
            out[..., m] = pmm
            continue
        p_prev, p_cur = pmm, math.sqrt(2 * m + 3) * x * pmm
        a_prev = math.sqrt(2 * m + 3)
        for n in range(m + 2, l + 1):
            a = math.sqrt((4 * n * n - 1) / (n * n - m * m))
            p_prev, p_cur = p_cur, a * (x * p_cur - p_prev / a_prev)
            a_prev = a
        out[..., m] = p_cur
    return out


def sph_harm_all(l: int, theta, phi) -> np.ndarray:
    """``Y_l`` as an array of shape ``theta.shape + (2l+1,)``, ``m`` ascending."""
    theta = np.asarray(theta, dtype=float)
    phi = np.broadcast_to(np.asarray(phi, dtype=float), theta.shape)
    P = legendre_normalized(l, theta)
    m = np.arange(l + 1)
    pos = P * np.exp(1j * phi[..., None] * m)
    neg = np.conj(pos[..., :0:-1]) * _m_signs(l)[:l]
    return np.concatenate([neg, pos], axis=-1)


def sph_harm(l: int, m: int, theta, phi):
    """Single complex spherical harmonic ``Y_{l,m}(theta, phi)``."""
    if abs(m) > l:
        raise ValueError(f"|m| = {abs(m)} exceeds l = {l}")
    return sph_harm_all(l, theta, phi)[..., m + l]


def real_sph_harm_all(l: int, theta, phi) -> np.ndarray:
    """Real harmonics ``Yr_l`` with the same layout as :func:`sph_harm_all`."""
    Y = sph_harm_all(l, theta, phi)
    out = np.empty(Y.shape)
    out[..., :l] = SQRT2 * Y[..., :l].imag
    out[..., l] = Y[..., l].real
    out[..., l + 1 :] = SQRT2 * Y[..., l + 1 :].real
    return out


def real_sph_harm(l: int, m: int, theta, phi):
    if abs(m) > l:
        raise ValueError(f"|m| = {abs(m)} exceeds l = {l}")
    return real_sph_harm_all(l, theta, phi)[..., m + l]


@functools.lru_cache(maxsize=None)
def ul_matrix(l: int) -> np.ndarray:
    """Unitary ``U_l`` with ``Yr_l = U_l^H Y_l``; at most two nonzeros per row/column."""
    n = 2 * l + 1
    Uh = np.zeros((n, n), dtype=complex)
    r = 1.0 / SQRT2
    for m in range(-l, l + 1):
        i, j = m + l, -m + l
        sign = -1.0 if m % 2 else 1.0
        if m < 0:
            Uh[i, i] = -1j * r
            Uh[i, j] = 1j * sign * r
        elif m == 0:
            Uh[i, i] = 1.0
        else:
            Uh[i, i] = r
            Uh[i, j] = sign * r
    U = Uh.conj().T
    U.setflags(write=False)
    return U


@functools.lru_cache(maxsize=None)
def _jy_eigen(l: int):
    # J_y in the ascending-m basis; eigenvalues are exactly -l..l
    m = np.arange(-l, l)
    cp = np.sqrt((l - m) * (l + m + 1.0))  # <m+1|J+|m>
    Jy = np.zeros((2 * l + 1, 2 * l + 1), dtype=complex)
    Jy[np.arange(1, 2 * l + 1), np.arange(2 * l)] = cp / 2j
    Jy[np.arange(2 * l), np.arange(1, 2 * l + 1)] = -cp / 2j
    w, V = np.linalg.eigh(Jy)
    w = np.round(w)  # exact integer spectrum
    V.setflags(write=False)
    return w, V


def wigner_small_d(l: int, beta: float) -> np.ndarray:
    """Small Wigner matrix ``d^l_{m',m}(beta) = <m'| exp(-i beta J_y) |m>``.

    Evaluated through the eigendecomposition of ``J_y``, which stays accurate
    to a few ulps for every supported degree.  :func:`wigner_small_d_sum`
    evaluates the classical explicit sum, which loses accuracy through
    cancellation once ``l`` exceeds about 20.
    """
    _check_degree(l)
    n = 2 * l + 1
    if beta == 0.0:
        return np.eye(n)
    if beta == math.pi:
        # d_{m',m}(pi) = (-1)^(l+m') delta_{m',-m}
        return np.eye(n)[::-1] * np.where((l + np.arange(-l, l + 1)) % 2, -1.0, 1.0)[:, None]
    w, V = _jy_eigen(l)
    return ((V * np.exp(-1j * beta * w)) @ V.conj().T).real


@functools.lru_cache(maxsize=None)
def _log_factorials(n: int) -> np.ndarray:
    return np.array([math.lgamma(k + 1.0) for k in range(n + 1)])


def wigner_small_d_sum(l: int, beta: float) -> np.ndarray:
    """Explicit-sum small Wigner matrix with log-factorial accumulation.

    Same layout and convention as :func:`wigner_small_d`.
    """
    _check_degree(l)
    lf = _log_factorials(2 * l + 1)
    c, s = math.cos(beta / 2.0), math.sin(beta / 2.0)
    n = 2 * l + 1
    d = np.zeros((n, n))
    for mp in range(-l, l + 1):
        for m in range(-l, l + 1):
            pref = 0.5 * (lf[l + mp] + lf[l - mp] + lf[l + m] + lf[l - m])
            acc = 0.0
            for k in range(max(0, m - mp), min(l + m, l - mp) + 1):
                pc = 2 * l + m - mp - 2 * k
                ps = mp - m + 2 * k
                if (pc and c == 0.0) or (ps and s == 0.0):
                    continue
                logmag = pref - lf[l + m - k] - lf[k] - lf[mp - m + k] - lf[l - mp - k]
                if pc:
                    logmag += pc * math.log(abs(c))
                if ps:
                    logmag += ps * math.log(abs(s))
                sign = -1.0 if (mp - m + k) % 2 else 1.0
                if c < 0 and pc % 2:
                    sign = -sign
                if s < 0 and ps % 2:
                    sign = -sign
                acc += sign * math.exp(logmag)
            d[mp + l, m + l] = acc
    return d


def wigner_d_matrix(l: int, R) -> np.ndarray:
    """``D_l(R)`` with ``Y_l(R^{-1} x) = D_l(R) Y_l(x)``.

    From the z-y-z angles of ``R``:
    ``D_{m,m'} = e^{-i m' alpha} d^l_{m',m}(beta) e^{-i m gamma}``.
    """
    _check_degree(l)
    alpha, beta, gamma = euler_zyz(R)
    m = np.arange(-l, l + 1)
    d = wigner_small_d(l, beta)
    return np.exp(-1j * gamma * m)[:, None] * d.T * np.exp(-1j * alpha * m)[None, :]


def _combine_rows(X: np.ndarray, l: int) -> np.ndarray:
    """``U_l^H X`` using only the two nonzeros in each row of ``U_l^H``."""
    m = np.arange(-l, l + 1)
    sign = _m_signs(l)[:, None]
    flipped = X[..., ::-1, :]
    out = np.empty(X.shape, dtype=complex)
    neg, pos = m < 0, m > 0
    out[..., neg, :] = (-1j / SQRT2) * (X[..., neg, :] - sign[neg] * flipped[..., neg, :])
    out[..., l, :] = X[..., l, :]
    out[..., pos, :] = (X[..., pos, :] + sign[pos] * flipped[..., pos, :]) / SQRT2
    return out


def _combine_cols(X: np.ndarray, l: int) -> np.ndarray:
    """``X U_l`` using only the two nonzeros in each column of ``U_l``."""
    m = np.arange(-l, l + 1)
    sign = _m_signs(l)
    flipped = X[..., :, ::-1]
    out = np.empty(X.shape, dtype=complex)
    neg, pos = m < 0, m > 0
    out[..., :, neg] = (1j / SQRT2) * (X[..., :, neg] - sign[neg] * flipped[..., :, neg])
    out[..., :, l] = X[..., :, l]
    out[..., :, pos] = (X[..., :, pos] + sign[pos] * flipped[..., :, pos]) / SQRT2
    return out


def hat_d(l: int, R) -> np.ndarray:
    """``U_l^H D_l(R)``: rotation of the real harmonics expressed in complex ones."""
    return _combine_rows(wigner_d_matrix(l, R), l)


def check_d(l: int, R, tol: float = 1e-10) -> np.ndarray:
    """Real orthogonal ``U_l^H D_l(R) U_l`` acting on the real harmonics."""
    M = _combine_cols(hat_d(l, R), l)
    resid = np.max(np.abs(M.imag), initial=0.0)
    if resid > tol:
        raise ArithmeticError(f"check_d imaginary residue {resid:.3e} exceeds {tol:.1e}")
    return M.real.copy()


def check_d_stack(l: int, rotations) -> np.ndarray:
    """``check_d`` for a stack of rotations, shape ``(N, 2l+1, 2l+1)``."""
    return np.array([check_d(l, R) for R in rotations])


def spherical_angles(vectors) -> tuple[np.ndarray, np.ndarray]:
    """``(theta, phi)`` of 3-vectors, ``phi`` wrapped into [0, 2 pi)."""
    v = np.asarray(vectors, dtype=float)
    r = np.linalg.norm(v, axis=-1)
    theta = np.arccos(np.clip(v[..., 2] / r, -1.0, 1.0))
    phi = np.mod(np.arctan2(v[..., 1], v[..., 0]), 2.0 * np.pi)
    return theta, phi


def unit_vectors(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def sphere_quadrature(l: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Product rule exact for products of two degree-``l`` harmonics.

    Gauss-Legendre in ``cos theta`` with ``l + 1`` nodes times the trapezoid
    rule in ``phi`` with ``2l + 2`` nodes.  Returns flattened
    ``(theta, phi, weight)``.
    """
    x, wx = np.polynomial.legendre.leggauss(l + 1)
    nphi = 2 * l + 2
    phi = 2.0 * np.pi * np.arange(nphi) / nphi
    theta = np.arccos(x)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(wx, np.full(nphi, 2.0 * np.pi / nphi))
    return T.ravel(), P.ravel(), W.ravel()
