"""Numerical verification protocol for one group over a range of degrees.

For every degree ``l`` up to ``lmax`` the basis is assembled and checked:

* stacked real coefficients are square and orthogonal (O, I), or the
  function count meets the deficit law (T);
* Gram-Schmidt block counts equal the character multiplicities;
* complex coefficients equal the real ones times ``U_l^H``;
* ``F(R_g^{-1} x) = Gamma_r(g)^T F(x)`` at seeded random directions;
* complex-flavor evaluations are real;
* quadrature gives ``int F F^T = I`` across all blocks of the degree.

The realified irreps are checked once up front.  Each check reports its
worst error and the degree where it occurred.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .basis import assemble_basis, get_context
from .errors import CountMismatch
from .harmonics import real_sph_harm_all, sph_harm_all, sphere_quadrature, ul_matrix
from .irreps import character, multiplicity_on_sphere


@dataclass(frozen=True)
class Thresholds:
    realify: float = 1e-9
    orthogonality: float = 1e-10
    flavor: float = 1e-10
    transformation: float = 1e-9
    realness: float = 1e-10
    quadrature: float = 1e-8


@dataclass
class CheckResult:
    name: str
    threshold: float
    max_error: float = 0.0
    worst_l: int | None = None
    detail: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_error)) and self.max_error < self.threshold and not self.detail

    def update(self, error: float, l: int | None = None) -> None:
        error = float(error)
        if not error <= self.max_error:  # also catches nan
            self.max_error = error
            self.worst_l = l

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        if not out["detail"]:
            del out["detail"]
        return out


@dataclass
class Report:
    group: str
    lmax: int
    seed: int
    n_directions: int
    checks: dict[str, CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "lmax": self.lmax,
            "seed": self.seed,
            "n_directions": self.n_directions,
            "ok": self.ok,
            "checks": {k: v.as_dict() for k, v in self.checks.items()},
            "failures": [k for k, v in self.checks.items() if not v.passed],
        }


def random_directions(n: int, seed: int) -> np.ndarray:
    v = np.random.default_rng(seed).standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _angles(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.arccos(np.clip(x[..., 2], -1.0, 1.0)), np.arctan2(x[..., 1], x[..., 0])


def realification_errors(ctx) -> dict[int, dict[str, float]]:
    """Per-irrep residuals of the realified family."""
    table = ctx.group.mult_table
    out = {}
    for p, res in ctx.realified.items():
        G = res.gamma_r
        d = G.shape[1]
        Gc = res.irrep.matrices
        C = res.S @ res.S.T
        out[p] = {
            "orthogonal": float(np.max(np.abs(G @ np.transpose(G, (0, 2, 1)) - np.eye(d)))),
            "homomorphism": float(np.max(np.abs(G[:, None] @ G[None, :] - G[table]))),
            "character": float(np.max(np.abs(np.trace(G, axis1=1, axis2=2) - character(res.irrep)))),
            "unitary_S": float(np.max(np.abs(res.S.conj().T @ res.S - np.eye(d)))),
            "imaginary": float(res.imag_residue),
            "similar_to_conjugate": float(np.max(np.abs(np.linalg.solve(C, Gc) @ C - Gc.conj()))),
        }
    return out


def run_protocol(name: str, lmax: int, seed: int = 0, n_directions: int = 100, thresholds=Thresholds()) -> Report:
    ctx = get_context(name)
    group = ctx.group
    checks = {
        "realify": CheckResult("realify", thresholds.realify),
        "counts": CheckResult("counts", 0.5),
        "completeness": CheckResult("completeness", thresholds.orthogonality),
        "flavor": CheckResult("flavor", thresholds.flavor),
        "transformation": CheckResult("transformation", thresholds.transformation),
        "realness": CheckResult("realness", thresholds.realness),
        "quadrature": CheckResult("quadrature", thresholds.quadrature),
    }
    for p, errs in realification_errors(ctx).items():
        checks["realify"].update(max(errs.values()))

    x = random_directions(n_directions, seed)
    th, ph = _angles(x)
    rot_th, rot_ph = _angles(np.einsum("ni,gij->gnj", x, group.rotations))  # rows R_g^T x
    complex_ps = [ir.p for ir in ctx.irreps if ir.realness != "potentially_real"]

    for l in range(lmax + 1):
        try:
            basis = assemble_basis(ctx, l)
        except CountMismatch as exc:
            checks["counts"].update(1.0, l)
            checks["counts"].detail.append(str(exc))
            continue
        n = 2 * l + 1
        miss = max((abs(basis.counts[p] - basis.oracle_counts[p]) for p in basis.counts), default=0)
        checks["counts"].update(miss, l)

        Hr = basis.stacked("real")
        Hc = basis.stacked("complex")
        if complex_ps:
            expected = n - sum(ctx.irrep(p).dim * multiplicity_on_sphere(ctx.irrep(p), l) for p in complex_ps)
        else:
            expected = n
        if Hr.shape[0] != expected:
            checks["completeness"].update(np.inf, l)
            checks["completeness"].detail.append(f"l={l}: {Hr.shape[0]} functions, expected {expected}")
            continue
        err = np.max(np.abs(Hr @ Hr.T - np.eye(expected)), initial=0.0)
        err = max(err, np.max(np.abs(Hc @ Hc.conj().T - np.eye(expected)), initial=0.0))
        if not complex_ps:
            err = max(err, np.max(np.abs(Hr.T @ Hr - np.eye(n))))
        checks["completeness"].update(err, l)
        checks["flavor"].update(np.max(np.abs(Hc - Hr @ ul_matrix(l).conj().T)), l)

        F = real_sph_harm_all(l, th, ph) @ Hr.T
        Frot = real_sph_harm_all(l, rot_th, rot_ph) @ Hr.T
        err, start = 0.0, 0
        for block in basis.real:
            s = slice(start, start + block.dim)
            start += block.dim
            rhs = np.einsum("ni,gij->gnj", F[:, s], ctx.gamma_r(block.p))
            err = max(err, np.max(np.abs(Frot[..., s] - rhs)))
        checks["transformation"].update(err, l)

        vals = sph_harm_all(l, th, ph) @ Hc.T
        checks["realness"].update(np.max(np.abs(vals.imag), initial=0.0), l)

        qt, qp, w = sphere_quadrature(l)
        Fq = real_sph_harm_all(l, qt, qp) @ Hr.T
        checks["quadrature"].update(np.max(np.abs((Fq.T * w) @ Fq - np.eye(expected)), initial=0.0), l)

    return Report(name, lmax, seed, n_directions, checks)
