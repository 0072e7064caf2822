"""Relatively invariant integrals on the stabilizer coideal.

A candidate character is ``g = k**s``.  ``Phi_C`` is g-balanced when
``S(Phi_C) g = Phi_C``; for the Podles data this holds for ``s = -1`` only
(generic ``a``), and the resulting integral has weights
``mu_m = <v_m, K v_m>`` on the spectral projections ``e_m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from . import coeffalg
from .coeffalg import CoeffElement, DualElement
from .coideal import (B_basis, CoidealData, StabElement, act_rmod,
                      act_rmod_fast, sigma_B)
from .qnum import QContext
from .uqsu2 import antipode, make_rep


class TruncationError(ValueError):
    """Support of an input lies outside the truncation window."""


@dataclass
class CheckReport:
    name: str
    passed: bool
    residual: float
    tol: float
    details: Dict = field(default_factory=dict)

    def as_dict(self):
        return {"name": self.name, "status": "pass" if self.passed else "fail",
                "residual": float(self.residual), "tol": float(self.tol),
                "details": self.details}

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: residual={self.residual:.3e} (tol {self.tol:.0e})"


def report(name: str, residual: float, tol: float, expect_pass: bool = True,
           **details) -> CheckReport:
    ok = residual <= tol
    return CheckReport(name, ok if expect_pass else not ok, float(residual), tol, details)


@dataclass(frozen=True)
class GCharacter:
    """The grouplike ``g = k**s = delta_A**(s/2)``."""

    s: float = -1.0

    def dual(self, q) -> DualElement:
        return DualElement.k_power(self.s, q)

    def inverse(self) -> "GCharacter":
        return GCharacter(-self.s)

    def value(self, a: CoeffElement) -> complex:
        """``tau(a, g)``."""
        return coeffalg.pair(a, self.dual(a.q))


@dataclass
class InvariantIntegral:
    g: GCharacter
    weights: Dict[int, float]

    @property
    def truncation(self) -> int:
        return max(abs(m) for m in self.weights)

    def psi(self, x: StabElement) -> complex:
        return psi(x, self)


def balanced_residuals(g: GCharacter, cd: CoidealData) -> Dict[int, float]:
    """``||S(Phi_C) g - Phi_C||`` for each block up to max_spin."""
    out = {}
    for n in cd.blocks():
        r = make_rep(n, cd.q)
        P = cd.phi_c(n)
        out[n] = float(np.max(np.abs(antipode(r, P) @ g.dual(cd.q).block(n) - P)))
    return out


def check_balanced(g: GCharacter, cd: CoidealData, tol: Optional[float] = None) -> CheckReport:
    tol = cd.ctx.tol if tol is None else tol
    res = balanced_residuals(g, cd)
    return report(f"balanced(s={g.s:g})", max(res.values()), tol,
                  per_block={str(k): v for k, v in res.items()})


def character_residuals(g: GCharacter, cd: CoidealData) -> Dict[int, float]:
    """``|tau(b, g) - eps(sigma_A sigma_B^-1 b)|`` on a spanning set of B."""
    out = {}
    for n in range(0, cd.ctx.max_n + 1, 2):
        worst = 0.0
        for b in B_basis(cd, n):
            lhs = g.value(b)
            rhs = coeffalg.counit(coeffalg.sigma_A(sigma_B(b, cd, -1)))
            worst = max(worst, abs(lhs - rhs))
        out[n] = worst
    return out


def check_character_condition(g: GCharacter, cd: CoidealData,
                              tol: Optional[float] = None) -> CheckReport:
    tol = cd.ctx.tol if tol is None else tol
    res = character_residuals(g, cd)
    return report(f"character(s={g.s:g})", max(res.values()), tol,
                  per_block={str(k): v for k, v in res.items()})


def closed_form_weight(m: int, ctx: QContext) -> float:
    """``(q^{a+m} + q^{-a-m}) / (q^a + q^{-a})``."""
    q, a = ctx.q, ctx.a
    return (q ** (a + m) + q ** (-a - m)) / (q ** a + q ** -a)


def compute_weights(g: GCharacter, cd: CoidealData, M: int,
                    extra_blocks: int = 2) -> InvariantIntegral:
    """Weights ``mu_m = <v_m, g^-1 v_m>`` for ``|m| <= M``.

    Each weight is read off in every block ``|m|, |m|+2, ...`` (``extra_blocks``
    of them) and the readings must agree.
    """
    rep = check_balanced(g, cd)
    if not rep.passed:
        raise ValueError(f"Phi_C is not g-balanced for s={g.s} "
                         f"(residual {rep.residual:.2e})")
    ginv = g.inverse().dual(cd.q)
    weights = {}
    for m in range(-M, M + 1):
        readings = []
        for n in range(abs(m), abs(m) + 2 * extra_blocks + 1, 2):
            v = cd.spectrum(n).vector(m)
            readings.append((v.conj() @ ginv.block(n) @ v).real)
        spread = max(readings) - min(readings)
        if spread > cd.ctx.tol * max(1.0, abs(readings[0])) * 100:
            raise RuntimeError(f"weight for m={m} differs across blocks by {spread:.2e}")
        weights[m] = float(readings[0])
    scale = weights[0]
    return InvariantIntegral(g, {m: w / scale for m, w in weights.items()})


def psi(x: StabElement, integral: InvariantIntegral) -> complex:
    """``psi(x) = sum_m mu_m x_m``."""
    out = 0j
    for m, c in x.coeffs.items():
        if m not in integral.weights:
            raise TruncationError(f"label {m} outside truncation {integral.truncation}")
        out += integral.weights[m] * c
    return out


def invariance_system(g: GCharacter, cd: CoidealData, M: int,
                      spins: Sequence[int] = (1, 2)) -> np.ndarray:
    """Rows of ``psi(e_m <| a) - tau(a, g) psi(e_m) = 0`` in the unknowns mu.

    Only pairs whose image stays inside ``|m'| <= M`` are used.
    """
    labels = list(range(-M, M + 1))
    idx = {m: k for k, m in enumerate(labels)}
    rows = []
    for n in spins:
        for i in range(n + 1):
            for j in range(n + 1):
                a = CoeffElement.basis(n, i, j, cd.q)
                ga = g.value(a)
                for m in labels:
                    if abs(m) + n > M:
                        continue
                    y = act_rmod_fast(StabElement.e(m), a, cd)
                    row = np.zeros(len(labels), dtype=complex)
                    for m2, c in y.coeffs.items():
                        row[idx[m2]] += c
                    row[idx[m]] -= ga
                    rows.append(row)
    return np.array(rows)


def solve_weights(g: GCharacter, cd: CoidealData, M: int):
    """Solve the truncated invariance system directly.

    Returns ``(integral, nullity)``; for a balanced ``g`` the null space is
    one-dimensional, otherwise ``integral`` is ``None``.
    """
    A = invariance_system(g, cd, M)
    scale = max(1.0, float(np.max(np.abs(A))))
    ns = null_space(A / scale, rcond=cd.ctx.tol)
    nullity = ns.shape[1]
    if nullity != 1:
        return None, nullity
    labels = list(range(-M, M + 1))
    v = ns[:, 0] / ns[labels.index(0), 0]
    return InvariantIntegral(g, {m: float(v[k].real) for k, m in enumerate(labels)}), nullity


def check_relative_invariance(integral: InvariantIntegral, cd: CoidealData,
                              samples: Iterable, tol: Optional[float] = None) -> CheckReport:
    """``psi(x <| a) = tau(a, g) psi(x)`` on ``(x, a)`` samples.

    Samples violating the support margin are rejected.
    """
    tol = cd.ctx.tol if tol is None else tol
    M = integral.truncation
    worst = 0.0
    count = 0
    for x, a in samples:
        if x.coeffs and max(abs(m) for m in x.coeffs) + a.max_n > M:
            raise TruncationError("sample violates the support margin")
        lhs = psi(act_rmod(x, a, cd), integral)
        rhs = integral.g.value(a) * psi(x, integral)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        count += 1
    return report("relative_invariance", worst, tol, samples=count)


def delta_phic_factorization_residual(integral: InvariantIntegral, cd: CoidealData,
                                      n1: int, n2: int) -> float:
    """``Delta(Phi_C)`` against ``sum_m mu_m^-1 S(e_m) g (x) e_m`` on one block pair.

    The left side is the spectral projection of the coproduct of ``i B_t``.
    """
    lhs = cd.tensor_projector(n1, n2, 0, route="spectral")
    r1 = make_rep(n1, cd.q)
    g1 = integral.g.dual(cd.q).block(n1)
    rhs = np.zeros_like(lhs)
    for m in range(-n2, n2 + 1, 2):
        if m not in integral.weights:
            raise TruncationError(f"label {m} outside truncation")
        left = antipode(r1, cd.projector(n1, m)) @ g1
        rhs += np.kron(left, cd.projector(n2, m)) / integral.weights[m]
    return float(np.max(np.abs(lhs - rhs)))


def check_delta_phic_factorization(integral: InvariantIntegral, cd: CoidealData,
                                   max_n: int, tol: float = 1e-8) -> CheckReport:
    res = {}
    for n1 in range(max_n + 1):
        for n2 in range(max_n + 1):
            res[f"{n1},{n2}"] = delta_phic_factorization_residual(integral, cd, n1, n2)
    return report("delta_phic_factorization", max(res.values()), tol, pairs=len(res))
