"""Verification suites run by the command line and the acceptance tests.

Every suite takes a :class:`QContext` plus a seeded generator and returns a
list of :class:`~qsl2r.relint.CheckReport`.
"""
from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from . import coeffalg
from .coeffalg import CoeffElement, DualElement
from .coideal import (CoidealData, build_coideal, delta_B_half, spherical)
from .double import DrinfeldDouble, RegularRepresentation
from .qnum import ParameterError, QContext, q_int
from .relint import (CheckReport, GCharacter,
                     balanced_residuals, character_residuals,
                     check_balanced, check_character_condition,
                     check_delta_phic_factorization, closed_form_weight,
                     compute_weights, report)
from .uqsu2 import antipode, make_rep, q_dim

DEFAULT_S_GRID = (-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0)


def _unit(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def spectrum_suite(ctx: QContext, max_n: Optional[int] = None) -> List[CheckReport]:
    """Eigenvalues of ``pi_n(i B_t)`` against ``{[a + n - 2p]}``."""
    cd = CoidealData(ctx)
    max_n = ctx.max_n if max_n is None else max_n
    worst = 0.0
    for n in range(max_n + 1):
        got = np.sort(np.linalg.eigvalsh(cd.ibt(n)))
        want = np.sort([q_int(ctx.a + n - 2 * p, ctx.q) for p in range(n + 1)])
        worst = max(worst, float(np.max(np.abs(got - want))))
    hermitian = max(float(np.max(np.abs(cd.ibt(n) - cd.ibt(n).conj().T)))
                    for n in range(max_n + 1))
    return [report("spectrum", worst, ctx.tol, max_n=max_n),
            report("iBt_selfadjoint", hermitian, ctx.tol)]


def integral_suite(ctx: QContext, M: int) -> List[CheckReport]:
    """Weights of the k^-1-invariant integral against the closed form."""
    cd = build_coideal(ctx)
    integral = compute_weights(GCharacter(-1), cd, M)
    diffs = {m: abs(integral.weights[m] - closed_form_weight(m, ctx)) for m in integral.weights}
    out = [report("integral_weights", max(diffs.values()), ctx.tol,
                  weights={str(m): integral.weights[m] for m in sorted(integral.weights)})]
    out.append(report("integral_positive", max(0.0, -min(integral.weights.values())), 0.0))
    return out


def balance_suite(ctx: QContext, g_exponent: float = -1.0,
                  s_grid: Sequence[float] = DEFAULT_S_GRID) -> List[CheckReport]:
    """Balancedness for ``g = k**g_exponent`` and the equivalence over a grid."""
    cd = build_coideal(ctx)
    g = GCharacter(g_exponent)
    out = [check_balanced(g, cd), check_character_condition(g, cd)]
    disagreements = []
    for s in s_grid:
        b = max(balanced_residuals(GCharacter(s), cd).values()) <= ctx.tol
        c = max(character_residuals(GCharacter(s), cd).values()) <= ctx.tol * 100
        if b != c:
            disagreements.append(s)
    out.append(report("balanced_iff_character", float(len(disagreements)), 0.0,
                      grid=list(s_grid), disagreements=disagreements))
    return out


def peter_weyl_suite(ctx: QContext, rng: np.random.Generator, max_n: int = 6,
                     samples: int = 50, tol: float = 1e-8) -> List[CheckReport]:
    """Both orthogonality relations through CG products and the Haar state."""
    q = ctx.q
    w1 = w2 = 0.0
    for n1 in range(max_n + 1):
        K1 = np.asarray(make_rep(n1, q).K)
        for n2 in range(max_n + 1):
            dq = q_dim(n1, q)
            for _ in range(samples):
                x1, y1 = _unit(rng, n1 + 1), _unit(rng, n1 + 1)
                x2, y2 = _unit(rng, n2 + 1), _unit(rng, n2 + 1)
                a = CoeffElement.coefficient(n1, x1, y1, q)
                b = CoeffElement.coefficient(n2, x2, y2, q)
                bs = coeffalg.star(b)
                lhs1 = coeffalg.haar(a * bs)
                lhs2 = coeffalg.haar(bs * a)
                if n1 == n2:
                    rhs1 = np.vdot(x1, x2) * np.vdot(y2, np.linalg.solve(K1, y1)) / dq
                    rhs2 = np.vdot(x1, K1 @ x2) * np.vdot(y2, y1) / dq
                else:
                    rhs1 = rhs2 = 0.0
                w1 = max(w1, abs(lhs1 - rhs1))
                w2 = max(w2, abs(lhs2 - rhs2))
    qd = max(abs(np.trace(np.sqrt(np.asarray(make_rep(n, q).K)))
                 - np.trace(np.sqrt(np.asarray(make_rep(n, q).Kinv)))) for n in range(max_n + 1))
    return [report("peter_weyl_1", w1, tol, max_n=max_n, samples=samples),
            report("peter_weyl_2", w2, tol, max_n=max_n, samples=samples),
            report("qdim_symmetry", float(qd), tol)]


def gelfand_suite(ctx: QContext, rng: np.random.Generator, pairs: int = 100,
                  max_n: int = 4, vector_max_n: int = 12,
                  tol: float = 1e-8) -> List[CheckReport]:
    """Commutativity of spherical functions and ``delta_B^{1/2} = Phi_C``."""
    cd = build_coideal(ctx)
    ns = range(0, max_n + 1, 2)

    def random_spherical():
        out = CoeffElement.zero(ctx.q)
        for n in ns:
            out = out + spherical(n, _unit(rng, n + 1), _unit(rng, n + 1), cd)
        return out

    worst = 0.0
    for _ in range(pairs):
        x, y = random_spherical(), random_spherical()
        worst = max(worst, (x * y - y * x).max_abs())
    kv = 0.0
    db = 0.0
    for n in range(0, vector_max_n + 1, 2):
        v = cd.phi_vector(n)
        K = np.asarray(make_rep(n, ctx.q).K)
        kv = max(kv, abs((v.conj() @ K @ v) - 1))
        db = max(db, float(np.max(np.abs(delta_B_half(n, cd) - cd.phi_c(n)))))
    return [report("spherical_commute", worst, tol, pairs=pairs),
            report("phi_vector_K_expectation", kv, ctx.tol, max_n=vector_max_n),
            report("delta_B_half_is_Phi_C", db, ctx.tol)]


def delta_phic_identity_residual(cd: CoidealData, n1: int, n2: int) -> float:
    r1 = make_rep(n1, cd.q)
    P1, P2 = cd.phi_c(n1), cd.phi_c(n2)
    D = cd.tensor_projector(n1, n2, 0, route="spectral")
    PP = np.kron(P1, P2)
    I1, I2 = np.eye(n1 + 1), np.eye(n2 + 1)
    res = [D @ np.kron(I1, P2) - PP,
           np.kron(antipode(r1, P1), I2) @ D - PP,
           D @ np.kron(antipode(r1, P1, -1), I2) - PP]
    return max(float(np.max(np.abs(x))) for x in res)


def coproduct_phic_suite(ctx: QContext, max_n: int = 6, tol: float = 1e-8) -> List[CheckReport]:
    """Identities for ``Delta(Phi_C)`` on every block pair up to ``max_n``."""
    cd = build_coideal(ctx)
    worst = max(delta_phic_identity_residual(cd, n1, n2)
                for n1 in range(max_n + 1) for n2 in range(max_n + 1))
    phic = 0.0
    for n in range(max_n + 1):
        r = make_rep(n, ctx.q)
        P = cd.phi_c(n)
        S, Si = antipode(r, P), antipode(r, P, -1)
        for x in (P @ S - S, P @ Si - P, Si @ P - Si, S @ P - P):
            phic = max(phic, float(np.max(np.abs(x))))
    integral = compute_weights(GCharacter(-1), cd, max_n)
    return [report("delta_phic_identities", worst, tol),
            report("antipode_phic_identities", phic, ctx.tol),
            check_delta_phic_factorization(integral, cd, max_n, tol)]


def _double(ctx: QContext, M: int) -> DrinfeldDouble:
    cd = build_coideal(ctx)
    return DrinfeldDouble(cd, compute_weights(GCharacter(-1), cd, M))


def double_suite(ctx: QContext, rng: np.random.Generator, samples: int = 100,
                 labels: Sequence[int] = (-2, -1, 0, 1, 2), ns: Sequence[int] = (0, 2),
                 tol: float = 1e-8) -> List[CheckReport]:
    """Positivity, traciality, modularity and g-invariance of ``phi_D``."""
    # labels only move under <| a, by at most the spin of a
    D = _double(ctx, max(abs(m) for m in labels) + 4)
    g = D.integral.g
    pos = trace = modular = inv = 0.0
    for k in range(samples):
        d1 = D.random(rng, labels, ns)
        d2 = D.random(rng, labels, ns)
        val = D.phi(d1.star() * d1)
        pos = max(pos, -val.real, abs(val.imag))
        trace = max(trace, abs(D.phi(d1 * d2) - D.phi(d2 * d1)))
        modular = max(modular, abs(D.phi(d1 * d2) - D.phi(d2 * D.sigma(d1))))
        if k < 20:
            x = DualElement.from_blocks(
                {n: rng.normal(size=(n + 1, n + 1)) for n in range(0, 3)})
            a = CoeffElement.random([0, 1, 2], ctx.q, rng)
            lhs = D.phi(D.bimodule_act(x, d1, a))
            rhs = x.block(0)[0, 0] * D.phi(d1) * g.value(a)
            inv = max(inv, abs(lhs - rhs))
    return [report("phi_D_positive", pos, ctx.tol, samples=samples),
            report("phi_D_trace", trace, tol),
            report("phi_D_modular", modular, tol),
            report("phi_D_g_invariant", inv, tol)]


def regrep_suite(ctx: QContext, rng: np.random.Generator, cutoff: int = 4, margin: int = 2,
                 M: int = 6, samples: int = 3, tol: float = 1e-7,
                 gns_tol: float = 1e-8) -> List[CheckReport]:
    """Homomorphism, adjoint and GNS identities of the regular representation."""
    D = _double(ctx, M)
    rr = RegularRepresentation(D, cutoff, M)
    mask = rr.interior(margin)
    ns = tuple(range(0, margin + 1, 2))
    # the GNS map moves labels by up to the B-spin (doubled)
    L = min(2, M - max(ns))
    if L < 0:
        raise ParameterError(f"M={M} too small for B-spin margin {margin}")
    labels = range(-L, L + 1)
    hom = adj = gns = unit = 0.0
    for _ in range(samples):
        d1 = D.random(rng, labels, ns)
        d2 = D.random(rng, labels, ns)
        O1, O2 = rr.operator(d1).matrix, rr.operator(d2).matrix
        O12 = rr.operator(d1 * d2).matrix
        O1s = rr.operator(d1.star()).matrix
        hom = max(hom, float(np.max(np.abs((O1 @ O2 - O12)[:, mask]))))
        a = O1.conj().T @ rr.gram - rr.gram @ O1s
        adj = max(adj, float(np.max(np.abs(a[np.ix_(mask, mask)]))))
        u, v = rr.gns_vector(d1), rr.gns_vector(d2)
        gns = max(gns, abs(rr.inner(u, v) - D.phi(d1.star() * d2)))
    # e_n b e_m involves n up to |m| + 2 * spin(b), beyond the weight table
    u = CoeffElement.unit(ctx.q)
    ident = rr.operator(D.element({m: u for m in range(-M - 2 * cutoff, M + 2 * cutoff + 1)})).matrix
    unit = float(np.max(np.abs((ident - np.eye(rr.dim))[:, mask])))
    return [report("regrep_homomorphism", hom, tol, cutoff=cutoff, margin=margin),
            report("regrep_adjoint", adj, tol),
            report("regrep_unit", unit, tol),
            report("gns_inner_product", gns, gns_tol)]
