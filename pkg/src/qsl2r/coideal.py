"""Podles coideal data: the skew element B_t, its spectral projections and
the coideal subalgebra B = O_q(S_t^2).

The stabilizer coideal I is commutative, spanned by the spectral projections
``e_m`` of ``i B_t`` onto the eigenvalue ``[a + m]``.  On V_n the label ``m``
runs over ``n, n-2, ..., -n``, so ``Phi_C = e_0`` vanishes on half-odd spins.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Tuple

import numpy as np

from . import coeffalg
from .coeffalg import CoeffElement, DualElement
from .qnum import ParameterError, QContext, q_int, q_pochhammer
from .uqsu2 import clebsch_gordan, make_rep, unitary_antipode


class CoidealError(RuntimeError):
    """Internal inconsistency between the CG and spectral computations."""


class NotInBError(ValueError):
    """Input is not in the coideal subalgebra B."""


@dataclass(frozen=True)
class Spectrum:
    """Eigen-data of ``i B_t`` on one block, sorted by decreasing label."""

    labels: Tuple[int, ...]
    values: np.ndarray
    vectors: np.ndarray

    def vector(self, m: int) -> np.ndarray:
        return self.vectors[:, self.labels.index(m)]


class CoidealData:
    """Spectral data of ``i B_t`` on every irreducible block.

    Blocks are computed on demand and cached; ``blocks()`` lists those up to
    ``ctx.max_spin``.
    """

    def __init__(self, ctx: QContext):
        self.ctx = ctx
        self.q = ctx.q
        self.a = ctx.a
        self._ka = q_int(ctx.a, ctx.q)
        self._spec = lru_cache(maxsize=None)(self._spectrum)
        self._kernel = lru_cache(maxsize=None)(self._transfer_kernel)
        self._tensor_proj = lru_cache(maxsize=None)(self._tensor_projections)

    # single blocks -----------------------------------------------------------
    def ibt(self, n: int) -> np.ndarray:
        """``pi_n(i B_t)``."""
        r = make_rep(n, self.q)
        return 1j * self.q ** -0.5 * (r.E - r.F @ r.K) + self._ka * r.K

    def ibt_tensor(self, n1: int, n2: int) -> np.ndarray:
        """Coproduct of ``i B_t`` on V_n1 (x) V_n2.

        ``Delta(B_t) = q^{-1/2}(e - f k) (x) 1 + k (x) B_t``.
        """
        r1, r2 = make_rep(n1, self.q), make_rep(n2, self.q)
        left = 1j * self.q ** -0.5 * (r1.E - r1.F @ r1.K)
        return np.kron(left, np.eye(r2.dim)) + np.kron(r1.K, self.ibt(n2))

    def label(self, value: float, candidates) -> int:
        """Nearest ``m`` with ``[a+m]`` equal to ``value``."""
        gaps = [abs(value - q_int(self.a + m, self.q)) for m in candidates]
        k = int(np.argmin(gaps))
        scale = max(1.0, abs(value))
        if gaps[k] > self.ctx.tol * 100 * scale:
            raise ParameterError(
                f"eigenvalue {value} matches no [a+m] (gap {gaps[k]:.2e}); the block "
                "is too large for double precision at this q, or the parameters are degenerate")
        return list(candidates)[k]

    def _spectrum(self, n: int) -> Spectrum:
        vals, vecs = np.linalg.eigh(self.ibt(n))
        order = np.argsort(vals)[::-1]
        vals, vecs = vals[order], vecs[:, order]
        cands = list(range(n, -n - 1, -2))
        labels = tuple(self.label(v, cands) for v in vals)
        if sorted(labels) != sorted(cands):
            raise ParameterError(f"eigenvalue labels collide on block {n}: {labels}")
        # fix the phase: largest-modulus entry real positive
        for k in range(vecs.shape[1]):
            v = vecs[:, k]
            j = int(np.argmax(np.abs(v)))
            vecs[:, k] = v * abs(v[j]) / v[j]
        vecs.setflags(write=False)
        return Spectrum(labels, vals, vecs)

    def spectrum(self, n: int) -> Spectrum:
        return self._spec(int(n))

    def projector(self, n: int, m: int) -> np.ndarray:
        """Block ``n`` of the spectral projection ``e_m``."""
        sp = self.spectrum(n)
        if m not in sp.labels:
            return np.zeros((n + 1, n + 1), dtype=complex)
        v = sp.vector(m)
        return np.outer(v, v.conj())

    def phi_c(self, n: int) -> np.ndarray:
        """Block of the support projection ``Phi_C = e_0``."""
        return self.projector(n, 0)

    def phi_vector(self, n: int) -> np.ndarray:
        """Unit vector spanning ``Phi_C V_n`` (integer spin only)."""
        if n % 2:
            raise ValueError("Phi_C vanishes on half-odd spin")
        return self.spectrum(n).vector(0)

    def blocks(self) -> List[int]:
        return list(range(self.ctx.max_n + 1))

    def dual(self, x: "StabElement") -> DualElement:
        return DualElement(lambda n: self.stab_block(x, n), "stab")

    def stab_block(self, x: "StabElement", n: int) -> np.ndarray:
        out = np.zeros((n + 1, n + 1), dtype=complex)
        sp = self.spectrum(n)
        for m, c in x.coeffs.items():
            if m in sp.labels:
                v = sp.vector(m)
                out += c * np.outer(v, v.conj())
        return out

    @property
    def phi_c_dual(self) -> DualElement:
        return DualElement(self.phi_c, "Phi_C")

    # tensor blocks ------------------------------------------------------------
    def _tensor_projections(self, n1: int, n2: int, route: str):
        if route == "cg":
            cg = clebsch_gordan(n1, n2, self.q, self.ctx.tol)
            out: Dict[int, np.ndarray] = {}
            for n, T in cg.components.items():
                sp = self.spectrum(n)
                for m in sp.labels:
                    v = T @ sp.vector(m)
                    P = np.outer(v, v.conj())
                    out[m] = out[m] + P if m in out else P
            return out
        if route == "spectral":
            vals, vecs = np.linalg.eigh(self.ibt_tensor(n1, n2))
            cands = range(n1 + n2, -n1 - n2 - 1, -2)
            out = {}
            for val, v in zip(vals, vecs.T):
                m = self.label(val, cands)
                P = np.outer(v, v.conj())
                out[m] = out[m] + P if m in out else P
            return out
        raise ValueError(route)

    def tensor_projector(self, n1: int, n2: int, m: int, route: str = "spectral") -> np.ndarray:
        """``Delta(e_m)`` on V_n1 (x) V_n2.

        ``route="spectral"`` takes the eigenprojection of the coproduct of
        ``i B_t``; ``route="cg"`` assembles it from CG isometries.
        """
        d = (n1 + 1) * (n2 + 1)
        return self._tensor_proj(n1, n2, route).get(m, np.zeros((d, d), dtype=complex))

    def _transfer_kernel(self, n: int, m_from: int, m_to: int) -> np.ndarray:
        """``W`` with ``(e_{m_from} <| a)[m_to] = sum(C_a * W)`` for ``a`` on V_n."""
        n2 = abs(m_to)
        v = self.spectrum(n2).vector(m_to)
        P = self.tensor_projector(n, n2, m_from, route="cg")
        d1 = n + 1
        P4 = P.reshape(d1, n2 + 1, d1, n2 + 1)
        return np.einsum("k,ikjl,l->ij", v.conj(), P4, v)

    def transfer_kernel(self, n: int, m_from: int, m_to: int) -> np.ndarray:
        return self._kernel(int(n), int(m_from), int(m_to))

    def reachable(self, m: int, n: int):
        """Labels ``m'`` that ``e_m <| a`` can reach for ``a`` on V_n."""
        return range(m - n, m + n + 1, 2)


def build_coideal(ctx: QContext) -> CoidealData:
    """Spectral data for every block up to ``ctx.max_spin``, validated."""
    cd = CoidealData(ctx)
    for n in cd.blocks():
        cd.spectrum(n)
    return cd


# --------------------------------------------------------------------------
class StabElement:
    """``sum_m c_m e_m`` in the stabilizer coideal I (finite support)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] = ()):
        self.coeffs: Dict[int, complex] = {
            int(m): complex(c) for m, c in dict(coeffs).items() if c != 0}

    @classmethod
    def e(cls, m: int):
        return cls({m: 1.0})

    def __getitem__(self, m):
        return self.coeffs.get(m, 0.0)

    def support(self, tol: float = 0.0):
        return sorted(m for m, c in self.coeffs.items() if abs(c) > tol)

    def __add__(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        return StabElement({m: self[m] + other[m] for m in keys})

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return StabElement({m: other * c for m, c in self.coeffs.items()})
        if isinstance(other, StabElement):
            return StabElement({m: c * other[m] for m, c in self.coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def star(self):
        return StabElement({m: c.conjugate() for m, c in self.coeffs.items()})

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def allclose(self, other, tol) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        items = ", ".join(f"{m}: {c:.6g}" for m, c in sorted(self.coeffs.items()))
        return f"StabElement({{{items}}})"


def eigvec_plus(n: int, ctx: QContext) -> np.ndarray:
    """Closed-form ``[a+n]``-eigenvector of ``i B_t`` on V_n (not normalized)."""
    q, a = ctx.q, ctx.a
    out = np.zeros(n + 1, dtype=complex)
    for p in range(n + 1):
        num = q_pochhammer(q ** (2 * n), q ** -2, p)
        den = (-1) ** p * q_pochhammer(q ** -2, q ** -2, p)
        out[p] = (-1j * q ** -(a + n)) ** p * np.sqrt(num / den)
    return out


def act_rmod(x: StabElement, a: CoeffElement, cd: CoidealData,
             check: bool = True) -> StabElement:
    """Right module action ``tau(c, x <| a) = tau(a c, x)``.

    Block ``g`` of ``x <| a`` is the partial contraction of ``Delta(x)`` on
    V_n (x) V_g against the coefficients of ``a``; it must be diagonal in the
    eigenbasis of ``i B_t``.
    """
    if not x.coeffs or not a.blocks:
        return StabElement()
    out: Dict[int, complex] = {}
    xd = cd.dual(x)
    lo = min(x.coeffs) - a.max_n
    hi = max(x.coeffs) + a.max_n
    for m2 in range(lo, hi + 1):
        g = abs(m2)
        sp = cd.spectrum(g)
        v = sp.vector(m2)
        Y = np.zeros((g + 1, g + 1), dtype=complex)
        for n, C in a.blocks.items():
            cg = clebsch_gordan(n, g, cd.q, cd.ctx.tol)
            D = cg.lift(xd.block).reshape(n + 1, g + 1, n + 1, g + 1)
            Y += np.einsum("ij,ikjl->kl", C, D)
        if check:
            Z = sp.vectors.conj().T @ Y @ sp.vectors
            off = Z - np.diag(np.diag(Z))
            if off.size and np.max(np.abs(off)) > cd.ctx.tol * max(1.0, np.max(np.abs(Z))) * 100:
                raise CoidealError(f"x <| a is not diagonal on block {g}: "
                                   f"{np.max(np.abs(off)):.2e}")
        val = v.conj() @ Y @ v
        if val != 0:
            out[m2] = val
    return StabElement(out)


def act_rmod_fast(x: StabElement, a: CoeffElement, cd: CoidealData) -> StabElement:
    """Same action through cached transfer kernels (no diagonality check)."""
    out: Dict[int, complex] = {}
    for m, c in x.coeffs.items():
        for n, C in a.blocks.items():
            for m2 in cd.reachable(m, n):
                val = c * np.sum(C * cd.transfer_kernel(n, m, m2))
                out[m2] = out.get(m2, 0) + val
    return StabElement(out)


def stab_from_coeff(a: CoeffElement, cd: CoidealData) -> StabElement:
    """The element ``Phi_C(a .)`` of I."""
    return act_rmod(StabElement.e(0), a, cd)


def phi_c_functional(a: CoeffElement, cd: CoidealData) -> complex:
    """``Phi_C`` viewed as a functional on A."""
    return coeffalg.pair(a, cd.phi_c_dual)


def in_B_residual(b: CoeffElement, cd: CoidealData) -> float:
    """``max ||C_n - Phi_C^T C_n||``; zero exactly for elements of B."""
    return max((float(np.max(np.abs(C - cd.phi_c(n).T @ C)))
                for n, C in b.blocks.items()), default=0.0)


def is_in_B(b: CoeffElement, cd: CoidealData, tol=None) -> bool:
    tol = cd.ctx.tol if tol is None else tol
    return in_B_residual(b, cd) <= tol * max(1.0, b.max_abs())


def _require_B(b: CoeffElement, cd: CoidealData):
    if not is_in_B(b, cd, cd.ctx.tol * 100):
        raise NotInBError(f"element is not in B (residual {in_B_residual(b, cd):.2e})")


def e_b(a: CoeffElement, cd: CoidealData) -> CoeffElement:
    """Conditional expectation ``E_B = (Phi_C (x) id) Delta``."""
    return coeffalg.left_leg_act(a, cd.phi_c_dual)


def f_b(a: CoeffElement, cd: CoidealData) -> CoeffElement:
    """``F_B = (S^-1(Phi_C) (x) id) Delta``."""
    return coeffalg.left_leg_act(a, cd.phi_c_dual.antipode(cd.q, -1))


def sigma_B(b: CoeffElement, cd: CoidealData, direction: int = 1) -> CoeffElement:
    """Modular automorphism of B (+1) or its inverse (-1)."""
    _require_B(b, cd)
    if direction == 1:
        return f_b(coeffalg.sigma_A(b), cd)
    if direction == -1:
        return e_b(coeffalg.sigma_A(b, 1j), cd)
    raise ValueError("direction must be +1 or -1")


def delta_B_half(n: int, cd: CoidealData) -> np.ndarray:
    """``Phi_C delta_A^{1/2} Phi_C = Phi_C K Phi_C`` on block ``n``."""
    P = cd.phi_c(n)
    return P @ np.asarray(make_rep(n, cd.q).K) @ P


def theta(b: CoeffElement, cd: CoidealData) -> CoeffElement:
    """``sigma_B^-1 sigma_A S_A^-2`` restricted to B."""
    return sigma_B(coeffalg.sigma_A(coeffalg.tau_A(b, 1j)), cd, -1)


def spherical(n: int, xi, eta, cd: CoidealData) -> CoeffElement:
    """``pi_n(Phi_C xi, R(Phi_C) eta)``."""
    P = cd.phi_c(n)
    RP = unitary_antipode(make_rep(n, cd.q), P)
    return CoeffElement.coefficient(n, P @ np.asarray(xi), RP @ np.asarray(eta), cd.q)


def random_B(cd: CoidealData, ns, rng: np.random.Generator) -> CoeffElement:
    """Random element of B supported on the integer spins in ``ns``."""
    blocks = {}
    for n in ns:
        if n % 2:
            continue
        v = cd.phi_vector(n)
        w = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        blocks[n] = np.outer(v.conj(), w)
    return CoeffElement(blocks, cd.q)


def B_basis(cd: CoidealData, n: int) -> List[CoeffElement]:
    """The spanning set ``pi_n(v, e_j)`` of the spin ``n/2`` part of B."""
    v = cd.phi_vector(n)
    return [CoeffElement.coefficient(n, v, np.eye(n + 1)[j], cd.q) for j in range(n + 1)]
