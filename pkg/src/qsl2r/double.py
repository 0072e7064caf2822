"""The Drinfeld double coideal D(B, I), i.e. U_q(sl(2,R)_t).

Elements are kept in the canonical I.B normal form ``sum_m e_m b_m`` with
``b_m`` in B; since the ``e_m`` are orthogonal idempotents this form is unique.
Reordering uses ``b y = (y <| S_A^-1(b_(2))) b_(1)``; with the transfer kernel
``W_n(m -> m')`` of :class:`~qsl2r.coideal.CoidealData` this becomes

    b e_n = sum_m' e_m' b^(n,m'),   C_b^(n,m') = C_b S^-1(W(n, m'))^T.

The GNS map follows ``Lambda_D(b x) = Lambda_B(b) (x) Lambda_I(x)``, so an I.B
element is first moved to B.I order with ``y b = b_(1) (y <| b_(2))``.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from . import coeffalg
from .coeffalg import CoeffElement, DualElement
from .coideal import (CoidealData, StabElement, _require_B, act_rmod_fast,
                      random_B, sigma_B)
from .relint import InvariantIntegral, TruncationError
from .uqsu2 import antipode, make_rep


class DrinfeldDouble:
    """Arithmetic, the functional phi_D and its modular group for D(B, I)."""

    def __init__(self, cd: CoidealData, integral: InvariantIntegral):
        self.cd = cd
        self.q = cd.q
        self.integral = integral
        self._reorder = lru_cache(maxsize=None)(self._reorder_kernel)

    # construction ------------------------------------------------------------
    def element(self, terms: Mapping[int, CoeffElement]) -> "DoubleElement":
        return DoubleElement(self, terms)

    def one(self) -> "DoubleElement":
        """The unit, truncated to the labels present in the weight table.

        I has no unit of its own; ``sum_m e_m`` is only a multiplier, so it is
        cut off at the integral's truncation.
        """
        u = CoeffElement.unit(self.q)
        return self.element({m: u for m in self.integral.weights})

    def from_parts(self, x: StabElement, b: Optional[CoeffElement] = None) -> "DoubleElement":
        """The product ``x b`` (``b`` defaults to 1)."""
        b = CoeffElement.unit(self.q) if b is None else b
        _require_B(b, self.cd)
        return self.element({m: c * b for m, c in x.coeffs.items()})

    def random(self, rng: np.random.Generator, labels, ns) -> "DoubleElement":
        """Random element with a random B part on every label in ``labels``."""
        return self.element({int(m): random_B(self.cd, ns, rng) for m in labels})

    # kernels -------------------------------------------------------------------
    def _reorder_kernel(self, n: int, m_from: int, m_to: int) -> np.ndarray:
        W = self.cd.transfer_kernel(n, m_from, m_to)
        return antipode(make_rep(n, self.q), W, -1).T

    def move_past(self, b: CoeffElement, m_from: int) -> Dict[int, CoeffElement]:
        """``b e_{m_from} = sum_m' e_m' b'``; returns ``{m': b'}``."""
        out: Dict[int, CoeffElement] = {}
        if not b.blocks:
            return out
        for m2 in self.cd.reachable(m_from, b.max_n):
            bb = CoeffElement({n: C @ self._reorder(n, m_from, m2)
                               for n, C in b.blocks.items()}, self.q)
            if bb.blocks:
                out[m2] = bb
        return out

    def to_BI(self, d: "DoubleElement") -> Dict[int, CoeffElement]:
        """B.I form ``sum_m' b'_m' e_m'`` via ``y b = b_(1) (y <| b_(2))``."""
        out: Dict[int, CoeffElement] = {}
        for m, b in d.terms.items():
            for m2 in self.cd.reachable(m, b.max_n):
                bb = CoeffElement({n: C @ self.cd.transfer_kernel(n, m, m2).T
                                   for n, C in b.blocks.items()}, self.q)
                if bb.blocks:
                    out[m2] = out[m2] + bb if m2 in out else bb
        return out

    # operations ----------------------------------------------------------------
    def mul(self, d1: "DoubleElement", d2: "DoubleElement") -> "DoubleElement":
        out: Dict[int, CoeffElement] = {}
        for m, b in d1.terms.items():
            for n, c in d2.terms.items():
                moved = self.move_past(b, n).get(m)
                if moved is None:
                    continue
                term = moved * c
                out[m] = out[m] + term if m in out else term
        return self.element(out)

    def star(self, d: "DoubleElement") -> "DoubleElement":
        """``(e_m b)^* = b^* e_m`` brought back to I.B form."""
        out: Dict[int, CoeffElement] = {}
        for m, b in d.terms.items():
            for m2, bb in self.move_past(coeffalg.star(b), m).items():
                out[m2] = out[m2] + bb if m2 in out else bb
        return self.element(out)

    def phi(self, d: "DoubleElement") -> complex:
        """``phi_D(x b) = psi(x) Phi_A(b)``."""
        out = 0j
        for m, b in d.terms.items():
            if m not in self.integral.weights:
                raise TruncationError(f"label {m} outside the weight table")
            out += self.integral.weights[m] * coeffalg.haar(b)
        return out

    def sigma(self, d: "DoubleElement") -> "DoubleElement":
        """``sigma_D(y b) = kappa(y) sigma_B(g^-1 |> b)``, implemented for ``g = k^-1``.

        For that character ``kappa`` is the identity.
        """
        if self.integral.g.s != -1:
            raise NotImplementedError("sigma_D is only implemented for g = k^-1")
        ginv = self.integral.g.inverse().dual(self.q)
        return self.element({m: sigma_B(coeffalg.right_leg_act(b, ginv), self.cd)
                             for m, b in d.terms.items()})

    def bimodule_act(self, x: Optional[DualElement], d: "DoubleElement",
                     a: Optional[CoeffElement] = None) -> "DoubleElement":
        """``x |> (y b) <| a = (y <| a)(x |> b)``."""
        out: Dict[int, CoeffElement] = {}
        for m, b in d.terms.items():
            bx = b if x is None else coeffalg.right_leg_act(b, x)
            ys = {m: 1.0} if a is None else act_rmod_fast(StabElement.e(m), a, self.cd).coeffs
            for m2, c in ys.items():
                out[m2] = out[m2] + c * bx if m2 in out else c * bx
        return self.element(out)


class DoubleElement:
    """``sum_m e_m b_m`` in D(B, I)."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: DrinfeldDouble, terms: Mapping[int, CoeffElement]):
        self.algebra = algebra
        self.terms: Dict[int, CoeffElement] = {
            int(m): b for m, b in sorted(terms.items()) if b.blocks}

    @property
    def b_max_n(self) -> int:
        return max((b.max_n for b in self.terms.values()), default=0)

    @property
    def labels(self) -> List[int]:
        return list(self.terms)

    def max_abs(self) -> float:
        return max((b.max_abs() for b in self.terms.values()), default=0.0)

    def __add__(self, other):
        keys = set(self.terms) | set(other.terms)
        z = CoeffElement.zero(self.algebra.q)
        return DoubleElement(self.algebra, {m: self.terms.get(m, z) + other.terms.get(m, z)
                                            for m in keys})

    def __neg__(self):
        return DoubleElement(self.algebra, {m: -b for m, b in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return DoubleElement(self.algebra, {m: other * b for m, b in self.terms.items()})
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return NotImplemented

    def star(self):
        return self.algebra.star(self)

    def allclose(self, other, tol) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        return f"DoubleElement(labels={self.labels}, b_max_n={self.b_max_n})"


def dmul(d1: DoubleElement, d2: DoubleElement) -> DoubleElement:
    return d1.algebra.mul(d1, d2)


def dstar(d: DoubleElement) -> DoubleElement:
    return d.algebra.star(d)


def phi_D(d: DoubleElement) -> complex:
    return d.algebra.phi(d)


def sigma_D(d: DoubleElement) -> DoubleElement:
    return d.algebra.sigma(d)


def bimodule_act(x, d: DoubleElement, a=None) -> DoubleElement:
    return d.algebra.bimodule_act(x, d, a)


# --------------------------------------------------------------------------
@dataclass
class Operator:
    """Matrix of ``pi_reg(d)`` and which columns are free of truncation loss."""

    matrix: np.ndarray
    exact: np.ndarray


class RegularRepresentation:
    """``pi_reg`` on truncated ``L^2(B) (x) L^2(I)``.

    ``cutoff`` bounds the B-spin (integer spins ``0..cutoff``) and ``M`` the
    I-labels ``|m| <= M``.  Basis vectors are ``Lambda_B(pi_n(v_n, e_j))`` and
    ``Lambda_I(e_m)``.
    """

    def __init__(self, double: DrinfeldDouble, cutoff: int, M: int):
        self.double = double
        self.cd = double.cd
        self.q = double.q
        self.cutoff = int(cutoff)
        self.M = int(M)
        if any(m not in double.integral.weights for m in range(-M, M + 1)):
            raise TruncationError("weight table smaller than the I truncation")
        self.b_index: List[Tuple[int, int]] = [
            (n, j) for n in range(0, 2 * self.cutoff + 1, 2) for j in range(n + 1)]
        self.i_index = list(range(-self.M, self.M + 1))
        self._bpos = {k: i for i, k in enumerate(self.b_index)}
        self._ipos = {m: i for i, m in enumerate(self.i_index)}
        self.gram_B = self._gram_B()
        self.gram_I = np.diag([double.integral.weights[m] for m in self.i_index]).astype(complex)
        self.gram = np.kron(self.gram_B, self.gram_I)

    @property
    def dim(self) -> int:
        return len(self.b_index) * len(self.i_index)

    def basis_B(self, k: int) -> CoeffElement:
        n, j = self.b_index[k]
        return CoeffElement.coefficient(n, self.cd.phi_vector(n), np.eye(n + 1)[j], self.q)

    def _gram_B(self) -> np.ndarray:
        elems = [self.basis_B(k) for k in range(len(self.b_index))]
        G = np.zeros((len(elems), len(elems)), dtype=complex)
        for i, bi in enumerate(elems):
            si = coeffalg.star(bi)
            for j, bj in enumerate(elems):
                if self.b_index[i][0] == self.b_index[j][0]:
                    G[i, j] = coeffalg.haar(si * bj)
        return G

    def coords_B(self, b: CoeffElement, strict: bool = True) -> Tuple[np.ndarray, bool]:
        """Coordinates of ``Lambda_B(b)``; the flag reports truncation loss."""
        out = np.zeros(len(self.b_index), dtype=complex)
        exact = True
        for n, C in b.blocks.items():
            if n % 2 or n > 2 * self.cutoff:
                if np.max(np.abs(C)) > 0:
                    exact = False
                    if strict:
                        raise TruncationError(
                            f"B-spin {n / 2} exceeds cutoff {self.cutoff}; "
                            f"need cutoff >= {n // 2}")
                continue
            w = self.cd.phi_vector(n) @ C
            for j in range(n + 1):
                out[self._bpos[(n, j)]] = w[j]
        return out, exact

    def vector(self, parts: Mapping[int, CoeffElement], strict: bool = True):
        """Coordinates of ``sum_m Lambda_B(b_m) (x) Lambda_I(e_m)``."""
        v = np.zeros((len(self.b_index), len(self.i_index)), dtype=complex)
        exact = True
        for m, b in parts.items():
            if m not in self._ipos:
                exact = False
                if strict:
                    raise TruncationError(f"I-label {m} outside |m| <= {self.M}")
                continue
            c, ok = self.coords_B(b, strict)
            exact &= ok
            v[:, self._ipos[m]] += c
        return v.ravel(), exact

    def gns_vector(self, d: DoubleElement) -> np.ndarray:
        return self.vector(self.double.to_BI(d))[0]

    def inner(self, u: np.ndarray, v: np.ndarray) -> complex:
        return complex(u.conj() @ self.gram @ v)

    def apply_basis(self, d: DoubleElement, kb: int, m: int) -> Dict[int, CoeffElement]:
        """``pi_reg(d)`` on ``Lambda_B(basis_kb) (x) Lambda_I(e_m)``.

        Returns the image as ``{m: b}`` with the B parts unreduced.
        """
        b0 = self.basis_B(kb)
        out = CoeffElement.zero(self.q)
        for n_lab, c in d.terms.items():
            cb = c * b0
            moved = CoeffElement({n: C @ self.cd.transfer_kernel(n, n_lab, m).T
                                  for n, C in cb.blocks.items()}, self.q)
            out = out + moved
        return {m: out}

    def operator(self, d: DoubleElement) -> Operator:
        N = self.dim
        mat = np.zeros((N, N), dtype=complex)
        exact = np.ones(N, dtype=bool)
        nI = len(self.i_index)
        for kb in range(len(self.b_index)):
            for mi, m in enumerate(self.i_index):
                col = kb * nI + mi
                v, ok = self.vector(self.apply_basis(d, kb, m), strict=False)
                mat[:, col] = v
                exact[col] = ok
        return Operator(mat, exact)

    def interior(self, spin_margin: float, label_margin: int = 0) -> np.ndarray:
        """Mask of basis vectors with B-spin <= cutoff - spin_margin and
        ``|m| <= M - label_margin``.

        ``pi_reg`` keeps the I-label fixed, so only the B-spin needs a margin.
        """
        mask = np.zeros(self.dim, dtype=bool)
        nI = len(self.i_index)
        for kb, (n, _) in enumerate(self.b_index):
            for mi, m in enumerate(self.i_index):
                mask[kb * nI + mi] = (n / 2 <= self.cutoff - spin_margin
                                      and abs(m) <= self.M - label_margin)
        if not mask.any():
            raise TruncationError(
                f"no interior vectors: need cutoff >= {spin_margin} and M >= {label_margin}")
        return mask


def regular_rep(d: DoubleElement, cutoff: int, M: int) -> Operator:
    """Convenience wrapper building the representation for a single element."""
    rr = RegularRepresentation(d.algebra, cutoff, M)
    if d.b_max_n / 2 > cutoff:
        raise TruncationError(f"element has B-spin {d.b_max_n / 2}; need cutoff >= "
                              f"{d.b_max_n / 2 + 1}")
    return rr.operator(d)
