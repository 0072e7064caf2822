"""O_q(SU(2)) as finite sums of matrix coefficients.

An element is stored as one coefficient matrix per representation label ``n``
(doubled spin).  The matrix ``C`` stands for ``sum_ij C[i, j] pi_n(e_i, e_j)``,
so the matrix coefficient ``pi_n(xi, eta)`` has ``C = outer(conj(xi), eta)`` and
pairs with a dual element ``x`` as ``<xi, pi_n(x) eta>``.  Products go through
the Clebsch-Gordan isometries of :mod:`qsl2r.uqsu2`.
"""
from __future__ import annotations

import numbers
from functools import lru_cache
from typing import Callable, Dict, Iterable, Mapping, Optional

import numpy as np

from .qnum import QContext, _qvalue
from .uqsu2 import (antipode, clebsch_gordan, delta_A_power, make_rep,
                    self_duality)


def _k_power(n: int, q: float, z) -> np.ndarray:
    """Diagonal of ``K**z`` on V_n (complex exponent allowed)."""
    w = np.arange(n, -n - 1, -2).astype(float)
    return q ** (z * w + 0j)


class DualElement:
    """Element of the dual algebra given blockwise by ``n -> matrix``.

    Blocks are produced lazily, so infinite objects like powers of the modular
    element or the spectral projections of the coideal fit the same type.
    """

    def __init__(self, block: Callable[[int], np.ndarray], name: str = ""):
        self._block = lru_cache(maxsize=None)(block)
        self.name = name

    def block(self, n: int) -> np.ndarray:
        return self._block(int(n))

    def __call__(self, n: int) -> np.ndarray:
        return self.block(n)

    def __repr__(self):
        return f"DualElement({self.name or '...'})"

    @classmethod
    def from_blocks(cls, blocks: Mapping[int, np.ndarray],
                    default: Optional[Callable[[int], np.ndarray]] = None,
                    name: str = ""):
        blocks = {int(k): np.asarray(v, dtype=complex) for k, v in blocks.items()}

        def f(n):
            if n in blocks:
                return blocks[n]
            if default is None:
                return np.zeros((n + 1, n + 1), dtype=complex)
            return default(n)

        return cls(f, name)

    @classmethod
    def identity(cls):
        return cls(lambda n: np.eye(n + 1, dtype=complex), "1")

    @classmethod
    def k_power(cls, s, q):
        """``k**s`` (so ``delta_A**z`` is ``k_power(2z)``)."""
        q = _qvalue(q)
        return cls(lambda n: np.diag(_k_power(n, q, s)), f"k^{s}")

    @classmethod
    def generator(cls, name: str, q):
        q = _qvalue(q)
        attr = {"e": "E", "f": "F", "k": "K", "kinv": "Kinv"}[name]
        return cls(lambda n: np.asarray(getattr(make_rep(n, q), attr)), name)

    def __mul__(self, other):
        if isinstance(other, DualElement):
            return DualElement(lambda n: self.block(n) @ other.block(n))
        if isinstance(other, numbers.Number):
            return DualElement(lambda n: other * self.block(n))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return NotImplemented

    def __add__(self, other):
        return DualElement(lambda n: self.block(n) + other.block(n))

    def __sub__(self, other):
        return DualElement(lambda n: self.block(n) - other.block(n))

    def adjoint(self):
        return DualElement(lambda n: self.block(n).conj().T)

    def antipode(self, q, direction: int = 1):
        q = _qvalue(q)
        return DualElement(lambda n: antipode(make_rep(n, q), self.block(n), direction))


class CoeffElement:
    """Immutable element of O_q(SU(2)); see the module docstring."""

    __slots__ = ("q", "_blocks")

    def __init__(self, blocks: Mapping[int, np.ndarray], q):
        self.q = _qvalue(q)
        clean = {}
        for n, C in blocks.items():
            n = int(n)
            C = np.array(C, dtype=complex)
            if C.shape != (n + 1, n + 1):
                raise ValueError(f"block {n} must be {(n + 1, n + 1)}, got {C.shape}")
            if np.any(C != 0):
                C.setflags(write=False)
                clean[n] = C
        self._blocks = dict(sorted(clean.items()))

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, q):
        return cls({}, q)

    @classmethod
    def unit(cls, q):
        return cls({0: np.ones((1, 1))}, q)

    @classmethod
    def coefficient(cls, n: int, xi, eta, q):
        """The matrix coefficient ``pi_n(xi, eta)``."""
        xi = np.asarray(xi, dtype=complex)
        eta = np.asarray(eta, dtype=complex)
        return cls({n: np.outer(xi.conj(), eta)}, q)

    @classmethod
    def basis(cls, n: int, i: int, j: int, q):
        """``pi_n(e_i, e_j)``."""
        C = np.zeros((n + 1, n + 1))
        C[i, j] = 1
        return cls({n: C}, q)

    @classmethod
    def random(cls, ns: Iterable[int], q, rng: np.random.Generator):
        return cls({n: rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
                    for n in ns}, q)

    # access -----------------------------------------------------------------
    @property
    def blocks(self) -> Dict[int, np.ndarray]:
        return dict(self._blocks)

    def block(self, n: int) -> np.ndarray:
        C = self._blocks.get(int(n))
        return C if C is not None else np.zeros((n + 1, n + 1), dtype=complex)

    def support(self, tol: float = 0.0):
        return [n for n, C in self._blocks.items() if np.max(np.abs(C)) > tol]

    @property
    def max_n(self) -> int:
        return max(self._blocks, default=0)

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(C))) for C in self._blocks.values()), default=0.0)

    def map_blocks(self, fn: Callable[[int, np.ndarray], np.ndarray]) -> "CoeffElement":
        return CoeffElement({n: fn(n, C) for n, C in self._blocks.items()}, self.q)

    def allclose(self, other: "CoeffElement", tol: float) -> bool:
        return (self - other).max_abs() <= tol

    # arithmetic -------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, CoeffElement):
            raise TypeError(f"expected CoeffElement, got {type(other).__name__}")
        if other.q != self.q:
            raise ValueError("elements built for different q")

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = other * CoeffElement.unit(self.q)
        self._check(other)
        keys = set(self._blocks) | set(other._blocks)
        return CoeffElement({n: self.block(n) + other.block(n) for n in keys}, self.q)

    __radd__ = __add__

    def __neg__(self):
        return self.map_blocks(lambda n, C: -C)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.map_blocks(lambda n, C: other * C)
        return product(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * (1.0 / other)

    def star(self):
        return star(self)

    def __repr__(self):
        return f"CoeffElement(q={self.q}, support={list(self._blocks)})"


def generators(q):
    """The entries alpha, beta, gamma, delta of the fundamental corepresentation."""
    return tuple(CoeffElement.basis(1, i, j, q) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))


def pair(a: CoeffElement, x: DualElement) -> complex:
    """Bilinear pairing ``tau(a, x)``."""
    return complex(sum(np.sum(C * x.block(n)) for n, C in a.blocks.items()))


def product(a: CoeffElement, b: CoeffElement) -> CoeffElement:
    """Product dual to the coproduct of the dual algebra.

    ``tau(ab, x) = tau(a (x) b, Delta x)`` with ``Delta x = sum_g T_g x_g T_g^*``,
    which gives the block ``T_g^T (C_a (x) C_b) conj(T_g)``.
    """
    a._check(b)
    out: Dict[int, np.ndarray] = {}
    for n1, C1 in a.blocks.items():
        for n2, C2 in b.blocks.items():
            M = np.kron(C1, C2)
            cg = clebsch_gordan(n1, n2, a.q)
            for n, T in cg.components.items():
                blk = T.T @ M @ T.conj()
                out[n] = out[n] + blk if n in out else blk
    return CoeffElement(out, a.q)


def _star_block(n: int, q: float, C: np.ndarray) -> np.ndarray:
    W = self_duality(n)
    kh = _k_power(n, q, 0.5)
    return W.T @ (kh[:, None] * C.conj() / kh[None, :]) @ W


def star(a: CoeffElement) -> CoeffElement:
    """Involution ``pi(xi, eta)* = pi(delta^-1/4 xi*, delta^1/4 eta*)``.

    Dual conjugates are identified with V_n through the self-duality ``u_n``.
    """
    return a.map_blocks(lambda n, C: _star_block(n, a.q, C))


def counit(a: CoeffElement) -> complex:
    return complex(sum(np.trace(C) for C in a.blocks.values()))


def haar(a: CoeffElement) -> complex:
    """Haar state: the coefficient on the trivial representation."""
    return complex(a.block(0)[0, 0])


def sigma_A(a: CoeffElement, z=-1j) -> CoeffElement:
    """Modular group ``(sigma_A)_z``; the default ``z = -i`` is sigma_A itself."""
    def f(n, C):
        d = _k_power(n, a.q, -1j * z)
        return d[:, None] * C * d[None, :]
    return a.map_blocks(f)


def tau_A(a: CoeffElement, z=-1j) -> CoeffElement:
    """Scaling group ``(tau_A)_z``; ``z = -i`` gives the antipode squared."""
    def f(n, C):
        d = _k_power(n, a.q, -1j * z)
        return d[:, None] * C / d[None, :]
    return a.map_blocks(f)


def antipode_A(a: CoeffElement, direction: int = 1) -> CoeffElement:
    """Antipode S_A (direction +1) or its inverse (direction -1).

    Dual to the antipode of the dual algebra: ``tau(S_A a, x) = tau(a, S x)``.
    """
    def f(n, C):
        W = self_duality(n)
        kh = _k_power(n, a.q, 0.5)
        if direction == 1:
            return W.T @ (kh[:, None] * C.T / kh[None, :]) @ W
        if direction == -1:
            return (kh[:, None] * (W @ C.T @ W.T)) / kh[None, :]
        raise ValueError("direction must be +1 or -1")
    return a.map_blocks(f)


def left_leg_act(a: CoeffElement, x: DualElement) -> CoeffElement:
    """``(x (x) id) Delta(a)``: replaces ``pi(xi, eta)`` by ``pi(x^* xi, eta)``."""
    return a.map_blocks(lambda n, C: x.block(n).T @ C)


def right_leg_act(a: CoeffElement, x: DualElement) -> CoeffElement:
    """``x |> a = (id (x) x) Delta(a)``: replaces ``pi(xi, eta)`` by ``pi(xi, x eta)``."""
    return a.map_blocks(lambda n, C: C @ x.block(n))


def modular_element(q, z=1.0) -> DualElement:
    """``delta_A**z``."""
    q = _qvalue(q)
    return DualElement(lambda n: delta_A_power(make_rep(n, q), z), f"delta^{z}")
