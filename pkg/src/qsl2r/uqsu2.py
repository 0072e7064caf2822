"""Finite-dimensional unitary representations of U_q(su(2)).

``make_rep(n, q)`` is the (n+1)-dimensional irreducible representation with
orthonormal basis xi_0..xi_n, ``K xi_p = q**(n-2p) xi_p``.  Tensor products use
the coproduct ``D(e) = e(x)1 + k(x)e``, ``D(f) = f(x)k^-1 + 1(x)f``,
``D(k) = k(x)k``, with Kronecker ordering (left factor is the slow index).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, NamedTuple

import numpy as np
from scipy.linalg import null_space

from .qnum import QContext, _qvalue


class CGError(RuntimeError):
    """Numerical failure while decomposing a tensor product."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpinRep:
    n: int
    q: float
    E: np.ndarray = field(repr=False)
    F: np.ndarray = field(repr=False)
    K: np.ndarray = field(repr=False)
    Kinv: np.ndarray = field(repr=False)

    @property
    def spin(self) -> float:
        return self.n / 2

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def weights(self) -> np.ndarray:
        """Exponents ``n - 2p`` of the K eigenvalues."""
        return np.arange(self.n, -self.n - 1, -2)


@lru_cache(maxsize=None)
def _make_rep(n: int, q: float) -> SpinRep:
    d = n + 1
    E = np.zeros((d, d))
    F = np.zeros((d, d))
    c = 1.0 / (q ** -1 - q)
    for p in range(1, d):
        E[p - 1, p] = c * np.sqrt((q ** (-n + p - 1) - q ** (n - p + 1))
                                  * (q ** -p - q ** p)) * q ** (n / 2 - p + 1)
    for p in range(d - 1):
        F[p + 1, p] = c * np.sqrt((q ** (-n + p) - q ** (n - p))
                                  * (q ** (-p - 1) - q ** (p + 1))) * q ** (-n / 2 + p)
    w = np.arange(n, -n - 1, -2)
    K = np.diag(q ** w.astype(float))
    Kinv = np.diag(q ** (-w.astype(float)))
    return SpinRep(n, q, _frozen(E), _frozen(F), _frozen(K), _frozen(Kinv))


def make_rep(n: int, q) -> SpinRep:
    """Irreducible representation of spin ``n/2``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _make_rep(int(n), _qvalue(q))


class TensorRep(NamedTuple):
    E: np.ndarray
    F: np.ndarray
    K: np.ndarray
    Kinv: np.ndarray


def tensor_rep(r1: SpinRep, r2: SpinRep) -> TensorRep:
    """Coproduct images of e, f, k, k^-1 on V1 (x) V2."""
    i1 = np.eye(r1.dim)
    i2 = np.eye(r2.dim)
    E = np.kron(r1.E, i2) + np.kron(r1.K, r2.E)
    F = np.kron(r1.F, r2.Kinv) + np.kron(i1, r2.F)
    return TensorRep(E, F, np.kron(r1.K, r2.K), np.kron(r1.Kinv, r2.Kinv))


@dataclass(frozen=True)
class CGDecomposition:
    """Isometries ``T[n]: V_n -> V_n1 (x) V_n2`` keyed by doubled spin."""

    n1: int
    n2: int
    components: Dict[int, np.ndarray] = field(repr=False)

    def spins(self):
        return sorted(self.components)

    def completeness_residual(self) -> float:
        d = (self.n1 + 1) * (self.n2 + 1)
        total = sum(T @ T.conj().T for T in self.components.values())
        return float(np.max(np.abs(total - np.eye(d))))

    def lift(self, blocks: Callable[[int], np.ndarray]) -> np.ndarray:
        """Coproduct of a dual element given blockwise: sum_g T_g x_g T_g^*."""
        d = (self.n1 + 1) * (self.n2 + 1)
        out = np.zeros((d, d), dtype=complex)
        for n, T in self.components.items():
            out += T @ blocks(n) @ T.conj().T
        return out


@lru_cache(maxsize=None)
def _clebsch_gordan(n1: int, n2: int, q: float, tol: float) -> CGDecomposition:
    r1, r2 = make_rep(n1, q), make_rep(n2, q)
    tr = tensor_rep(r1, r2)
    weights = np.add.outer(r1.weights, r2.weights).ravel()
    components = {}
    for n in range(n1 + n2, abs(n1 - n2) - 1, -2):
        idx = np.flatnonzero(weights == n)
        # highest-weight vectors: kernel of D(e) restricted to the weight space
        ker = null_space(tr.E[:, idx], rcond=1e-10)
        if ker.shape[1] != 1:
            raise CGError(f"expected one highest-weight vector for n={n} in "
                          f"{n1}x{n2}, found {ker.shape[1]}")
        v = np.zeros(len(weights), dtype=complex)
        v[idx] = ker[:, 0]
        lead = v[np.flatnonzero(np.abs(v) > 1e-8)[0]]
        v *= abs(lead) / lead
        v /= np.linalg.norm(v)
        rep = make_rep(n, q)
        T = np.zeros((len(weights), n + 1), dtype=complex)
        T[:, 0] = v
        for p in range(n):
            T[:, p + 1] = tr.F @ T[:, p] / rep.F[p + 1, p].real
        components[n] = T
    cg = CGDecomposition(n1, n2, components)
    res = cg.completeness_residual()
    if res > max(tol, 1e-12) * 1e3:
        raise CGError(f"CG completeness residual {res:.2e} for {n1}x{n2}")
    for T in components.values():
        T.setflags(write=False)
    return cg


def clebsch_gordan(n1: int, n2: int, q, tol: float = 1e-9) -> CGDecomposition:
    """Multiplicity-free decomposition of V_n1 (x) V_n2 (cached per pair)."""
    if isinstance(q, QContext):
        tol = q.tol
    return _clebsch_gordan(int(n1), int(n2), _qvalue(q), float(tol))


def delta_A_power(r: SpinRep, z) -> np.ndarray:
    """Block of the modular element power ``delta_A**z = K**(2z)``."""
    w = r.weights.astype(float)
    return np.diag(r.q ** (2 * z * w)).astype(complex)


def q_dim(n: int, q) -> float:
    """``Tr K`` on V_n, the quantum dimension."""
    r = make_rep(n, q)
    return float(np.trace(r.K).real)


@lru_cache(maxsize=None)
def self_duality(n: int) -> np.ndarray:
    """The unitary ``u_n : conj(xi_p) -> (-1)**p xi_{n-p}`` as a real matrix."""
    W = np.zeros((n + 1, n + 1))
    for p in range(n + 1):
        W[n - p, p] = (-1) ** p
    W.setflags(write=False)
    return W


def unitary_antipode(r: SpinRep, x: np.ndarray) -> np.ndarray:
    """R(x) on one block, realized through the self-duality ``u_n``.

    R is the transpose conjugated by ``u_n``; it is unital, involutive,
    anti-multiplicative and commutes with the adjoint.
    """
    W = self_duality(r.n)
    return W @ np.transpose(x) @ W.T


def antipode(r: SpinRep, x: np.ndarray, direction: int = 1) -> np.ndarray:
    """S(x) (direction +1) or S^-1(x) (direction -1) on one block."""
    Kh = delta_A_power(r, 0.25)
    Khi = delta_A_power(r, -0.25)
    Rx = unitary_antipode(r, x)
    if direction == 1:
        return Khi @ Rx @ Kh
    if direction == -1:
        return Kh @ Rx @ Khi
    raise ValueError("direction must be +1 or -1")
