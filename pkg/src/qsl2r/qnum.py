"""q-numbers, Pochhammer symbols and the shared numerical context.

Representation labels are stored as the integer ``n = 2 * spin`` everywhere in
the package, so spin 1/2 is ``n = 1`` and spin 1 is ``n = 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ParameterError(ValueError):
    """Raised for an invalid (q, a, tol, max_spin) combination."""


@dataclass(frozen=True)
class QContext:
    """Deformation parameter ``q``, coideal parameter ``a`` and tolerances.

    ``t = q**a - q**-a`` is derived from ``a``; ``max_spin`` bounds the
    representations visited by global checks.
    """

    q: float = 0.5
    a: float = 1.0
    tol: float = 1e-9
    max_spin: float = 3

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ParameterError(f"q must lie in (0, 1), got {self.q}")
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.max_spin < 1 or float(2 * self.max_spin) != int(2 * self.max_spin):
            raise ParameterError(
                f"max_spin must be a half-integer >= 1, got {self.max_spin}")

    @property
    def t(self) -> float:
        return self.q ** self.a - self.q ** (-self.a)

    @property
    def max_n(self) -> int:
        """Largest doubled spin ``2 * max_spin``."""
        return int(round(2 * self.max_spin))


def _qvalue(q) -> float:
    return q.q if isinstance(q, QContext) else float(q)


def q_int(x, q) -> float:
    """The q-number ``[x] = (q**x - q**-x) / (q - 1/q)``.

    ``q`` may be a float or a :class:`QContext`.
    """
    q = _qvalue(q)
    return (q ** x - q ** (-x)) / (q - 1.0 / q)


def q_pochhammer(x, base, n: int):
    """``(x; base)_n = (1 - x)(1 - base x) ... (1 - base**(n-1) x)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1.0
    for k in range(n):
        out *= 1 - base ** k * x
    return out


def approx_eq(x, y, tol) -> bool:
    """Max-entry absolute comparison; ``tol`` may be a float or a context."""
    tol = tol.tol if isinstance(tol, QContext) else float(tol)
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    if x.size == 0:
        return True
    return bool(np.max(np.abs(x - y)) <= tol)


def max_abs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0
