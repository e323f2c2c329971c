"""Exact reference constants: Chebyshev derivatives at zero, the classical
sup-norm coefficient formula, and the known limit constants.

Chebyshev coefficients are kept in arbitrary-precision integers; they reach
2^(n-1) and would overflow 64-bit machine words near n = 64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

__all__ = [
    "EValue",
    "chebyshev_coefficients",
    "chebyshev_derivative_at_zero",
    "markov_constant",
    "reference_E",
    "GORBACHEV_BAND",
]

# Two-sided numerical band for the p = 1, N = 0 limit constant.
GORBACHEV_BAND: Tuple[float, float] = (0.5409 / math.pi, 0.5484 / math.pi)


@lru_cache(maxsize=None)
def chebyshev_coefficients(n: int) -> Tuple[int, ...]:
    """Exact integer monomial coefficients of T_n (index = power)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return (1,)
    prev: List[int] = [1]
    cur: List[int] = [0, 1]
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for j, c in enumerate(prev):
            nxt[j] -= c
        prev, cur = cur, nxt
    return tuple(cur)


def chebyshev_derivative_at_zero(n: int, N: int) -> int:
    """T_n^(N)(0) as an exact integer (0 on parity mismatch or N > n)."""
    if n < 0 or N < 0:
        raise ValueError("n and N must be >= 0")
    coeffs = chebyshev_coefficients(n)
    if N >= len(coeffs):
        return 0
    return coeffs[N] * math.factorial(N)


def markov_constant(N: int, n: int) -> float:
    """Sharp sup-norm constant for the N-th derivative at 0 on (-1, 1).

    n^(-N) |T_{n-1}^(N)(0)| when n - N is odd, n^(-N) |T_n^(N)(0)| when even.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if N > n:
        raise ValueError(f"N must be <= n, got N={N}, n={n}")
    m = n - 1 if (n - N) % 2 == 1 else n
    return abs(chebyshev_derivative_at_zero(m, N)) / float(n) ** N


@dataclass(frozen=True)
class EValue:
    """Known status of the limit constant for a given (p, N).

    kind is "exact" (p in {2, inf}), "bounds" (p = 1, N = 0, the Gorbachev
    band), or "unknown".
    """

    p: float
    N: int
    kind: str
    value: Optional[float] = None
    lo: Optional[float] = None
    hi: Optional[float] = None


def reference_E(p: float, N: int) -> EValue:
    """E_{p,N}: 1 at p = inf, (pi (2N+1))^(-1/2) at p = 2, a band at (1, 0)."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if not (p > 0.0 or math.isinf(p)):
        raise ValueError(f"p must be positive or inf, got {p}")
    if math.isinf(p):
        return EValue(p=p, N=N, kind="exact", value=1.0)
    if p == 2.0:
        return EValue(p=p, N=N, kind="exact", value=(math.pi * (2 * N + 1)) ** -0.5)
    if p == 1.0 and N == 0:
        lo, hi = GORBACHEV_BAND
        return EValue(p=p, N=N, kind="bounds", lo=lo, hi=hi)
    return EValue(p=p, N=N, kind="unknown")
