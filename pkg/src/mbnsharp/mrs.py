"""Scaling numbers a_n and b_n for exponential weights.

a_n is the positive root of F(a) = n where F is the arcsine-kernel average of
x Q'(x) over [0, a]; b_n adds the complementary integral to n / a_n.  For the
power weight exp(-|x|^alpha) both have closed forms through the gamma
function; the root-finding and quadrature paths remain available for
cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

from scipy.optimize import brentq

from .quadrature import mrs_b_integral, mrs_integrand_a
from .weights import WeightSpec

__all__ = [
    "MRSNumbers",
    "BracketingError",
    "freud_a_n",
    "freud_b_n",
    "compute_a_n",
    "compute_b_n",
    "mrs_table",
]


class BracketingError(RuntimeError):
    """The root equation could not be bracketed (broken custom weight)."""


@dataclass(frozen=True)
class MRSNumbers:
    """The pair (a_n, b_n) for one degree, with bound diagnostics."""

    n: int
    a_n: float
    b_n: float
    method: str  # "closed_form" | "root" | "convention"

    @property
    def ratio(self) -> float:
        """b_n * a_n / n; >= 1 for power weights, -> 1 in the fast-growth class."""
        return self.b_n * self.a_n / self.n


def freud_a_n(alpha: float, n: int) -> float:
    """Closed form (2^(alpha-2) Gamma(alpha/2)^2 / Gamma(alpha))^(1/alpha) n^(1/alpha)."""
    g = 2.0 ** (alpha - 2.0) * math.gamma(alpha / 2.0) ** 2 / math.gamma(alpha)
    return g ** (1.0 / alpha) * float(n) ** (1.0 / alpha)


def freud_b_n(alpha: float, n: int) -> float:
    """Closed form alpha * n / ((alpha - 1) * a_n)."""
    return alpha * float(n) / ((alpha - 1.0) * freud_a_n(alpha, n))


def compute_a_n(w: WeightSpec, n: int, tol: float = 1e-10, method: str = "auto") -> float:
    """Positive root a of F(a) = n, with |F(a) - n| < tol * n.

    method: "auto" uses the closed form for the power weight and the root
    finder otherwise; "root" forces the root finder (cross-validation);
    "closed_form" requires a power weight.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if w.kind == "unweighted":
        return 1.0
    if method not in ("auto", "root", "closed_form"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed_form" or (method == "auto" and w.kind == "freud"):
        if w.kind != "freud":
            raise ValueError("closed form only available for the power weight")
        return freud_a_n(w.alpha, n)

    target = float(n)

    def F(a):
        return mrs_integrand_a(w, a, tol=min(tol, 1e-12))

    # exponential bracketing from a = 1 (F is strictly increasing)
    lo = hi = min(1.0, 0.5 * w.c) if math.isfinite(w.c) else 1.0
    f0 = F(lo)
    if f0 < target:
        for _ in range(400):
            if math.isfinite(w.c):
                hi = w.c - 0.5 * (w.c - hi)
                if w.c - hi <= 1e-12 * w.c:
                    raise BracketingError(
                        "F(a) never reached n approaching the endpoint; "
                        "weight violates the growth condition")
            else:
                hi *= 2.0
            if F(hi) >= target:
                break
        else:
            raise BracketingError("F(a) never reached n; weight violates growth condition")
    else:
        for _ in range(400):
            lo *= 0.5
            if F(lo) <= target:
                break
        else:
            raise BracketingError("F(a) never fell below n near 0")
    a = brentq(lambda t: F(t) - target, lo, hi, xtol=1e-300, rtol=8.9e-16)
    if abs(F(a) - target) >= tol * target:
        raise BracketingError(f"residual |F(a) - n| too large at a = {a}")
    return float(a)


def compute_b_n(w: WeightSpec, n: int, a_n: float | None = None, tol: float = 1e-10,
                method: str = "auto") -> float:
    """b_n = (2/pi) integral_0^1 Q'(a_n x) sqrt(1-x^2)/x dx + n / a_n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if w.kind == "unweighted":
        return float(n)
    if method not in ("auto", "integral", "closed_form"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed_form" or (method == "auto" and w.kind == "freud"):
        if w.kind != "freud":
            raise ValueError("closed form only available for the power weight")
        return freud_b_n(w.alpha, n)
    if a_n is None:
        a_n = compute_a_n(w, n, tol=tol)
    return mrs_b_integral(w, a_n, tol=min(tol, 1e-12)) + float(n) / a_n


def mrs_table(w: WeightSpec, n_list: Sequence[int]) -> List[MRSNumbers]:
    """One row per degree; degrees must be increasing."""
    if len(n_list) == 0:
        raise ValueError("n_list must be nonempty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    rows = []
    for n in n_list:
        if w.kind == "unweighted":
            rows.append(MRSNumbers(n=n, a_n=1.0, b_n=float(n), method="convention"))
        elif w.kind == "freud":
            rows.append(MRSNumbers(n=n, a_n=freud_a_n(w.alpha, n),
                                   b_n=freud_b_n(w.alpha, n), method="closed_form"))
        else:
            a = compute_a_n(w, n)
            rows.append(MRSNumbers(n=n, a_n=a, b_n=compute_b_n(w, n, a_n=a), method="root"))
    return rows
