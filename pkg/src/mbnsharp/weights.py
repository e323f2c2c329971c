"""Exponential weights W = exp(-Q) on an interval (-c, c), with class validation.

The built-in families are the power weight exp(-|x|^alpha) on the real line,
the iterated-exponential weight exp(-(exp_l(|x|^alpha) - exp_l(0))), a rational
weight on a bounded interval, and the unweighted case W = 1 on (-1, 1).
Custom weights supply Q, Q', Q'' directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "WeightSpec",
    "ClassReport",
    "WeightDomainError",
    "UndefinedWeightError",
    "WeightClassError",
    "freud",
    "erdos_exp",
    "bounded_rational",
    "unweighted",
    "custom",
    "parse_weight",
    "eval_W",
    "eval_T",
    "validate_class",
]


class WeightDomainError(ValueError):
    """Evaluation point outside the weight's interval (or at an excluded point)."""


class UndefinedWeightError(ValueError):
    """Operation has no meaning for this weight kind (e.g. T for W = 1)."""


class WeightClassError(ValueError):
    """Weight construction arguments violate the class requirements."""


def _exp_tower(u, ell):
    """exp_ell(u) with exp_0(u) = u; overflows saturate to +inf."""
    v = np.asarray(u, dtype=float)
    with np.errstate(over="ignore"):
        for _ in range(ell):
            v = np.exp(v)
    return v


@dataclass(frozen=True)
class WeightSpec:
    """An exponential weight W = exp(-Q) on I = (-c, c).

    Attributes
    ----------
    kind : str
        One of "freud", "erdos", "bounded", "unweighted", "custom".
    c : float
        Half-length of the interval; ``math.inf`` for the whole line.
    q, qp, qpp : callables
        Vectorized evaluators for Q, Q', Q''.
    alpha, ell : parameters of the built-in families (None otherwise).
    lambda_est : float or None
        Estimated infimum of T(x) = x Q'(x) / Q(x); filled by
        :func:`validate_class` on success.
    """

    kind: str
    c: float
    q: Callable = field(repr=False, compare=False)
    qp: Callable = field(repr=False, compare=False)
    qpp: Callable = field(repr=False, compare=False)
    alpha: Optional[float] = None
    ell: Optional[int] = None
    lambda_est: Optional[float] = field(default=None, compare=False)

    def spec_string(self) -> str:
        """Mini-grammar form, e.g. "freud:2" or "erdos:2:1"."""
        if self.kind == "freud":
            return f"freud:{self.alpha:g}"
        if self.kind == "erdos":
            return f"erdos:{self.alpha:g}:{self.ell}"
        if self.kind == "bounded":
            return f"bounded:{self.c:g}"
        if self.kind == "unweighted":
            return "unweighted"
        return "custom"

    def __str__(self) -> str:
        return self.spec_string()


def freud(alpha: float) -> WeightSpec:
    """W(x) = exp(-|x|^alpha) on the real line, alpha > 1."""
    if not alpha > 1:
        raise WeightClassError(f"freud weight needs alpha > 1, got {alpha}")
    a = float(alpha)

    def q(x):
        return np.abs(x) ** a

    def qp(x):
        x = np.asarray(x, dtype=float)
        return a * np.abs(x) ** (a - 1.0) * np.sign(x)

    def qpp(x):
        return a * (a - 1.0) * np.abs(x) ** (a - 2.0)

    return WeightSpec(kind="freud", c=math.inf, q=q, qp=qp, qpp=qpp, alpha=a)


def erdos_exp(alpha: float, ell: int = 1) -> WeightSpec:
    """W(x) = exp(-(exp_ell(|x|^alpha) - exp_ell(0))) on the real line.

    exp_0(u) = u and exp_k(u) = exp(exp_{k-1}(u)).  The subtraction of
    exp_ell(0) makes Q(0) = 0 exact.
    """
    if not alpha > 1:
        raise WeightClassError(f"erdos weight needs alpha > 1, got {alpha}")
    if not (isinstance(ell, (int, np.integer)) and ell >= 1):
        raise WeightClassError(f"erdos weight needs integer ell >= 1, got {ell}")
    a = float(alpha)
    ell = int(ell)
    towers_at_zero = [float(_exp_tower(0.0, k)) for k in range(ell + 1)]

    def tower_minus_shift(u):
        # exp_l(u) - exp_l(0) via the recursion D_k = exp_k(0) expm1(D_{k-1}),
        # which keeps full relative accuracy for small u
        d = np.asarray(u, dtype=float)
        with np.errstate(over="ignore"):
            for k in range(1, ell + 1):
                d = towers_at_zero[k] * np.expm1(d)
        return d

    def tower_product(u):
        # prod_{k=1}^{ell} exp_k(u), the derivative of exp_ell
        v = np.asarray(u, dtype=float)
        prod = np.ones_like(v)
        with np.errstate(over="ignore"):
            for _ in range(ell):
                v = np.exp(v)
                prod = prod * v
        return prod

    def partial_sum(u):
        # sum_{k=1}^{ell} prod_{j=1}^{k-1} exp_j(u), derivative of tower_product/log
        v = np.asarray(u, dtype=float)
        total = np.ones_like(v)
        prod = np.ones_like(v)
        with np.errstate(over="ignore"):
            for _ in range(ell - 1):
                v = np.exp(v)
                prod = prod * v
                total = total + prod
        return total

    def q(x):
        return tower_minus_shift(np.abs(x) ** a)

    def qp(x):
        x = np.asarray(x, dtype=float)
        u = np.abs(x) ** a
        return a * np.abs(x) ** (a - 1.0) * tower_product(u) * np.sign(x)

    def qpp(x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        u = ax ** a
        return a * ax ** (a - 2.0) * tower_product(u) * ((a - 1.0) + a * u * partial_sum(u))

    return WeightSpec(kind="erdos", c=math.inf, q=q, qp=qp, qpp=qpp, alpha=a, ell=ell)


def bounded_rational(c: float) -> WeightSpec:
    """W = exp(-Q) on (-c, c) with Q(x) = x^2 / (c^2 - x^2).

    T(x) = 2 c^2 / (c^2 - x^2) increases to infinity at the endpoints, so this
    is the bounded-interval member of the class (inf T = 2).
    """
    if not c > 0:
        raise WeightClassError(f"bounded weight needs c > 0, got {c}")
    c = float(c)
    c2 = c * c

    def q(x):
        x = np.asarray(x, dtype=float)
        return x * x / (c2 - x * x)

    def qp(x):
        x = np.asarray(x, dtype=float)
        return 2.0 * c2 * x / (c2 - x * x) ** 2

    def qpp(x):
        x = np.asarray(x, dtype=float)
        return 2.0 * c2 * (c2 + 3.0 * x * x) / (c2 - x * x) ** 3

    return WeightSpec(kind="bounded", c=c, q=q, qp=qp, qpp=qpp)


def unweighted() -> WeightSpec:
    """W = 1 on (-1, 1); exempt from the differential class conditions."""

    def zero(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return WeightSpec(kind="unweighted", c=1.0, q=zero, qp=zero, qpp=zero)


def custom(q: Callable, qp: Callable, qpp: Callable, c: float = math.inf) -> WeightSpec:
    """Weight from user-supplied vectorized Q, Q', Q''."""
    if not c > 0:
        raise WeightClassError(f"custom weight needs c > 0, got {c}")
    return WeightSpec(kind="custom", c=float(c), q=q, qp=qp, qpp=qpp)


def parse_weight(text: str) -> WeightSpec:
    """Parse the CLI mini-grammar (case-insensitive).

    Accepted forms: "freud:<alpha>", "erdos:<alpha>:<ell>", "bounded:<c>",
    "unweighted".
    """
    parts = text.strip().lower().split(":")
    name = parts[0]
    try:
        if name == "freud" and len(parts) == 2:
            return freud(float(parts[1]))
        if name == "erdos" and len(parts) in (2, 3):
            ell = int(parts[2]) if len(parts) == 3 else 1
            return erdos_exp(float(parts[1]), ell)
        if name == "bounded" and len(parts) == 2:
            return bounded_rational(float(parts[1]))
        if name == "unweighted" and len(parts) == 1:
            return unweighted()
    except (ValueError, WeightClassError) as exc:
        if isinstance(exc, WeightClassError):
            raise
        raise WeightClassError(f"cannot parse weight spec {text!r}: {exc}") from exc
    raise WeightClassError(f"unknown weight spec {text!r}")


def eval_W(w: WeightSpec, x) -> np.ndarray | float:
    """W(x) = exp(-Q(x)); 1 identically for the unweighted kind.

    Raises WeightDomainError when |x| >= c for a finite interval.
    """
    xv = np.asarray(x, dtype=float)
    if np.isfinite(w.c) and np.any(np.abs(xv) >= w.c):
        raise WeightDomainError(f"|x| >= c = {w.c}")
    if w.kind == "unweighted":
        out = np.ones_like(xv)
    else:
        with np.errstate(over="ignore"):
            out = np.exp(-w.q(xv))
    return out if isinstance(x, np.ndarray) else float(out)


def eval_T(w: WeightSpec, x) -> np.ndarray | float:
    """T(x) = x Q'(x) / Q(x), defined for 0 < |x| < c."""
    if w.kind == "unweighted":
        raise UndefinedWeightError("T is undefined for the unweighted kind")
    xv = np.asarray(x, dtype=float)
    if np.any(xv == 0.0):
        raise WeightDomainError("T is undefined at x = 0")
    if np.isfinite(w.c) and np.any(np.abs(xv) >= w.c):
        raise WeightDomainError(f"|x| >= c = {w.c}")
    out = xv * w.qp(xv) / w.q(xv)
    return out if isinstance(x, np.ndarray) else float(out)


@dataclass
class ClassReport:
    """Outcome of sampled validation of the weight-class conditions (a)-(f)."""

    checks: dict
    failures: list
    lambda_est: Optional[float]
    quasi_increasing_constant: Optional[float]
    growth_ratio_constant: Optional[float]
    grid_size: int
    x_max: float
    exempt: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures


def default_x_max(w: WeightSpec, q_cap: float = 300.0) -> float:
    """Largest convenient sampling bound: Q stays below q_cap, x below 10.

    Keeps iterated-exponential weights inside floating-point range.
    """
    if w.kind == "unweighted":
        return 1.0 - 1e-9
    hi = min(10.0, w.c * (1.0 - 1e-9)) if np.isfinite(w.c) else 10.0
    if float(w.q(hi)) <= q_cap:
        return hi
    lo = 1e-6
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(w.q(mid)) > q_cap:
            hi = mid
        else:
            lo = mid
    return lo


def validate_class(w: WeightSpec, grid_size: int = 1000, x_max: Optional[float] = None) -> ClassReport:
    """Check Q against the class conditions on a log-spaced sample of (0, x_max).

    The conditions with unspecified constants are reported as empirical
    estimates: the quasi-increasing constant of T and the constant bounding
    Q'' Q / Q'^2.  On success the weight's ``lambda_est`` is filled with the
    sampled infimum of T.  Sampled, not symbolic: a pass is evidence, not
    proof.
    """
    if grid_size < 100:
        raise ValueError(f"grid_size must be >= 100, got {grid_size}")
    if x_max is None:
        x_max = default_x_max(w)
    if not (0.0 < x_max < w.c):
        raise ValueError(f"x_max must lie in (0, c), got {x_max}")

    if w.kind == "unweighted":
        checks = {k: True for k in "abcdef"}
        return ClassReport(checks=checks, failures=[], lambda_est=None,
                           quasi_increasing_constant=None, growth_ratio_constant=None,
                           grid_size=grid_size, x_max=x_max, exempt=True)

    x = np.logspace(math.log10(x_max) - 8.0, math.log10(x_max), grid_size)
    qx = np.asarray(w.q(x), dtype=float)
    qpx = np.asarray(w.qp(x), dtype=float)
    qppx = np.asarray(w.qpp(x), dtype=float)

    checks = {}
    # (a) even, Q(0) = 0
    scale = 1.0 + np.abs(qx)
    checks["a"] = bool(
        abs(float(w.q(0.0))) <= 1e-12
        and np.max(np.abs(np.asarray(w.q(-x), dtype=float) - qx) / scale) <= 1e-12
    )
    # (b) Q' continuous: central differences track Q' on the sample
    h = 1e-6 * np.maximum(x, 1.0)
    h = np.minimum(h, 0.49 * x)
    if np.isfinite(w.c):
        h = np.minimum(h, 0.49 * (w.c - x))
    fd = (np.asarray(w.q(x + h), dtype=float) - np.asarray(w.q(x - h), dtype=float)) / (2.0 * h)
    checks["b"] = bool(np.max(np.abs(fd - qpx) / (1.0 + np.abs(qpx))) <= 1e-5)
    # (c) Q'' > 0 on (0, c)
    checks["c"] = bool(np.all(qppx > 0.0))
    # (d) Q -> inf at the right endpoint: increasing tail and clearly unbounded
    tail = qx[x >= x_max / 10.0]
    checks["d"] = bool(np.all(np.diff(tail) > 0.0) and qx[-1] >= 5.0)
    # (e) T quasi-increasing with inf > 1
    with np.errstate(divide="ignore", invalid="ignore"):
        T = x * qpx / qx
    finite = np.isfinite(T)
    lambda_est = float(np.min(T[finite])) if finite.any() else math.nan
    suffix_min = np.minimum.accumulate(T[finite][::-1])[::-1]
    quasi_const = float(np.max(T[finite] / suffix_min))
    checks["e"] = bool(finite.all() and lambda_est > 1.0)
    # (f) Q''/Q' <= C Q'/Q: report sup of Q'' Q / Q'^2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = qppx * qx / qpx**2
    growth_const = float(np.max(ratio[np.isfinite(ratio)])) if np.isfinite(ratio).any() else math.inf
    checks["f"] = bool(np.isfinite(growth_const))

    failures = [k for k in "abcdef" if not checks[k]]
    report = ClassReport(checks=checks, failures=failures,
                         lambda_est=lambda_est,
                         quasi_increasing_constant=quasi_const,
                         growth_ratio_constant=growth_const,
                         grid_size=grid_size, x_max=x_max)
    if report.passed:
        object.__setattr__(w, "lambda_est", lambda_est)
    return report
