"""Weighted integration and L_p norms on bounded and unbounded intervals.

Three building blocks:

* a double-exponential (tanh-sinh) rule on (0, 1) for the two equilibrium
  integrals behind the scaling numbers -- it absorbs the endpoint
  singularities exactly;
* truncated composite Gauss-Legendre rules whose window carries a certified
  relative tail bound for integrands x^k W(x)^p, k <= 2n;
* norm evaluation: kink-split adaptive quadrature for finite p, dense
  Chebyshev sampling plus ternary refinement for the sup norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from .weights import WeightSpec, eval_W

__all__ = [
    "QuadratureRule",
    "QuadratureError",
    "tanh_sinh_01",
    "build_rule",
    "weighted_Lp_norm",
    "mrs_integrand_a",
    "mrs_b_integral",
    "sup_abs_on_interval",
    "truncation_window",
]


class QuadratureError(RuntimeError):
    """Tail bound or node budget could not be satisfied."""


# ---------------------------------------------------------------------------
# tanh-sinh rule on (0, 1)
# ---------------------------------------------------------------------------

def tanh_sinh_01(f: Callable, tol: float = 1e-13, t_max: float = 6.0,
                 max_level: int = 12) -> float:
    """Integrate f over (0, 1) with a doubling tanh-sinh trapezoid ladder.

    ``f(x, xc)`` receives both x and xc = 1 - x so integrands can keep full
    relative accuracy at whichever endpoint they are singular.  Handles
    integrable algebraic endpoint singularities (x^s, s > -1).
    """
    prev = None
    total = 0.0
    for level in range(5, max_level + 1):
        h = t_max / 2**level
        t = np.arange(-(2**level), 2**level + 1) * h
        u = 0.5 * np.pi * np.sinh(t)
        x = expit(2.0 * u)
        xc = expit(-2.0 * u)
        w = h * 0.25 * np.pi * np.cosh(t) / np.cosh(u) ** 2
        mask = (x > 0.0) & (xc > 0.0) & (w > 0.0)
        vals = f(x[mask], xc[mask])
        total = float(np.sum(vals * w[mask]))
        if prev is not None and abs(total - prev) <= tol * max(abs(total), 1e-300):
            return total
        prev = total
    return total


# ---------------------------------------------------------------------------
# equilibrium integrals
# ---------------------------------------------------------------------------

def mrs_integrand_a(w: WeightSpec, a: float, tol: float = 1e-13) -> float:
    """F(a) = (2/pi) * integral_0^1 a x Q'(a x) / sqrt(1 - x^2) dx.

    The substitution x = sin(theta) removes the square-root singularity
    exactly; tanh-sinh handles the fractional-power behaviour of Q' at 0.
    F is strictly increasing in a, so it brackets cleanly for root finding.
    """
    if not (0.0 < a < w.c):
        raise ValueError(f"a must lie in (0, c), got {a}")

    def f(s, sc):
        theta = 0.5 * np.pi * s
        t = a * np.sin(theta)
        return t * w.qp(t)

    # (2/pi) * (pi/2) = 1 after theta = (pi/2) s
    return tanh_sinh_01(f, tol=tol)


def mrs_b_integral(w: WeightSpec, a: float, tol: float = 1e-13) -> float:
    """(2/pi) * integral_0^1 Q'(a x) sqrt(1 - x^2) / x dx.

    After x = sin(theta) the integrand behaves like theta^(alpha - 2) at the
    origin for power-type Q; the tanh-sinh nodes absorb that singularity.
    """
    if not (0.0 < a < w.c):
        raise ValueError(f"a must lie in (0, c), got {a}")

    def f(s, sc):
        theta = 0.5 * np.pi * s
        sn = np.sin(theta)
        cs = np.sin(0.5 * np.pi * sc)  # cos(theta), accurate near theta = pi/2
        return w.qp(a * sn) * cs * cs / sn

    return tanh_sinh_01(f, tol=tol)


# ---------------------------------------------------------------------------
# truncated rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on a certified truncation window.

    ``nodes`` and ``weights`` integrate dx over [-truncation_bound,
    truncation_bound]; weighted integrals are formed by evaluating the
    weighted integrand at the nodes.  ``tail_estimate`` bounds the relative
    mass of x^(2n) W^p outside the window.
    """

    nodes: np.ndarray
    weights: np.ndarray
    interval: Tuple[float, float]
    truncation_bound: float
    tail_estimate: float

    def integrate(self, f: Callable) -> float:
        return float(np.sum(self.weights * f(self.nodes)))

    def refined(self, factor: int = 2) -> "QuadratureRule":
        """Same window, `factor` times the panel count (for convergence checks)."""
        panels = (len(self.nodes) // _GL_ORDER) * factor
        nodes, weights = _composite_gl(-self.truncation_bound, self.truncation_bound, panels)
        return QuadratureRule(nodes=nodes, weights=weights, interval=self.interval,
                              truncation_bound=self.truncation_bound,
                              tail_estimate=self.tail_estimate)


_GL_ORDER = 16


def _cheb_edges(lo: float, hi: float, panels: int) -> np.ndarray:
    theta = np.linspace(0.0, np.pi, panels + 1)
    return 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(theta)


def _edges_zero_graded(lo: float, hi: float, panels: int) -> np.ndarray:
    """Panel edges clustered at the interval ends and geometrically at 0.

    Weights like exp(-|x|^alpha) with fractional alpha are non-smooth at the
    origin; geometric panels toward 0 restore spectral convergence there.
    """
    if not (lo < 0.0 < hi):
        return _cheb_edges(lo, hi, panels)

    def half_edges(length):
        cheb = _cheb_edges(0.0, length, max(panels // 2, 4))
        first = cheb[1]
        geo = first * 0.5 ** np.arange(1, 48)
        geo = geo[geo > 8e-16 * length]
        return np.sort(np.concatenate([[0.0], geo, cheb[1:]]))

    right = half_edges(hi)
    left = -half_edges(-lo)[::-1]
    return np.concatenate([left, right[1:]])


def _composite_gl(lo: float, hi: float, panels: int, order: int = _GL_ORDER):
    """Gauss-Legendre panels; edges graded at the ends and at the origin."""
    edges = _edges_zero_graded(lo, hi, panels)
    xg, wg = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def _log_envelope(w: WeightSpec, n: int, p: float):
    """h(x) = 2n log x - p Q(x) and its derivative, elementwise safe."""

    def h(x):
        with np.errstate(over="ignore", divide="ignore"):
            return 2.0 * n * np.log(x) - p * w.q(x)

    def hp(x):
        with np.errstate(over="ignore", divide="ignore"):
            return 2.0 * n / x - p * w.qp(x)

    return h, hp


def truncation_window(w: WeightSpec, n: int, p: float, tol: float = 1e-12) -> Tuple[float, float]:
    """Window half-length R and relative tail bound for x^(2n) W(x)^p.

    Beyond the peak x* of h(x) = 2n log x - p Q(x) the envelope decreases;
    once its slope is <= -1 the tail is bounded by exp(h(R)).  R is grown
    until that bound is below tol relative to the Laplace estimate of the
    integral at the peak.
    """
    if w.kind == "unweighted":
        return w.c, 0.0
    h, hp = _log_envelope(w, n, p)
    # peak  of the envelope: root of hp, bracketed by doubling
    lo = 1e-8
    hi = min(1.0, 0.5 * w.c) if np.isfinite(w.c) else 1.0
    for _ in range(400):
        if hp(hi) < 0.0:
            break
        hi = hi * 2.0 if not np.isfinite(w.c) else w.c - 0.5 * (w.c - hi)
    else:
        raise QuadratureError("envelope slope never became negative")
    x_star = brentq(hp, lo, hi, xtol=1e-14 * hi, rtol=8.9e-16)
    h_star = float(h(x_star))
    curv = 2.0 * n / x_star**2 + p * float(w.qpp(x_star))
    width = 1.0 / math.sqrt(max(curv, 1e-300))

    R = min(1.5 * x_star, 0.5 * (x_star + w.c)) if np.isfinite(w.c) else 1.5 * x_star
    for _ in range(400):
        slope_ok = float(-hp(R)) >= 1.0
        rel_tail = math.exp(min(float(h(R)) - h_star, 700.0)) / max(0.5 * width, 1e-300)
        if slope_ok and rel_tail < tol:
            return R, rel_tail
        R = R * 1.25 if not np.isfinite(w.c) else w.c - 0.5 * (w.c - R)
    raise QuadratureError("tail bound not met while growing the window")


def build_rule(w: WeightSpec, n: int, p: float, tol: float = 1e-12,
               max_nodes: int = 10**6) -> QuadratureRule:
    """Rule integrating x^k W(x)^p, k <= 2n, over the interval to rel. error < tol."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    R, rel_tail = truncation_window(w, n, p, tol)
    panels = max(40, n)
    if panels * _GL_ORDER > max_nodes:
        raise QuadratureError(f"node budget {max_nodes} exceeded")
    nodes, weights = _composite_gl(-R, R, panels)
    return QuadratureRule(nodes=nodes, weights=weights, interval=(-w.c, w.c),
                          truncation_bound=R, tail_estimate=rel_tail)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _poly_coeffs(P) -> np.ndarray:
    coeffs = getattr(P, "coeffs", P)
    return np.asarray(coeffs, dtype=float)


def _poly_eval(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyval(x, coeffs)


def sup_abs_on_interval(f: Callable, lo: float, hi: float, min_samples: int,
                        refine_iters: int = 80) -> Tuple[float, float]:
    """(max |f|, argmax) by dense Chebyshev sampling plus ternary refinement."""
    m = max(min_samples, 8)
    xx = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.linspace(0.0, np.pi, m))
    vals = np.abs(f(xx))
    inner = np.where((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:]))[0] + 1
    lo_b = xx[np.maximum(inner - 1, 0)]
    hi_b = xx[np.minimum(inner + 1, m - 1)]
    for _ in range(refine_iters):
        m1 = lo_b + (hi_b - lo_b) / 3.0
        m2 = hi_b - (hi_b - lo_b) / 3.0
        take = np.abs(f(m1)) < np.abs(f(m2))
        lo_b = np.where(take, m1, lo_b)
        hi_b = np.where(take, hi_b, m2)
    cand = np.concatenate([[xx[0], xx[-1]], 0.5 * (lo_b + hi_b)])
    fc = np.abs(f(cand))
    best = int(np.argmax(fc))
    return max(float(fc[best]), float(vals.max())), float(cand[best])


def _effective_bounds(w: WeightSpec, deg: int, p: float,
                      domain: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = domain
    if not (np.isfinite(lo) and np.isfinite(hi)):
        R, _ = truncation_window(w, max(deg, 1), max(p if np.isfinite(p) else 1.0, 0.5))
        lo, hi = max(float(lo), -R), min(float(hi), R)
    # evaluation stays strictly inside the open interval
    cap = w.c * (1.0 - 1e-12) if np.isfinite(w.c) else math.inf
    return max(float(lo), -cap), min(float(hi), cap)


def _segment_integral(g: Callable, lo: float, hi: float, tol: float) -> float:
    """Adaptive-doubling Gauss-Legendre on a kink-free segment."""
    prev = None
    for panels in (4, 8, 16, 32, 64, 128, 256):
        nodes, weights = _composite_gl(lo, hi, panels, order=12)
        total = float(np.sum(weights * g(nodes)))
        if prev is not None and abs(total - prev) <= tol * max(abs(total), 1e-300):
            return total
        prev = total
    return total


def p_segment_integral(f_abs: Callable, a: float, b: float, p: float,
                       sing_a: bool, sing_b: bool, tol: float = 1e-13) -> float:
    """Integral of f_abs(x)^p over [a, b] where f_abs vanishes linearly at
    the flagged endpoints.

    |f|^p behaves like |x - zero|^p there, so the singular factor is moved
    into a Gauss-Jacobi weight and only the smooth remainder is sampled.
    """
    from scipy.special import roots_jacobi

    al = p if sing_b else 0.0   # exponent on (b - x)
    be = p if sing_a else 0.0   # exponent on (x - a)
    L = b - a
    if L <= 0.0:
        return 0.0
    prev = None
    for M in (16, 32, 64, 128, 256):
        t, wj = roots_jacobi(M, al, be)
        x = a + (t + 1.0) * (0.5 * L)
        vals = f_abs(x)
        if sing_a:
            vals = vals / (x - a)
        if sing_b:
            vals = vals / (b - x)
        total = (0.5 * L) ** (al + be + 1.0) * float(np.sum(wj * vals ** p))
        if prev is not None and abs(total - prev) <= tol * max(abs(total), 1e-300):
            return total
        prev = total
    return total


def weighted_Lp_norm(P, w: WeightSpec, p: float, domain: Tuple[float, float],
                     rule: Optional[QuadratureRule] = None) -> float:
    """(integral over domain of |P W|^p)^(1/p); sup of |P W| for p = inf.

    For finite p the domain is split at the real zeros of P so every segment
    is smooth (|P W|^p has kinks only at zeros); each segment then converges
    spectrally.  Passing a rule skips the kink splitting and sums over its
    nodes -- exact for even integer p, approximate otherwise.
    """
    if not (p > 0.0 or math.isinf(p)):
        raise ValueError(f"p must be positive or inf, got {p}")
    lo, hi = domain
    if lo < -w.c or hi > w.c:
        raise ValueError(f"domain {domain} not contained in (-c, c)")
    coeffs = _poly_coeffs(P)
    deg = len(coeffs) - 1

    def PW(x):
        return _poly_eval(coeffs, x) * eval_W(w, np.asarray(x, dtype=float))

    if math.isinf(p):
        elo, ehi = _effective_bounds(w, deg, 1.0, domain)
        sup, _ = sup_abs_on_interval(PW, elo, ehi, 16 * (deg + 1))
        return sup

    if rule is not None:
        vals = np.abs(_poly_eval(coeffs, rule.nodes) * eval_W(w, rule.nodes))
        inside = (rule.nodes >= lo) & (rule.nodes <= hi)
        return float(np.sum(rule.weights[inside] * vals[inside] ** p)) ** (1.0 / p)

    elo, ehi = _effective_bounds(w, deg, p, domain)
    if not np.any(coeffs != 0.0):
        return 0.0
    # zeros of P inside the window, from sign changes on a dense grid
    m = max(32 * (deg + 1), 64)
    xx = np.linspace(elo, ehi, m)
    px = _poly_eval(coeffs, xx)
    breaks = [elo]
    sign_change = np.where(np.sign(px[:-1]) * np.sign(px[1:]) < 0)[0]
    for i in sign_change:
        breaks.append(brentq(lambda t: _poly_eval(coeffs, np.asarray([t]))[0],
                             xx[i], xx[i + 1], xtol=1e-15 * max(abs(ehi), 1.0)))
    breaks.append(ehi)
    breaks = sorted(set(breaks))

    def f_abs(x):
        return np.abs(PW(x))

    zero_set = set(breaks[1:-1])
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b > a:
            total += p_segment_integral(f_abs, a, b, p,
                                        sing_a=a in zero_set, sing_b=b in zero_set)
    return max(total, 0.0) ** (1.0 / p)
