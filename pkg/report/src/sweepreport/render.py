"""Rendering: one figure per (weight, p, N) family plus a markdown report.

The input is the sweep CSV emitted by the solver suite; this tool only reads
that file format and never recomputes constants.  Gap entries are copied
into the markdown verbatim so they match the CSV to printed precision.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Dict, List, Tuple

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sweep-report"  # deterministic SVG ids

import matplotlib.pyplot as plt

EXPECTED_HEADER = "weight,p,N,n,a_n,b_n,M,M_star,E_ref_lo,E_ref_hi,gap,certified,status"

FIGSIZE = (9.0, 3.6)
DPI = 110


class RenderError(ValueError):
    """Malformed input: schema mismatch or an empty family."""


@dataclass(frozen=True)
class SweepRecord:
    """One parsed CSV row; raw text fields are kept for verbatim reporting."""

    weight: str
    p: float
    N: int
    n: int
    a_n: float | None
    b_n: float | None
    M: float | None
    M_star: float | None
    E_ref_lo: float | None
    E_ref_hi: float | None
    gap: float | None
    gap_text: str
    certified: str
    status: str

    def family(self) -> Tuple[str, float, int]:
        return (self.weight, self.p, self.N)


@dataclass(frozen=True)
class PlotJob:
    input_csv: str
    output_dir: str
    svg: bool = False


def _parse_float(text: str) -> float | None:
    return None if text == "" else float(text)


def parse_sweep_csv(text: str) -> List[SweepRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != EXPECTED_HEADER:
        raise RenderError(
            f"schema mismatch: expected header {EXPECTED_HEADER!r}, "
            f"got {lines[0] if lines else '<empty file>'!r}")
    ncol = len(EXPECTED_HEADER.split(","))
    records = []
    for ln in lines[1:]:
        parts = ln.split(",", ncol - 1)
        if len(parts) != ncol:
            raise RenderError(f"bad row (expected {ncol} fields): {ln!r}")
        (w, p, N, n, a, b, M, Ms, lo, hi, gap, cert, status) = parts
        records.append(SweepRecord(
            weight=w,
            p=math.inf if p == "inf" else float(p),
            N=int(N), n=int(n),
            a_n=_parse_float(a), b_n=_parse_float(b),
            M=_parse_float(M), M_star=_parse_float(Ms),
            E_ref_lo=_parse_float(lo), E_ref_hi=_parse_float(hi),
            gap=_parse_float(gap), gap_text=gap,
            certified=cert, status=status))
    if not records:
        raise RenderError("no data rows")
    return records


def _family_slug(fam: Tuple[str, float, int]) -> str:
    w, p, N = fam
    ptxt = "inf" if math.isinf(p) else format(p, "g")
    return f"{w.replace(':', '-')}_p{ptxt}_N{N}"


def _family_label(fam: Tuple[str, float, int]) -> str:
    w, p, N = fam
    ptxt = "inf" if math.isinf(p) else format(p, "g")
    return f"{w}, p={ptxt}, N={N}"


def _plot_family(fam, rows, path: str) -> None:
    ns = [r.n for r in rows]
    M = [r.M for r in rows]
    Ms = [r.M_star for r in rows]
    lo, hi = rows[0].E_ref_lo, rows[0].E_ref_hi
    gaps = [r.gap for r in rows]

    fig, axes = plt.subplots(1, 2, figsize=FIGSIZE, dpi=DPI)
    ax = axes[0]
    ax.plot(ns, M, "o-", label="M (full interval)")
    ax.plot(ns, Ms, "s--", label="M* (restricted)")
    if lo is not None and hi is not None:
        if lo == hi:
            ax.axhline(lo, color="k", lw=1.0, label="limit constant")
        else:
            ax.axhspan(lo, hi, color="0.8", label="limit bounds")
    ax.set_xscale("log")
    ax.set_xlabel("degree n")
    ax.set_ylabel("constant")
    ax.set_title(_family_label(fam), fontsize=10)
    ax.legend(fontsize=8)

    ax = axes[1]
    if all(g is not None for g in gaps):
        positive = [(n, g) for n, g in zip(ns, gaps) if g > 0.0]
        if positive:
            ax.loglog([n for n, _ in positive], [g for _, g in positive], "o-")
        ax.set_xlabel("degree n")
        ax.set_ylabel("relative gap")
        ax.set_title("distance to the limit constant", fontsize=10)
    else:
        ax.axis("off")
        ax.text(0.5, 0.5, "no exact limit constant\n(gap column blank)",
                ha="center", va="center", fontsize=9)
    fig.tight_layout()
    if path.endswith(".svg"):
        metadata = {"Creator": "sweep-report", "Date": None}  # no timestamp
    else:
        metadata = {"Software": "sweep-report"}
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def _markdown(families: Dict, figure_names: Dict) -> str:
    out = ["# Convergence sweep report", ""]
    out.append("## Final gaps")
    out.append("")
    out.append("| family | n | M* | gap |")
    out.append("|---|---|---|---|")
    for fam in sorted(families, key=_family_slug):
        last = families[fam][-1]
        gap = last.gap_text if last.gap_text else "(no exact reference)"
        out.append(f"| {_family_label(fam)} | {last.n} | {last.M_star} | {gap} |")
    out.append("")
    for fam in sorted(families, key=_family_slug):
        rows = families[fam]
        out.append(f"## {_family_label(fam)}")
        out.append("")
        out.append(f"![{_family_slug(fam)}]({figure_names[fam]})")
        out.append("")
        out.append("| n | a_n | b_n | M | M* | gap | status |")
        out.append("|---|---|---|---|---|---|---|")
        for r in rows:
            gap = r.gap_text
            out.append(f"| {r.n} | {r.a_n} | {r.b_n} | {r.M} | {r.M_star} "
                       f"| {gap} | {r.status} |")
        out.append("")
    return "\n".join(out)


def render(job: PlotJob) -> Tuple[List[str], str]:
    """Render every family of the CSV; returns (image paths, markdown path)."""
    with open(job.input_csv) as fh:
        records = parse_sweep_csv(fh.read())
    families: Dict = {}
    for r in records:
        families.setdefault(r.family(), []).append(r)
    for fam, rows in families.items():
        if not rows:
            raise RenderError(f"empty family {fam}")
        rows.sort(key=lambda r: r.n)
    os.makedirs(job.output_dir, exist_ok=True)
    ext = "svg" if job.svg else "png"
    image_paths = []
    figure_names = {}
    for fam in sorted(families, key=_family_slug):
        name = f"{_family_slug(fam)}.{ext}"
        path = os.path.join(job.output_dir, name)
        _plot_family(fam, families[fam], path)
        image_paths.append(path)
        figure_names[fam] = name
    md_path = os.path.join(job.output_dir, "report.md")
    with open(md_path, "w") as fh:
        fh.write(_markdown(families, figure_names))
    return image_paths, md_path
