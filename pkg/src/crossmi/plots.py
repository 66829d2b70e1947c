"""Self-contained SVG plot documents: labeled scatters and stacked bars.

Figures render to SVG text with fonts kept as text elements, a fixed hash
salt, and no embedded date, so the documents are deterministic and easy to
inspect.  Each renderer has a TSV twin carrying the underlying numbers.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import ValidationError

_SVG_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "crossmi",
}


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()


def render_scatter(
    xs: Sequence[float],
    ys: Sequence[float],
    labels: Sequence[str],
    xlabel: str = "",
    ylabel: str = "",
    title: str = "",
) -> str:
    """Scatter plot with one text label per point, as an SVG document."""
    if not (len(xs) == len(ys) == len(labels)):
        raise ValidationError(
            f"length mismatch: {len(xs)} xs, {len(ys)} ys, {len(labels)} labels"
        )
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        if xs:
            ax.scatter(xs, ys, s=28, color="#33558a", zorder=3)
            for x, y, label in zip(xs, ys, labels):
                ax.annotate(
                    str(label), (x, y), xytext=(4, 4),
                    textcoords="offset points", fontsize=8,
                )
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, linewidth=0.4, alpha=0.5)
        return _to_svg(fig)


def scatter_tsv(
    xs: Sequence[float], ys: Sequence[float], labels: Sequence[str],
    xname: str = "x", yname: str = "y",
) -> str:
    lines = ["\t".join(["label", xname, yname])]
    for x, y, label in zip(xs, ys, labels):
        lines.append(f"{label}\t{x!r}\t{y!r}")
    return "\n".join(lines) + "\n"


def render_stack(
    h_mt: Sequence[float],
    xmi: Sequence[float],
    labels: Sequence[str],
    ylabel: str = "bits per sentence",
    title: str = "",
) -> str:
    """Stacked bars per direction: conditional cross-entropy below, XMI above,
    so each bar totals the language-model cross-entropy."""
    if not (len(h_mt) == len(xmi) == len(labels)):
        raise ValidationError(
            f"length mismatch: {len(h_mt)} h_mt, {len(xmi)} xmi, {len(labels)} labels"
        )
    for label, lo, hi in zip(labels, h_mt, xmi):
        if lo < 0 or hi < 0:
            raise ValidationError(f"negative bar segment for {label}: {lo}, {hi}")
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(max(6.4, 0.42 * len(labels) + 1.5), 4.8))
        xs = range(len(labels))
        if labels:
            ax.bar(xs, h_mt, color="#33558a", label="conditional cross-entropy")
            ax.bar(xs, xmi, bottom=h_mt, color="#d08a2e", label="XMI")
            ax.set_xticks(list(xs))
            ax.set_xticklabels(labels, rotation=60, fontsize=8)
            ax.legend(fontsize=8)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        return _to_svg(fig)


def stack_tsv(
    h_mt: Sequence[float], xmi: Sequence[float], labels: Sequence[str]
) -> str:
    lines = ["\t".join(["label", "h_mt", "xmi", "h_lm"])]
    for label, lo, hi in zip(labels, h_mt, xmi):
        lines.append(f"{label}\t{lo!r}\t{hi!r}\t{lo + hi!r}")
    return "\n".join(lines) + "\n"
