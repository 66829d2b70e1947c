"""Corpus features, correlation analysis, and bootstrap significance testing.

Four data-dependent features are computed from training corpora (type-token
ratios and their squared relative distance, token-count ratio, vocabulary
overlap).  Externally computed features (morphological complexity, dependency
lengths, typological distances, ...) are ingested from CSV, since they come
from prior work rather than from this toolkit.

Correlations report Pearson's r and Spearman's rho with two-sided p-values
from the t approximation (t = r * sqrt((n-2)/(1-r^2)) on n-2 degrees of
freedom; Spearman uses the same form on rho, with average ranks for ties).
Significance is flagged at 0.05 and at the Bonferroni-corrected level
0.05 / m, where m counts the features actually tested in the run.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy import stats as sps

from .errors import ValidationError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# corpus features


def ttr(tokens: Iterable[str]) -> float:
    """Type-token ratio: distinct types over total tokens, in (0, 1]."""
    tokens = list(tokens)
    if not tokens:
        raise ValidationError("type-token ratio of an empty token sequence")
    return len(set(tokens)) / len(tokens)


def d_ttr(ttr_src: float, ttr_tgt: float) -> float:
    """Squared relative TTR distance: (1 - ttr_src/ttr_tgt)^2.

    Asymmetric by design; zero iff the two ratios are equal.
    """
    if ttr_tgt == 0:
        raise ValidationError("target type-token ratio is zero")
    return (1.0 - ttr_src / ttr_tgt) ** 2


def word_overlap_ratio(src_types: set, tgt_types: set) -> float:
    """Shared vocabulary size over the union (Jaccard), in [0, 1]."""
    if not src_types and not tgt_types:
        raise ValidationError("both vocabularies are empty")
    union = src_types | tgt_types
    return len(src_types & tgt_types) / len(union)


def word_number_ratio(src_tokens: int, tgt_tokens: int) -> float:
    """Source token count over target token count."""
    if tgt_tokens == 0:
        raise ValidationError("target token count is zero")
    return src_tokens / tgt_tokens


def compute_data_features(
    src_sentences: Iterable[Sequence[str]], tgt_sentences: Iterable[Sequence[str]]
) -> dict[str, float]:
    """The four training-data features for one direction."""
    src_tokens = [t for s in src_sentences for t in s]
    tgt_tokens = [t for s in tgt_sentences for t in s]
    ttr_src = ttr(src_tokens)
    ttr_tgt = ttr(tgt_tokens)
    return {
        "word_number_ratio": word_number_ratio(len(src_tokens), len(tgt_tokens)),
        "ttr_src": ttr_src,
        "ttr_tgt": ttr_tgt,
        "d_ttr": d_ttr(ttr_src, ttr_tgt),
        "word_overlap_ratio": word_overlap_ratio(set(src_tokens), set(tgt_tokens)),
    }


# ---------------------------------------------------------------------------
# feature tables


@dataclass
class FeatureTable:
    """Per-direction feature values; missing cells are simply absent.

    Rows are keyed by direction strings like "fi->en".
    """

    columns: list[str] = field(default_factory=list)
    rows: dict[str, dict[str, float]] = field(default_factory=dict)

    def set(self, direction: str, feature: str, value: float) -> None:
        if feature not in self.columns:
            self.columns.append(feature)
        self.rows.setdefault(direction, {})[feature] = value

    def get(self, direction: str, feature: str) -> float | None:
        return self.rows.get(direction, {}).get(feature)

    def merge(self, other: "FeatureTable") -> None:
        for direction, row in other.rows.items():
            for feature, value in row.items():
                self.set(direction, feature, value)


def read_feature_csv(path) -> FeatureTable:
    """CSV with header "direction,feature1,..."; empty cells mean missing."""
    table = FeatureTable()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty feature table") from None
        if not header or header[0].strip() != "direction":
            raise ValidationError(
                f"{path}: first column must be 'direction', got {header[:1]}"
            )
        features = [h.strip() for h in header[1:]]
        for lineno, row in enumerate(reader, start=2):
            if not row or not row[0].strip():
                continue
            direction = row[0].strip()
            for feature, cell in zip(features, row[1:]):
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    table.set(direction, feature, float(cell))
                except ValueError as exc:
                    raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    return table


def write_feature_csv(table: FeatureTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["direction"] + table.columns)
        for direction in sorted(table.rows):
            row = table.rows[direction]
            writer.writerow(
                [direction]
                + ["" if row.get(c) is None else repr(row[c]) for c in table.columns]
            )


# ---------------------------------------------------------------------------
# correlation


def _t_pvalue(r: float, n: int) -> float:
    """Two-sided p for a correlation coefficient via the t approximation."""
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return 2.0 * float(sps.t.sf(abs(t), n - 2))


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson's r and its two-sided p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    n = x.size
    if n < 3:
        raise ValidationError(f"need at least 3 points, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ValidationError("constant vector has no defined correlation")
    r = float((dx * dy).sum()) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    return r, _t_pvalue(r, n)


def spearman(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Spearman's rho (average ranks for ties) and its t-approximation p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    rx = sps.rankdata(x, method="average")
    ry = sps.rankdata(y, method="average")
    return pearson(rx, ry)


def bonferroni_threshold(alpha: float, m: int) -> float:
    """The per-test level alpha / m for m hypotheses."""
    if m < 1:
        raise ValidationError(f"number of hypotheses must be >= 1, got {m}")
    return alpha / m


@dataclass(frozen=True)
class CorrelationResult:
    """One feature's correlation against the difficulty metric.

    The significance flags consider a feature significant if either test's
    p-value clears the level (the underlying table flags per coefficient;
    this rolls both up per feature).
    """

    feature: str
    n: int
    pearson_r: float
    pearson_p: float
    spearman_rho: float
    spearman_p: float
    significant_05: bool
    significant_bonferroni: bool

    def __post_init__(self):
        if self.significant_bonferroni and not self.significant_05:
            raise ValidationError(
                f"{self.feature}: bonferroni flag implies the 0.05 flag"
            )


def correlate_features(
    xmi_by_direction: Mapping[str, float],
    features: FeatureTable,
    direction_filter: str = "both",
    pivot: str | None = None,
    alpha: float = 0.05,
) -> list[CorrelationResult]:
    """Correlate every feature column against XMI over the selected rows.

    direction_filter: "both" pools every direction; "into_pivot" keeps rows
    whose target is the pivot; "from_pivot" keeps rows whose source is the
    pivot (pivot required for either).  Missing feature values are dropped
    pairwise per feature; features with fewer than 3 overlapping rows or a
    constant vector are skipped with a warning.  The Bonferroni level is
    alpha / m with m the number of features that actually produced a result.
    """
    if direction_filter not in ("both", "into_pivot", "from_pivot"):
        raise ValidationError(f"unknown direction filter {direction_filter!r}")
    if direction_filter != "both" and not pivot:
        raise ValidationError("direction filter needs a pivot language")

    def keep(direction: str) -> bool:
        if "->" not in direction:
            raise ValidationError(f"malformed direction key {direction!r}")
        src, tgt = direction.split("->", 1)
        if direction_filter == "into_pivot":
            return tgt == pivot
        if direction_filter == "from_pivot":
            return src == pivot
        return True

    selected = {d: v for d, v in xmi_by_direction.items() if keep(d)}

    raw: list[tuple[str, int, float, float, float, float]] = []
    for feature in features.columns:
        xs, ys = [], []
        for direction, value in sorted(selected.items()):
            fv = features.get(direction, feature)
            if fv is None:
                continue
            xs.append(fv)
            ys.append(value)
        if len(xs) < 3:
            logger.warning(
                "feature %s: only %d overlapping rows, skipped", feature, len(xs)
            )
            continue
        try:
            r, p = pearson(xs, ys)
            rho, p_s = spearman(xs, ys)
        except ValidationError as exc:
            logger.warning("feature %s skipped: %s", feature, exc)
            continue
        raw.append((feature, len(xs), r, p, rho, p_s))

    m = len(raw)
    if m == 0:
        return []
    bonf = bonferroni_threshold(alpha, m)
    results = []
    for feature, n, r, p, rho, p_s in raw:
        p_min = min(p, p_s)
        results.append(
            CorrelationResult(
                feature=feature,
                n=n,
                pearson_r=r,
                pearson_p=p,
                spearman_rho=rho,
                spearman_p=p_s,
                significant_05=p_min < alpha,
                significant_bonferroni=p_min < bonf,
            )
        )
    return results


def correlations_to_tsv(
    results: Sequence[CorrelationResult],
    parenthesized_p: bool = False,
    extra_meta: dict | None = None,
) -> str:
    """TSV rendering; optionally format p-values in parentheses next to the
    coefficients (the compact table style)."""
    lines = [f"# {k}: {v}" for k, v in (extra_meta or {}).items()]
    lines.append(f"# features_tested: {len(results)}")
    if parenthesized_p:
        lines.append("\t".join(["feature", "n", "pearson", "spearman", "sig05", "bonferroni"]))
        for c in results:
            lines.append(
                "\t".join(
                    [
                        c.feature,
                        str(c.n),
                        f"{c.pearson_r:.4f} ({c.pearson_p:.4f})",
                        f"{c.spearman_rho:.4f} ({c.spearman_p:.4f})",
                        str(int(c.significant_05)),
                        str(int(c.significant_bonferroni)),
                    ]
                )
            )
    else:
        lines.append(
            "\t".join(
                [
                    "feature", "n", "pearson_r", "pearson_p",
                    "spearman_rho", "spearman_p", "sig05", "bonferroni",
                ]
            )
        )
        for c in results:
            lines.append(
                "\t".join(
                    [
                        c.feature,
                        str(c.n),
                        repr(c.pearson_r),
                        repr(c.pearson_p),
                        repr(c.spearman_rho),
                        repr(c.spearman_p),
                        str(int(c.significant_05)),
                        str(int(c.significant_bonferroni)),
                    ]
                )
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# bootstrap


@dataclass(frozen=True)
class BootstrapResult:
    point_estimate: float
    replicate_mean: float
    ci_low: float
    ci_high: float
    n_replicates: int

    def __post_init__(self):
        if not (self.ci_low <= self.replicate_mean <= self.ci_high):
            raise ValidationError(
                f"replicate mean {self.replicate_mean} outside CI "
                f"[{self.ci_low}, {self.ci_high}]"
            )


def bootstrap_test(
    per_sentence_stats: Sequence,
    metric: Callable[[list], float],
    n_replicates: int = 1000,
    seed: int = 0,
) -> BootstrapResult:
    """Percentile bootstrap over sentences.

    Each replicate resamples sentence indices with replacement, recomputes the
    metric from the resampled sufficient statistics, and the 95% interval is
    read off the order statistics of the replicate list.  Replicate i draws
    from its own generator seeded by (seed, i), so results do not depend on
    how replicates are scheduled.
    """
    stats = list(per_sentence_stats)
    n = len(stats)
    if n < 2:
        raise ValidationError(f"bootstrap needs at least 2 sentences, got {n}")
    if n_replicates < 1:
        raise ValidationError(f"n_replicates must be >= 1, got {n_replicates}")

    point = float(metric(stats))
    replicates = np.empty(n_replicates)
    for i in range(n_replicates):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, i])))
        idx = rng.integers(0, n, size=n)
        replicates[i] = metric([stats[j] for j in idx])

    ordered = np.sort(replicates)
    k_low = math.floor(0.025 * (n_replicates - 1))
    k_high = math.ceil(0.975 * (n_replicates - 1))
    return BootstrapResult(
        point_estimate=point,
        replicate_mean=float(replicates.mean()),
        ci_low=float(ordered[k_low]),
        ci_high=float(ordered[k_high]),
        n_replicates=n_replicates,
    )
