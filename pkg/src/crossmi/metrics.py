"""Cross-entropy, cross-mutual information, and BLEU.

Cross-entropies are bits per sentence: minus the mean total per-sentence log2
probability of a score set.  XMI subtracts the conditional (translation)
cross-entropy from the unconditional (language-model) cross-entropy of the
same target side; positive XMI means the source made the target easier to
predict.

BLEU is the corpus-level 1-4-gram precision metric with clipped counts, a
brevity penalty, and exponential smoothing for zero-match orders, computed
over 13a-tokenized text by default (signature "case.mixed+s.exp+tok.13a").
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import tokenize_13a
from .errors import ValidationError
from .scoring import ScoreSet

NGRAM_ORDER = 4


@dataclass(frozen=True)
class CrossEntropy:
    """bits_per_sentence is the canonical view.  bits_per_unit divides by the
    model's own generated-unit count instead; it depends on the segmentation,
    so it is not comparable across models or tokenizations (non-canonical)."""

    bits_per_sentence: float
    n_sentences: int
    bits_per_unit: float


def cross_entropy(scores: ScoreSet) -> CrossEntropy:
    """-(1/N) * sum of per-sentence log2 probabilities.

    The sum is an exact (fsum) reduction over records sorted by sentence id,
    so the result does not depend on record order or on how a caller
    partitioned the scoring work.
    """
    if not scores.records:
        raise ValidationError("cannot take cross-entropy of an empty score set")
    ordered = sorted(scores.records, key=lambda r: r.sentence_id)
    total = math.fsum(r.logprob_bits for r in ordered)
    n_units = sum(r.n_units for r in ordered)
    return CrossEntropy(
        bits_per_sentence=-total / len(ordered),
        n_sentences=len(ordered),
        bits_per_unit=-total / n_units,
    )


@dataclass(frozen=True)
class XmiResult:
    """The information the source contributed, with its two components.

    xmi is bits per sentence (canonical).  xmi_per_unit divides the same gap
    by the conditional model's generated-unit count; being tied to one
    model's segmentation, it is a non-canonical convenience view.
    """

    h_lm: float
    h_mt: float
    xmi: float
    n_sentences: int
    xmi_per_unit: float


def xmi(lm: ScoreSet, mt: ScoreSet) -> XmiResult:
    """H_lm - H_mt over score sets covering the same sentences.

    Both sets must score exactly the same sentence ids on the same target
    side; they may use different unit inventories (totals per sentence are
    tokenization-independent).
    """
    lm_ids = {r.sentence_id for r in lm.records}
    mt_ids = {r.sentence_id for r in mt.records}
    if lm_ids != mt_ids:
        only_lm = sorted(lm_ids - mt_ids)[:5]
        only_mt = sorted(mt_ids - lm_ids)[:5]
        raise ValidationError(
            f"score sets cover different sentences: only in LM set {only_lm}, "
            f"only in MT set {only_mt}"
        )
    if lm.direction[1] != mt.direction[1]:
        raise ValidationError(
            f"target side mismatch: {lm.direction[1]!r} vs {mt.direction[1]!r}"
        )
    h_lm = cross_entropy(lm)
    h_mt = cross_entropy(mt)
    gap = h_lm.bits_per_sentence - h_mt.bits_per_sentence
    mt_units = sum(r.n_units for r in mt.records)
    return XmiResult(
        h_lm=h_lm.bits_per_sentence,
        h_mt=h_mt.bits_per_sentence,
        xmi=gap,
        n_sentences=h_lm.n_sentences,
        xmi_per_unit=gap * h_lm.n_sentences / mt_units,
    )


@dataclass(frozen=True)
class MetricReport:
    """One evaluated direction: both cross-entropies, XMI, and BLEU.

    xmi is always h_lm - h_mt by construction.  bleu is None when no candidate
    translations were supplied.
    """

    src_lang: str
    tgt_lang: str
    h_lm: float
    h_mt: float
    xmi: float
    bleu: float | None
    n_sentences: int

    @classmethod
    def build(cls, src_lang, tgt_lang, result: XmiResult, bleu: float | None):
        return cls(
            src_lang=src_lang,
            tgt_lang=tgt_lang,
            h_lm=result.h_lm,
            h_mt=result.h_mt,
            xmi=result.xmi,
            bleu=bleu,
            n_sentences=result.n_sentences,
        )

    @property
    def direction(self) -> str:
        return f"{self.src_lang}->{self.tgt_lang}"


# ---------------------------------------------------------------------------
# BLEU


@dataclass(frozen=True)
class BleuConfig:
    case: str = "mixed"  # "mixed" (as-is) or "lower"
    tokenizer: str = "13a"  # "13a" or "none" (split on whitespace)
    smoothing: str = "exp"  # "exp" or "none"

    def __post_init__(self):
        if self.case not in ("mixed", "lower"):
            raise ValidationError(f"unknown case handling {self.case!r}")
        if self.tokenizer not in ("13a", "none"):
            raise ValidationError(f"unknown tokenizer {self.tokenizer!r}")
        if self.smoothing not in ("exp", "none"):
            raise ValidationError(f"unknown smoothing {self.smoothing!r}")

    def signature(self) -> str:
        return f"case.{self.case}+s.{self.smoothing}+tok.{self.tokenizer}"


@dataclass(frozen=True)
class BleuStats:
    """Per-sentence sufficient statistics: clipped matches, totals, lengths."""

    correct: tuple[int, int, int, int]
    total: tuple[int, int, int, int]
    sys_len: int
    ref_len: int


def _tokens(sentence, config: BleuConfig) -> list[str]:
    if isinstance(sentence, str):
        text = sentence.lower() if config.case == "lower" else sentence
        return tokenize_13a(text) if config.tokenizer == "13a" else text.split()
    toks = [str(t) for t in sentence]
    if config.case == "lower":
        toks = [t.lower() for t in toks]
    return toks


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_sentence_stats(
    candidates: Sequence, references: Sequence, config: BleuConfig = BleuConfig()
) -> list[BleuStats]:
    """Clipped n-gram statistics per sentence pair.

    Inputs are raw strings (tokenized per config) or pre-tokenized sequences,
    one reference per candidate (with multiple references the effective
    reference length would be the closest one; single-reference makes the
    sentence's own reference length effective).  These statistics are the
    resampling unit for bootstrap significance testing: summing them over any
    multiset of sentences and finishing with `bleu_from_stats` reproduces
    corpus BLEU on that multiset.
    """
    if len(candidates) != len(references):
        raise ValidationError(
            f"candidate/reference count mismatch: {len(candidates)} vs {len(references)}"
        )
    if not candidates:
        raise ValidationError("empty candidate corpus")
    stats = []
    for cand, ref in zip(candidates, references):
        c_toks = _tokens(cand, config)
        r_toks = _tokens(ref, config)
        correct = []
        total = []
        for n in range(1, NGRAM_ORDER + 1):
            c_ngrams = _ngrams(c_toks, n)
            r_ngrams = _ngrams(r_toks, n)
            correct.append(sum(min(c, r_ngrams[g]) for g, c in c_ngrams.items()))
            total.append(max(len(c_toks) - n + 1, 0))
        stats.append(
            BleuStats(
                correct=tuple(correct),
                total=tuple(total),
                sys_len=len(c_toks),
                ref_len=len(r_toks),
            )
        )
    return stats


def bleu_from_stats(stats: Iterable[BleuStats], config: BleuConfig = BleuConfig()) -> float:
    """Finish BLEU from summed sufficient statistics.

    Corpus totals are summed before precisions.  A zero total at any order
    means the corpus cannot support 4-gram BLEU (all candidates shorter than
    four tokens); such degenerate corpora are rejected.  Zero-match orders
    receive exponential smoothing: the k-th zero order gets precision
    1 / (2^k * total_n).
    """
    stats = list(stats)
    if not stats:
        raise ValidationError("empty candidate corpus")
    correct = [0] * NGRAM_ORDER
    total = [0] * NGRAM_ORDER
    sys_len = 0
    ref_len = 0
    for s in stats:
        for i in range(NGRAM_ORDER):
            correct[i] += s.correct[i]
            total[i] += s.total[i]
        sys_len += s.sys_len
        ref_len += s.ref_len
    if 0 in total:
        order = total.index(0) + 1
        raise ValidationError(
            f"degenerate corpus: no candidate {order}-grams at corpus level"
        )

    precisions = []
    smooth = 1.0
    for n in range(NGRAM_ORDER):
        if correct[n] == 0:
            if config.smoothing == "exp":
                smooth *= 2.0
                precisions.append(1.0 / (smooth * total[n]))
            else:
                return 0.0
        else:
            precisions.append(correct[n] / total[n])

    brevity_penalty = 1.0
    if sys_len < ref_len:
        brevity_penalty = math.exp(1.0 - ref_len / sys_len)
    geo_mean = math.exp(sum(math.log(p) for p in precisions) / NGRAM_ORDER)
    return 100.0 * brevity_penalty * geo_mean


def bleu(
    candidates: Sequence, references: Sequence, config: BleuConfig = BleuConfig()
) -> float:
    """Corpus BLEU (0-100) of candidate translations against references."""
    return bleu_from_stats(bleu_sentence_stats(candidates, references, config), config)


# ---------------------------------------------------------------------------
# report serialization

_REPORT_COLUMNS = ["direction", "h_lm", "h_mt", "xmi", "bleu", "n_sentences"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def reports_to_tsv(
    reports: Sequence[MetricReport], bleu_config: BleuConfig | None = None,
    extra_meta: dict | None = None,
) -> str:
    """Table-style TSV, one row per direction, with provenance metadata lines."""
    lines = []
    if bleu_config is not None:
        lines.append(f"# bleu_signature: {bleu_config.signature()}")
    for key, value in (extra_meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append("\t".join(_REPORT_COLUMNS))
    for r in reports:
        lines.append(
            "\t".join(
                [
                    r.direction,
                    _fmt(r.h_lm),
                    _fmt(r.h_mt),
                    _fmt(r.xmi),
                    _fmt(r.bleu),
                    _fmt(r.n_sentences),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def reports_to_json(reports: Sequence[MetricReport]) -> list[dict]:
    return [
        {
            "direction": r.direction,
            "src_lang": r.src_lang,
            "tgt_lang": r.tgt_lang,
            "h_lm": r.h_lm,
            "h_mt": r.h_mt,
            "xmi": r.xmi,
            "bleu": r.bleu,
            "n_sentences": r.n_sentences,
        }
        for r in reports
    ]
