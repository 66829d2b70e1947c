"""Per-sentence log2 probabilities from built-in scorers and score files.

Two desk-scale scorers share one contract: an n-gram language model (MLE or
interpolated Kneser-Ney) and a conditional translation surrogate that mixes
the n-gram model with a Model-1-style lexical distribution over the source
bag.  Everything reports total log2 probability per sentence (EOS is a scored
unit) so that cross-entropies are in bits per sentence.

Score files carry true negative log-likelihoods: if an external scorer trains
with label smoothing, the smoothed objective must not leak into the file.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError, ZeroProbabilityError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
NULL = "<null>"  # empty source word of the lexical table

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class ScoreRecord:
    """Total log2 probability and generated-unit count for one sentence."""

    sentence_id: int
    n_units: int
    logprob_bits: float

    def __post_init__(self):
        if self.n_units < 1:
            raise ValidationError(
                f"sentence {self.sentence_id}: n_units must be >= 1, got {self.n_units}"
            )
        if not (self.logprob_bits <= 0.0):  # also rejects NaN
            raise ValidationError(
                f"sentence {self.sentence_id}: logprob_bits must be <= 0, "
                f"got {self.logprob_bits}"
            )


@dataclass(frozen=True)
class ScoreSet:
    """All records of one model over one corpus side.

    `direction` is (src_lang, tgt_lang) for translation models and
    (None, tgt_lang) for language models.
    """

    model_tag: str
    direction: tuple[str | None, str]
    records: tuple[ScoreRecord, ...]
    vocab_hash: str = ""

    def __post_init__(self):
        ids = [r.sentence_id for r in self.records]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate sentence ids in score set: {dupes[:5]}")

    def __len__(self) -> int:
        return len(self.records)

    def by_id(self) -> dict[int, ScoreRecord]:
        return {r.sentence_id: r for r in self.records}


# ---------------------------------------------------------------------------
# n-gram language model


class NgramLm:
    """Order-n model over subword units plus EOS.

    Smoothing is either "mle" (raw relative frequencies; unseen events raise
    ZeroProbabilityError when scored) or "kn" (interpolated Kneser-Ney with
    recursively adjusted continuation counts, grounded in a uniform
    distribution over the predicted vocabulary, so every event has positive
    probability).  For every context the probabilities over vocab + {EOS} sum
    to one.
    """

    def __init__(self, order: int, smoothing: str, sentences: Iterable[Sequence[str]]):
        if order < 1:
            raise ValidationError(f"order must be >= 1, got {order}")
        if smoothing not in ("mle", "kn"):
            raise ValidationError(f"unknown smoothing {smoothing!r}")
        self.order = order
        self.smoothing = smoothing

        raw: list[Counter] = [Counter() for _ in range(order + 1)]  # raw[k]: k-grams
        types: set[str] = set()
        n_sentences = 0
        for sentence in sentences:
            n_sentences += 1
            types.update(sentence)
            padded = (BOS,) * (order - 1) + tuple(sentence) + (EOS,)
            # grams ending at predicted positions only
            for pos in range(order - 1, len(padded)):
                for k in range(1, order + 1):
                    raw[k][padded[pos - k + 1 : pos + 1]] += 1
        if n_sentences == 0:
            raise ValidationError("LM training corpus is empty")

        self.types = types
        self.predicted = sorted(types) + [UNK, EOS]
        self._n_pred = len(self.predicted)

        # counts[k]: highest order raw, lower orders adjusted (continuation)
        counts: list[dict] = [dict() for _ in range(order + 1)]
        counts[order] = dict(raw[order])
        for k in range(order - 1, 0, -1):
            adj: dict = defaultdict(int)
            for gram in counts[k + 1]:
                adj[gram[1:]] += 1
            # grams that start the sentence cannot be left-extended: keep raw
            for gram, c in raw[k].items():
                if gram[0] == BOS:
                    adj[gram] = c
            counts[k] = dict(adj)
        self._counts = counts

        self._ctx_total: list[dict] = [dict() for _ in range(order + 1)]
        self._ctx_types: list[dict] = [dict() for _ in range(order + 1)]
        for k in range(1, order + 1):
            totals: dict = defaultdict(int)
            ntypes: dict = defaultdict(int)
            for gram, c in counts[k].items():
                totals[gram[:-1]] += c
                ntypes[gram[:-1]] += 1
            self._ctx_total[k] = dict(totals)
            self._ctx_types[k] = dict(ntypes)

        self._discount = [0.0] * (order + 1)
        for k in range(1, order + 1):
            histogram = Counter(counts[k].values())
            n1, n2 = histogram.get(1, 0), histogram.get(2, 0)
            d = n1 / (n1 + 2.0 * n2) if (n1 + 2 * n2) > 0 else 0.0
            self._discount[k] = d if d > 0.0 else 0.75

    @property
    def vocab(self) -> set[str]:
        """Predicted symbols except EOS (training types plus UNK)."""
        return self.types | {UNK}

    def vocab_hash(self) -> str:
        payload = "\n".join(self.predicted).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    def map_unit(self, unit: str) -> str:
        return unit if (unit in self.types or unit == EOS) else UNK

    def prob(self, unit: str, context: Sequence[str]) -> float:
        """p(unit | context); context is the raw preceding units (any length)."""
        unit = self.map_unit(unit)
        ctx = tuple(BOS if u == BOS else self.map_unit(u) for u in context)
        ctx = ((BOS,) * (self.order - 1) + ctx)[-(self.order - 1) :] if self.order > 1 else ()
        if self.smoothing == "mle":
            total = self._ctx_total[self.order].get(ctx, 0)
            if total == 0:
                raise ZeroProbabilityError(unit, ctx)
            return self._counts[self.order].get(ctx + (unit,), 0) / total
        return self._kn(self.order, ctx, unit)

    def _kn(self, k: int, ctx: tuple, w: str) -> float:
        if k == 0:
            return 1.0 / self._n_pred
        total = self._ctx_total[k].get(ctx, 0)
        if total == 0:
            return self._kn(k - 1, ctx[1:], w)
        d = self._discount[k]
        c = self._counts[k].get(ctx + (w,), 0)
        n_types = self._ctx_types[k][ctx]
        lower = self._kn(k - 1, ctx[1:], w)
        return max(c - d, 0.0) / total + d * n_types / total * lower


def train_ngram_lm(
    sentences: Iterable[Sequence[str]], order: int = 3, smoothing: str = "kn"
) -> NgramLm:
    """Count n-grams over `sentences` (sequences of units) and build the model."""
    return NgramLm(order=order, smoothing=smoothing, sentences=sentences)


def lm_logprob(lm: NgramLm, sentence: Sequence[str]) -> tuple[float, int]:
    """Total log2 probability of `sentence` plus EOS, and the unit count.

    n_units = len(sentence) + 1: EOS is scored like any other unit so that the
    model normalizes over all sentences.
    """
    context: tuple[str, ...] = (BOS,) * (lm.order - 1)
    total = 0.0
    for unit in tuple(sentence) + (EOS,):
        p = lm.prob(unit, context)
        if p <= 0.0:
            raise ZeroProbabilityError(unit, context)
        total += math.log2(p)
        if lm.order > 1:
            context = context[1:] + (lm.map_unit(unit),)
    return total, len(sentence) + 1


# ---------------------------------------------------------------------------
# lexical table (Model-1 style, trained with EM) and the mixture scorer


class LexicalTable:
    """t(target_word | source_word), with a NULL source word in every bag."""

    def __init__(self, table: dict[str, dict[str, float]], train_loglik: list[float]):
        self.table = table
        self.train_loglik = train_loglik
        self.target_vocab: set[str] = set()
        for dist in table.values():
            self.target_vocab.update(dist)

    def dist(self, source_word: str) -> dict[str, float] | None:
        """The word's translation distribution, or None for unseen sources."""
        return self.table.get(source_word)


def train_lex_table(
    pairs: Iterable[tuple[Sequence[str], Sequence[str]]], iterations: int = 5
) -> LexicalTable:
    """EM for the lexical table over (source tokens, target tokens) pairs.

    Initialization is uniform over each source word's co-occurring target
    types; NULL co-occurs with everything.  The training log-likelihood of
    each iteration is recorded and is non-decreasing (EM guarantee, asserted
    in the test suite rather than here).
    """
    if iterations < 1:
        raise ValidationError(f"iterations must be >= 1, got {iterations}")
    pair_list = [(tuple(s), tuple(t)) for s, t in pairs]
    pair_list = [(s, t) for s, t in pair_list if t]
    if not pair_list:
        raise ValidationError("lexical table training corpus is empty")

    cooc: dict[str, set[str]] = defaultdict(set)
    for src, tgt in pair_list:
        for sw in tuple(src) + (NULL,):
            cooc[sw].update(tgt)
    t: dict[str, dict[str, float]] = {
        sw: {tw: 1.0 / len(ts) for tw in sorted(ts)} for sw, ts in cooc.items()
    }

    loglik: list[float] = []
    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
        ll = 0.0
        for src, tgt in pair_list:
            bag = tuple(src) + (NULL,)
            for tw in tgt:
                probs = [t[sw].get(tw, 0.0) for sw in bag]
                denom = sum(probs)
                ll += math.log(denom / len(bag))
                for sw, p in zip(bag, probs):
                    if p > 0.0:
                        counts[sw][tw] += p / denom
        for sw, row in counts.items():
            z = sum(row.values())
            t[sw] = {tw: c / z for tw, c in sorted(row.items())}
        loglik.append(ll)
    return LexicalTable(table=t, train_loglik=loglik)


class LexMixtureMt:
    """Conditional scorer: lambda * p_ngram(u|history) + (1-lambda) * p_lex(u|source).

    p_lex averages the lexical distributions of the source bag (source words
    plus NULL); source words without a table entry contribute a uniform
    distribution over the mixture vocabulary, so each step remains a proper
    distribution over vocab + {EOS}.  The lexical term puts no mass on EOS;
    EOS probability comes from the n-gram term alone.  With lambda = 1 the
    scorer reduces exactly to the language model.
    """

    def __init__(self, lm: NgramLm, table: LexicalTable, mix_lambda: float = 0.5):
        if not (0.0 <= mix_lambda <= 1.0):
            raise ValidationError(f"mixing weight must be in [0, 1], got {mix_lambda}")
        self.lm = lm
        self.table = table
        self.mix_lambda = mix_lambda
        self._mix_vocab = lm.vocab  # predicted symbols except EOS

    def _lex_mix(self, source: Sequence[str]) -> tuple[dict[str, float], float]:
        """Averaged sparse lexical distribution and the uniform floor."""
        bag = tuple(source) + (NULL,)
        mix: dict[str, float] = defaultdict(float)
        n_unseen = 0
        for sw in bag:
            dist = self.table.dist(sw)
            if dist is None:
                n_unseen += 1
                continue
            for tw, p in dist.items():
                mix[tw] += p
        scale = 1.0 / len(bag)
        mix = {tw: p * scale for tw, p in mix.items()}
        floor = n_unseen * scale / len(self._mix_vocab)
        return mix, floor

    def step_prob(self, unit: str, context: Sequence[str], source: Sequence[str]) -> float:
        """Probability of one unit; `unit` may be EOS."""
        mix, floor = self._lex_mix(source)
        return self._step(unit, context, mix, floor)

    def _step(self, unit: str, context, mix: dict[str, float], floor: float) -> float:
        p_ng = self.lm.prob(unit, context)
        if unit == EOS:
            p_lex = 0.0
        else:
            key = unit if unit in self._mix_vocab else UNK
            p_lex = mix.get(key, 0.0) + floor
        return self.mix_lambda * p_ng + (1.0 - self.mix_lambda) * p_lex


def mt_logprob(
    model: LexMixtureMt, target: Sequence[str], source: Sequence[str]
) -> tuple[float, int]:
    """Total log2 probability of `target` plus EOS given `source`."""
    mix, floor = model._lex_mix(source)
    lm = model.lm
    context: tuple[str, ...] = (BOS,) * (lm.order - 1)
    total = 0.0
    for unit in tuple(target) + (EOS,):
        p = model._step(unit, context, mix, floor)
        if p <= 0.0:
            raise ZeroProbabilityError(unit, context)
        total += math.log2(p)
        if lm.order > 1:
            context = context[1:] + (lm.map_unit(unit),)
    return total, len(target) + 1


def train_lex_mixture_mt(
    pairs: Iterable[tuple[Sequence[str], Sequence[str]]],
    order: int = 3,
    smoothing: str = "kn",
    iterations: int = 5,
    mix_lambda: float = 0.5,
) -> LexMixtureMt:
    """Train target-side n-gram model and lexical table on the same pairs."""
    pair_list = [(tuple(s), tuple(t)) for s, t in pairs]
    lm = train_ngram_lm([t for _, t in pair_list], order=order, smoothing=smoothing)
    table = train_lex_table(pair_list, iterations=iterations)
    return LexMixtureMt(lm=lm, table=table, mix_lambda=mix_lambda)


# ---------------------------------------------------------------------------
# building ScoreSets

def score_sentences_lm(
    lm: NgramLm,
    sentences: Iterable[tuple[int, Sequence[str]]],
    model_tag: str,
    tgt_lang: str,
) -> ScoreSet:
    """Score (sentence_id, units) items with a language model."""
    records = []
    for sid, units in sentences:
        bits, n_units = lm_logprob(lm, units)
        records.append(ScoreRecord(sid, n_units, bits))
    return ScoreSet(
        model_tag=model_tag,
        direction=(None, tgt_lang),
        records=tuple(records),
        vocab_hash=lm.vocab_hash(),
    )


def score_sentences_mt(
    model: LexMixtureMt,
    items: Iterable[tuple[int, Sequence[str], Sequence[str]]],
    model_tag: str,
    src_lang: str,
    tgt_lang: str,
) -> ScoreSet:
    """Score (sentence_id, target units, source tokens) items with the mixture."""
    records = []
    for sid, target, source in items:
        bits, n_units = mt_logprob(model, target, source)
        records.append(ScoreRecord(sid, n_units, bits))
    return ScoreSet(
        model_tag=model_tag,
        direction=(src_lang, tgt_lang),
        records=tuple(records),
        vocab_hash=model.lm.vocab_hash(),
    )


# ---------------------------------------------------------------------------
# score files

_COLUMNS = ["sentence_id", "n_units", "logprob_bits"]


def _format_direction(direction: tuple[str | None, str]) -> str:
    src, tgt = direction
    return f"{src or ''}->{tgt}"


def _parse_direction(text: str) -> tuple[str | None, str]:
    if "->" not in text:
        raise ValidationError(f"malformed direction {text!r}")
    src, tgt = text.split("->", 1)
    if not tgt:
        raise ValidationError(f"malformed direction {text!r}")
    return (src or None, tgt)


def write_scores(scores: ScoreSet, path, extra_meta: dict | None = None) -> None:
    """TSV score file: # metadata lines, a header row, one record per line.

    Floats are written with shortest round-trip precision, so read(write(x))
    is lossless.  `extra_meta` adds further # key: value lines (provenance
    such as a run-config hash); readers ignore keys they do not know.
    """
    lines = [
        f"# model_tag: {scores.model_tag}",
        f"# direction: {_format_direction(scores.direction)}",
        f"# vocab_hash: {scores.vocab_hash}",
    ]
    for key, value in (extra_meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append("\t".join(_COLUMNS))
    for r in sorted(scores.records, key=lambda r: r.sentence_id):
        lines.append(f"{r.sentence_id}\t{r.n_units}\t{r.logprob_bits!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_scores(path) -> ScoreSet:
    """Parse and validate a score file (see `write_scores` for the format).

    Rejects positive or NaN log-probabilities, duplicate sentence ids, unit
    counts below one, and header/schema mismatches.
    """
    meta: dict[str, str] = {}
    records: list[ScoreRecord] = []
    header_seen = False
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, value = body.split(":", 1)
                meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.split("\t") != _COLUMNS:
                raise ValidationError(
                    f"{path}:{lineno}: bad header {line!r}, "
                    f"expected {chr(9).join(_COLUMNS)!r}"
                )
            header_seen = True
            continue
        parts = line.split("\t")
        if len(parts) != len(_COLUMNS):
            raise ValidationError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
        try:
            sid = int(parts[0])
            n_units = int(parts[1])
            bits = float(parts[2])
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
        try:
            records.append(ScoreRecord(sid, n_units, bits))
        except ValidationError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    if not header_seen:
        raise ValidationError(f"{path}: missing header row")
    for key in ("model_tag", "direction"):
        if key not in meta:
            raise ValidationError(f"{path}: missing metadata line '# {key}: ...'")
    return ScoreSet(
        model_tag=meta["model_tag"],
        direction=_parse_direction(meta["direction"]),
        records=tuple(records),
        vocab_hash=meta.get("vocab_hash", ""),
    )
