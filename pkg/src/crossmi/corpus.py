"""Parallel corpus ingestion: tokenization, filtering, multiway intersection, splits.

Raw input is one sentence per line, UTF-8, two files per corpus with line i of
the source file aligned to line i of the target file.  Tokenization is the 13a
scheme throughout (the same tokenization BLEU uses here); the 80-token length
filter therefore counts 13a tokens, not toolkit-specific word tokens.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

logger = logging.getLogger(__name__)

_WS = re.compile(r"\s+")


def tokenize_13a(raw: str) -> list[str]:
    """Tokenize one sentence with the 13a punctuation-splitting rules.

    Rules, applied to the whitespace-normalized text:
      1. runs of whitespace collapse to single spaces;
      2. every non-alphanumeric character is surrounded by spaces, except
      3. '.' and ',' flanked by digits on both sides stay attached, and
      4. '-' preceded by a digit stays attached.

    Deterministic and language-independent; re-tokenizing the space-joined
    output is a fixed point.  Empty input gives an empty list.
    """
    text = _WS.sub(" ", raw).strip()
    if not text:
        return []
    out = []
    last = len(text) - 1
    for i, ch in enumerate(text):
        if ch == " " or ch.isalnum():
            out.append(ch)
            continue
        prev_c = text[i - 1] if i > 0 else ""
        next_c = text[i + 1] if i < last else ""
        if ch in ".," and prev_c.isdigit() and next_c.isdigit():
            out.append(ch)
        elif ch == "-" and prev_c.isdigit():
            out.append(ch)
        else:
            out.append(f" {ch} ")
    return "".join(out).split()


@dataclass(frozen=True)
class Sentence:
    """One side of an aligned pair: stable id, raw text, tokenized form."""

    id: int
    raw: str
    tokens: tuple[str, ...]

    @classmethod
    def from_raw(cls, id: int, raw: str, tokenizer=tokenize_13a) -> "Sentence":
        return cls(id=id, raw=raw, tokens=tuple(tokenizer(raw)))


@dataclass(frozen=True)
class ParallelCorpus:
    """Aligned sentence pairs; both sentences of a pair share one id."""

    src_lang: str
    tgt_lang: str
    pairs: tuple[tuple[Sentence, Sentence], ...]

    def __post_init__(self):
        seen = set()
        for src, tgt in self.pairs:
            if src.id != tgt.id:
                raise ValidationError(
                    f"misaligned pair: source id {src.id} vs target id {tgt.id}"
                )
            if src.id in seen:
                raise ValidationError(f"duplicate pair id {src.id}")
            seen.add(src.id)

    def __len__(self) -> int:
        return len(self.pairs)

    def ids(self) -> list[int]:
        return [src.id for src, _ in self.pairs]

    def side(self, lang: str) -> list[Sentence]:
        """All sentences of the side carrying `lang`."""
        if lang == self.src_lang:
            return [src for src, _ in self.pairs]
        if lang == self.tgt_lang:
            return [tgt for _, tgt in self.pairs]
        raise ValidationError(
            f"language {lang!r} not in corpus ({self.src_lang}-{self.tgt_lang})"
        )

    def sources(self) -> list[Sentence]:
        return [src for src, _ in self.pairs]

    def targets(self) -> list[Sentence]:
        return [tgt for _, tgt in self.pairs]


@dataclass(frozen=True)
class SplitSpec:
    """Sizes and seed for the train/valid/test partition."""

    n_valid: int
    n_test: int
    seed: int


def read_parallel(
    src_path,
    tgt_path,
    src_lang: str,
    tgt_lang: str,
    tokenizer=tokenize_13a,
) -> ParallelCorpus:
    """Read two aligned one-sentence-per-line files into a tokenized corpus."""
    src_lines = Path(src_path).read_text(encoding="utf-8").splitlines()
    tgt_lines = Path(tgt_path).read_text(encoding="utf-8").splitlines()
    if len(src_lines) != len(tgt_lines):
        raise ValidationError(
            f"line count mismatch: {src_path} has {len(src_lines)}, "
            f"{tgt_path} has {len(tgt_lines)}"
        )
    pairs = tuple(
        (Sentence.from_raw(i, s, tokenizer), Sentence.from_raw(i, t, tokenizer))
        for i, (s, t) in enumerate(zip(src_lines, tgt_lines))
    )
    return ParallelCorpus(src_lang=src_lang, tgt_lang=tgt_lang, pairs=pairs)


def filter_by_length(corpus: ParallelCorpus, max_len: int = 80) -> ParallelCorpus:
    """Drop pairs with more than `max_len` tokens on either side ("longer than"
    is strict: exactly `max_len` tokens survive).  Order and ids preserved."""
    kept = tuple(
        (s, t)
        for s, t in corpus.pairs
        if len(s.tokens) <= max_len and len(t.tokens) <= max_len
    )
    return ParallelCorpus(corpus.src_lang, corpus.tgt_lang, kept)


def _normalize_key(raw: str) -> str:
    return " ".join(raw.split())


def intersect_multiway(
    corpora: Mapping[str, ParallelCorpus], pivot: str
) -> dict[str, ParallelCorpus]:
    """Keep only pairs whose pivot-side sentence appears in every corpus.

    Pivot sentences are matched on whitespace-normalized raw text.  Duplicate
    pivot sentences within one corpus keep their first occurrence (a warning
    reports how many were folded).  Outputs all have the same length, the same
    pivot order (that of the first corpus in the mapping), and pairs are
    renumbered 0..n-1 so that the same pivot sentence carries the same id in
    every output corpus.
    """
    if not corpora:
        return {}
    keyed: dict[str, dict[str, tuple[Sentence, Sentence]]] = {}
    for lang, corpus in corpora.items():
        if pivot not in (corpus.src_lang, corpus.tgt_lang):
            raise ValidationError(
                f"corpus {lang!r} ({corpus.src_lang}-{corpus.tgt_lang}) "
                f"has no {pivot!r} side"
            )
        first: dict[str, tuple[Sentence, Sentence]] = {}
        dups = 0
        for src, tgt in corpus.pairs:
            piv = src if corpus.src_lang == pivot else tgt
            key = _normalize_key(piv.raw)
            if key in first:
                dups += 1
            else:
                first[key] = (src, tgt)
        if dups:
            logger.warning(
                "corpus %s: %d duplicate pivot sentence(s), keeping first occurrence",
                lang,
                dups,
            )
        keyed[lang] = first

    shared = None
    for first in keyed.values():
        keys = set(first)
        shared = keys if shared is None else shared & keys

    first_lang = next(iter(corpora))
    order = [k for k in keyed[first_lang] if k in shared]

    out: dict[str, ParallelCorpus] = {}
    for lang, corpus in corpora.items():
        pairs = []
        for new_id, key in enumerate(order):
            src, tgt = keyed[lang][key]
            pairs.append((replace(src, id=new_id), replace(tgt, id=new_id)))
        out[lang] = ParallelCorpus(corpus.src_lang, corpus.tgt_lang, tuple(pairs))
    return out


def make_splits(
    corpus: ParallelCorpus, spec: SplitSpec
) -> tuple[ParallelCorpus, ParallelCorpus, ParallelCorpus]:
    """Partition into (train, valid, test), drawing valid/test by seeded RNG.

    The RNG is numpy's PCG64, so identical specs reproduce identical splits on
    any platform.  Valid and test are disjoint uniform samples without
    replacement; train is everything else.  All three preserve original corpus
    order and ids.
    """
    n = len(corpus)
    n_held = spec.n_valid + spec.n_test
    if n_held > 0 and n_held >= n:
        raise ValidationError(
            f"split spec needs {n_held} held-out pairs but corpus has {n}"
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    perm = rng.permutation(n)
    valid_pos = set(int(i) for i in perm[: spec.n_valid])
    test_pos = set(int(i) for i in perm[spec.n_valid : n_held])

    def pick(positions):
        return tuple(corpus.pairs[i] for i in range(n) if i in positions)

    train_pos = set(range(n)) - valid_pos - test_pos
    train = ParallelCorpus(corpus.src_lang, corpus.tgt_lang, pick(train_pos))
    valid = ParallelCorpus(corpus.src_lang, corpus.tgt_lang, pick(valid_pos))
    test = ParallelCorpus(corpus.src_lang, corpus.tgt_lang, pick(test_pos))
    return train, valid, test


def split_manifest(
    spec: SplitSpec,
    train: ParallelCorpus,
    valid: ParallelCorpus,
    test: ParallelCorpus,
) -> dict:
    """JSON-ready manifest recording the seed, sizes, and id lists."""
    return {
        "seed": spec.seed,
        "n_valid": spec.n_valid,
        "n_test": spec.n_test,
        "sizes": {"train": len(train), "valid": len(valid), "test": len(test)},
        "ids": {
            "train": train.ids(),
            "valid": valid.ids(),
            "test": test.ids(),
        },
    }


def write_split_manifest(path, manifest: dict) -> None:
    Path(path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_split_manifest(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def prepare_multiway(
    corpora: Mapping[str, ParallelCorpus], pivot: str, max_len: int = 80
) -> tuple[dict[str, ParallelCorpus], dict]:
    """Controlled multi-language preparation.

    First intersect all corpora on the pivot side, then length-filter each
    pair corpus (different pairs drop in each), then re-intersect so every
    language keeps exactly the same sentence set.  Returns the prepared
    corpora plus per-stage sizes for reporting.
    """
    stage1 = intersect_multiway(corpora, pivot)
    sizes1 = {lang: len(c) for lang, c in stage1.items()}
    filtered = {lang: filter_by_length(c, max_len) for lang, c in stage1.items()}
    sizes_f = {lang: len(c) for lang, c in filtered.items()}
    stage2 = intersect_multiway(filtered, pivot)
    sizes2 = {lang: len(c) for lang, c in stage2.items()}
    stats = {
        "after_intersection": sizes1,
        "after_length_filter": sizes_f,
        "after_reintersection": sizes2,
    }
    return stage2, stats


def write_corpus_side(path, sentences: Iterable[Sentence]) -> None:
    """One raw sentence per line."""
    Path(path).write_text(
        "".join(s.raw + "\n" for s in sentences), encoding="utf-8"
    )


def corpus_token_sequences(sentences: Sequence[Sentence]) -> list[tuple[str, ...]]:
    return [s.tokens for s in sentences]
