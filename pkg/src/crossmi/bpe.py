"""Joint byte-pair encoding: training, application, inversion, model files.

Training is the greedy most-frequent-pair recipe over a frequency-weighted
word-type table.  A language pair trains jointly: both sides' token sequences
feed one table.  During training and merge replay the end-of-word marker is a
separate trailing symbol; emitted subwords carry the marker fused onto the
last piece of each word, so concatenating a word's subwords and stripping the
marker reconstructs the word exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError

EOW = "⟨eow⟩"  # ⟨eow⟩, reserved end-of-word marker


@dataclass
class BpeModel:
    """Ordered merge list plus the subword vocabulary it induced."""

    merges: list[tuple[str, str]]
    vocab: set[str] = field(default_factory=set)
    end_of_word_marker: str = EOW

    def merge_ranks(self) -> dict[tuple[str, str], int]:
        return {pair: rank for rank, pair in enumerate(self.merges)}


def _word_symbols(word: str, marker: str) -> tuple[str, ...]:
    return tuple(word) + (marker,)


def _count_pairs(words: list[tuple[tuple[str, ...], int]]) -> tuple[Counter, dict]:
    """Pair frequencies plus an index pair -> {word index: occurrences}."""
    stats: Counter = Counter()
    index: dict[tuple[str, str], dict[int, int]] = {}
    for wi, (symbols, freq) in enumerate(words):
        for a, b in zip(symbols, symbols[1:]):
            stats[a, b] += freq
            index.setdefault((a, b), {}).setdefault(wi, 0)
            index[a, b][wi] += 1
    return stats, index


def _merge_word(symbols: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    a, b = pair
    out = []
    i = 0
    while i < len(symbols):
        if i < len(symbols) - 1 and symbols[i] == a and symbols[i + 1] == b:
            out.append(a + b)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def bpe_train(
    corpora: Sequence[Iterable[Sequence[str]]],
    n_merges: int = 16000,
    end_of_word_marker: str = EOW,
) -> BpeModel:
    """Learn merges over the joint word-frequency table of all corpora.

    `corpora` is a sequence of corpus sides, each an iterable of token
    sequences; passing both sides of a language pair gives the joint model.
    Merging stops after `n_merges` merges or as soon as no pair occurs at
    least twice.  Ties between equally frequent pairs break to the
    lexicographically smallest pair, which makes the merge list a pure
    function of the corpus and the merge budget.
    """
    word_freq: Counter = Counter()
    for side in corpora:
        for sentence in side:
            word_freq.update(sentence)
    if not word_freq:
        raise ValidationError("BPE training corpus is empty")
    for word in word_freq:
        if end_of_word_marker in word:
            raise ValidationError(
                f"token {word!r} contains the reserved marker {end_of_word_marker!r}"
            )

    words: list[tuple[tuple[str, ...], int]] = [
        (_word_symbols(w, end_of_word_marker), f)
        for w, f in sorted(word_freq.items())
    ]
    stats, index = _count_pairs(words)

    merges: list[tuple[str, str]] = []
    for _ in range(n_merges):
        if not stats:
            break
        # max frequency, then lexicographically smallest pair
        best = min(stats, key=lambda p: (-stats[p], p))
        if stats[best] < 2:
            break
        merges.append(best)
        for wi in list(index.get(best, ())):
            symbols, freq = words[wi]
            if best not in zip(symbols, symbols[1:]):
                continue
            new_symbols = _merge_word(symbols, best)
            for a, b in zip(symbols, symbols[1:]):
                stats[a, b] -= freq
                occ = index[a, b]
                occ[wi] -= 1
                if occ[wi] == 0:
                    del occ[wi]
                if stats[a, b] <= 0:
                    del stats[a, b]
                    index.pop((a, b), None)
            for a, b in zip(new_symbols, new_symbols[1:]):
                stats[a, b] += freq
                index.setdefault((a, b), {}).setdefault(wi, 0)
                index[a, b][wi] += 1
            words[wi] = (new_symbols, freq)

    model = BpeModel(merges=merges, end_of_word_marker=end_of_word_marker)
    ranks = model.merge_ranks()
    vocab: set[str] = set()
    for word in word_freq:
        vocab.update(_encode_word(word, ranks, end_of_word_marker))
    model.vocab = vocab
    return model


def _encode_word(
    word: str, ranks: dict[tuple[str, str], int], marker: str
) -> tuple[str, ...]:
    symbols = list(_word_symbols(word, marker))
    while len(symbols) > 1:
        pairs = [(symbols[i], symbols[i + 1]) for i in range(len(symbols) - 1)]
        ranked = [(ranks[p], p) for p in pairs if p in ranks]
        if not ranked:
            break
        _, best = min(ranked)
        symbols = list(_merge_word(tuple(symbols), best))
    # fuse a bare trailing marker onto the last piece
    if symbols[-1] == marker:
        symbols.pop()
        symbols[-1] += marker
    return tuple(symbols)


def bpe_encode(model: BpeModel, tokens: Sequence[str]) -> list[str]:
    """Decompose each token by replaying the merges in training order.

    Unknown characters pass through as singleton symbols.  The final subword
    of every word ends with the model's end-of-word marker.
    """
    marker = model.end_of_word_marker
    ranks = model.merge_ranks()
    cache: dict[str, tuple[str, ...]] = {}
    out: list[str] = []
    for token in tokens:
        if marker in token:
            raise ValidationError(
                f"token {token!r} contains the reserved marker {marker!r}"
            )
        if token not in cache:
            cache[token] = _encode_word(token, ranks, marker)
        out.extend(cache[token])
    return out


def bpe_decode(subwords: Sequence[str], end_of_word_marker: str = EOW) -> list[str]:
    """Exact inverse of `bpe_encode`: rejoin subwords into the original tokens."""
    marker = end_of_word_marker
    tokens: list[str] = []
    current: list[str] = []
    for sw in subwords:
        if sw.endswith(marker):
            stem = sw[: -len(marker)]
            if marker in stem:
                raise ValidationError(f"marker inside subword {sw!r}")
            current.append(stem)
            word = "".join(current)
            if not word:
                raise ValidationError("empty word before end-of-word marker")
            tokens.append(word)
            current = []
        else:
            if marker in sw:
                raise ValidationError(f"marker inside subword {sw!r}")
            current.append(sw)
    if current:
        raise ValidationError(
            f"dangling subwords without end-of-word marker: {current!r}"
        )
    return tokens


def encode_sentences(
    model: BpeModel, sentences: Iterable[Sequence[str]]
) -> list[list[str]]:
    return [bpe_encode(model, s) for s in sentences]


_HEADER_PREFIX = "# crossmi-bpe v1 marker="
_VOCAB_PREFIX = "# vocab:"


def save_bpe(model: BpeModel, path, extra_meta: dict | None = None) -> None:
    """Plain-text model file: header line, one merge per line, plus
    #-prefixed metadata lines (the vocabulary, optional provenance)."""
    lines = [f"{_HEADER_PREFIX}{model.end_of_word_marker}"]
    lines.append(f"{_VOCAB_PREFIX} " + " ".join(sorted(model.vocab)))
    for key, value in (extra_meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.extend(f"{a} {b}" for a, b in model.merges)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_bpe(path) -> BpeModel:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or not text[0].startswith(_HEADER_PREFIX):
        raise ValidationError(f"{path}: not a BPE model file")
    marker = text[0][len(_HEADER_PREFIX) :]
    vocab: set[str] = set()
    merges: list[tuple[str, str]] = []
    for line in text[1:]:
        if not line:
            continue
        if line.startswith(_VOCAB_PREFIX):
            vocab = set(line[len(_VOCAB_PREFIX) :].split())
            continue
        if line.startswith("#"):  # other metadata lines are ignored
            continue
        parts = line.split(" ")
        if len(parts) != 2:
            raise ValidationError(f"{path}: malformed merge line {line!r}")
        merges.append((parts[0], parts[1]))
    return BpeModel(merges=merges, vocab=vocab, end_of_word_marker=marker)
