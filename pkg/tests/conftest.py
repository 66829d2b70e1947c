import random

import pytest

from crossmi.corpus import ParallelCorpus, Sentence


def make_corpus(pairs, src_lang="xx", tgt_lang="en"):
    """Build a ParallelCorpus from (src_text, tgt_text) strings."""
    built = tuple(
        (Sentence.from_raw(i, s), Sentence.from_raw(i, t))
        for i, (s, t) in enumerate(pairs)
    )
    return ParallelCorpus(src_lang=src_lang, tgt_lang=tgt_lang, pairs=built)


# A tiny deterministic "language": source words map to target words through a
# fixed dictionary, so the source genuinely informs the target side.
_SRC_WORDS = [f"s{i}" for i in range(18)]
_TGT_WORDS = [f"t{i}" for i in range(18)]
_DICT = dict(zip(_SRC_WORDS, _TGT_WORDS))


def translated_pairs(n_pairs, seed=0, min_len=3, max_len=8):
    """(source tokens, target tokens) pairs with word-for-word translations."""
    rng = random.Random(seed)
    pairs = []
    for _ in range(n_pairs):
        length = rng.randint(min_len, max_len)
        src = [rng.choice(_SRC_WORDS) for _ in range(length)]
        tgt = [_DICT[w] for w in src]
        pairs.append((src, tgt))
    return pairs


@pytest.fixture
def toy_parallel():
    """50 word-for-word translated sentence pairs (token sequences)."""
    return translated_pairs(50, seed=13)


@pytest.fixture
def toy_parallel_heldout():
    """Disjoint sample from the same source as `toy_parallel`."""
    return translated_pairs(30, seed=99)
