import math
import random

import pytest

from crossmi.errors import ValidationError, ZeroProbabilityError
from crossmi.scoring import (
    BOS,
    EOS,
    NULL,
    UNK,
    LexMixtureMt,
    ScoreRecord,
    ScoreSet,
    lm_logprob,
    mt_logprob,
    read_scores,
    score_sentences_lm,
    train_lex_mixture_mt,
    train_lex_table,
    train_ngram_lm,
    write_scores,
)

from oracles import BruteForceKn, brute_force_em


def toy_sentences(seed=3, n=50, vocab=("a", "b", "c", "d", "e"), max_len=9):
    rng = random.Random(seed)
    return [
        [rng.choice(vocab) for _ in range(rng.randint(1, max_len))] for _ in range(n)
    ]


class TestMleLm:
    def test_unigram_relative_frequencies(self):
        lm = train_ngram_lm([["a", "a", "b"]], order=1, smoothing="mle")
        # one sentence: counts a=2, b=1, EOS=1
        assert lm.prob("a", ()) == pytest.approx(2 / 4)
        assert lm.prob("b", ()) == pytest.approx(1 / 4)
        assert lm.prob(EOS, ()) == pytest.approx(1 / 4)
        # before EOS handling the word ratios are 2/3 vs 1/3
        p_a, p_b = lm.prob("a", ()), lm.prob("b", ())
        assert p_a / (p_a + p_b) == pytest.approx(2 / 3)

    def test_uniform_four_symbol_model(self):
        # three symbols plus EOS, each with probability 1/4
        lm = train_ngram_lm([["a", "b", "c"]] * 3, order=1, smoothing="mle")
        bits, n_units = lm_logprob(lm, ["a", "b", "c", "a"])
        assert bits == pytest.approx(-10.0)
        assert n_units == 5

    def test_unseen_event_raises_naming_unit(self):
        lm = train_ngram_lm([["a", "b"]], order=1, smoothing="mle")
        with pytest.raises(ZeroProbabilityError) as err:
            lm_logprob(lm, ["z"])
        assert "z" in str(err.value) or UNK in str(err.value)

    def test_bigram_chain_rule_by_hand(self):
        lm = train_ngram_lm([["a", "b"], ["a", "a"]], order=2, smoothing="mle")
        # p(a|BOS)=1, p(b|a)=1/3, p(EOS|b)=1
        bits, n_units = lm_logprob(lm, ["a", "b"])
        assert bits == pytest.approx(math.log2(1.0) + math.log2(1 / 3) + math.log2(1.0))
        assert n_units == 3


class TestKneserNeyLm:
    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_matches_brute_force_oracle(self, order):
        sentences = toy_sentences(seed=11)
        lm = train_ngram_lm(sentences, order=order, smoothing="kn")
        oracle = BruteForceKn(sentences, order=order)
        events = set()
        for s in sentences[:20]:
            padded = [BOS] * (order - 1) + list(s) + [EOS]
            for i in range(order - 1, len(padded)):
                events.add((tuple(padded[i - order + 1 : i]), padded[i]))
        # also unseen events and unseen contexts
        events.add(((("a",) * (order - 1))[: order - 1], "zzz"))
        events.add(((("zzz",) * (order - 1))[: order - 1], "a"))
        assert events
        for ctx, unit in sorted(events):
            assert lm.prob(unit, ctx) == pytest.approx(
                oracle.prob(unit, ctx), abs=1e-9
            ), (ctx, unit)

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_distributions_sum_to_one(self, order):
        sentences = toy_sentences(seed=5, n=30)
        lm = train_ngram_lm(sentences, order=order, smoothing="kn")
        rng = random.Random(0)
        contexts = [
            tuple(rng.choice(["a", "b", "c", "d", "e", "zzz"]) for _ in range(order - 1))
            for _ in range(100)
        ]
        contexts.append((BOS,) * (order - 1))
        for ctx in contexts:
            total = sum(lm.prob(w, ctx) for w in lm.predicted)
            assert total == pytest.approx(1.0, abs=1e-9), ctx

    def test_mle_distributions_sum_to_one(self):
        sentences = toy_sentences(seed=8, n=30)
        lm = train_ngram_lm(sentences, order=2, smoothing="mle")
        for ctx in [("a",), ("b",), ("c",), (BOS,)]:
            total = sum(lm.prob(w, ctx) for w in lm.predicted)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_hand_chain_rule_product(self):
        sentences = [["a", "b"], ["a", "c"], ["b", "a"]]
        lm = train_ngram_lm(sentences, order=2, smoothing="kn")
        oracle = BruteForceKn(sentences, order=2)
        bits, n_units = lm_logprob(lm, ["a", "b"])
        expected = (
            math.log2(oracle.prob("a", (BOS,)))
            + math.log2(oracle.prob("b", ("a",)))
            + math.log2(oracle.prob(EOS, ("b",)))
        )
        assert bits == pytest.approx(expected, abs=1e-9)
        assert n_units == 3

    def test_empty_sentence_scores_eos_only(self):
        lm = train_ngram_lm([["a", "b"], ["b"]], order=3, smoothing="kn")
        bits, n_units = lm_logprob(lm, [])
        assert n_units == 1
        assert bits == pytest.approx(math.log2(lm.prob(EOS, (BOS, BOS))))

    def test_oov_units_have_positive_probability(self):
        lm = train_ngram_lm([["a", "b"]], order=3, smoothing="kn")
        bits, _ = lm_logprob(lm, ["completely", "unseen", "stuff"])
        assert math.isfinite(bits) and bits < 0

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            train_ngram_lm([], order=2)


class TestLexTable:
    def test_single_pair_concentrates_in_one_iteration(self):
        table = train_lex_table([(["a"], ["x"])], iterations=1)
        assert table.table["a"]["x"] == pytest.approx(1.0)
        assert table.table[NULL]["x"] == pytest.approx(1.0)

    def test_two_pair_fixture_after_ten_iterations(self):
        table = train_lex_table(
            [(["a", "b"], ["x", "y"]), (["a"], ["x"])], iterations=10
        )
        assert table.table["a"]["x"] > 0.9

    def test_matches_brute_force_em(self, toy_parallel):
        table = train_lex_table(toy_parallel, iterations=6)
        oracle_table, oracle_ll = brute_force_em(toy_parallel, iterations=6)
        for sw, row in oracle_table.items():
            for tw, p in row.items():
                assert table.table[sw][tw] == pytest.approx(p, abs=1e-9), (sw, tw)
        for got, want in zip(table.train_loglik, oracle_ll):
            assert got == pytest.approx(want, abs=1e-9)

    def test_loglik_nondecreasing(self, toy_parallel):
        table = train_lex_table(toy_parallel, iterations=10)
        assert len(table.train_loglik) == 10
        for prev, nxt in zip(table.train_loglik, table.train_loglik[1:]):
            assert nxt >= prev - 1e-12

    def test_rows_normalized(self, toy_parallel):
        table = train_lex_table(toy_parallel, iterations=4)
        for sw, row in table.table.items():
            assert sum(row.values()) == pytest.approx(1.0, abs=1e-9), sw

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            train_lex_table([], iterations=1)


class TestLexMixture:
    def test_lambda_one_equals_lm_exactly(self, toy_parallel, toy_parallel_heldout):
        mt = train_lex_mixture_mt(toy_parallel, order=2, mix_lambda=1.0)
        for src, tgt in toy_parallel_heldout[:10]:
            mt_bits, mt_units = mt_logprob(mt, tgt, src)
            lm_bits, lm_units = lm_logprob(mt.lm, tgt)
            assert mt_bits == pytest.approx(lm_bits, abs=1e-12)
            assert mt_units == lm_units

    def test_lambda_zero_gives_zero_bits_where_lex_is_one(self):
        # single target type: p_lex(x | any bag) = 1 everywhere
        mt = train_lex_mixture_mt(
            [(["a"], ["x"]), (["b"], ["x"])], order=1, mix_lambda=0.0
        )
        p = mt.step_prob("x", (), ["a"])
        assert math.log2(p) == pytest.approx(0.0)

    def test_step_distributions_sum_to_one(self, toy_parallel):
        mt = train_lex_mixture_mt(toy_parallel, order=2, mix_lambda=0.5)
        vocabs = sorted(mt.lm.predicted)
        rng = random.Random(1)
        for _ in range(25):
            src, _ = toy_parallel[rng.randrange(len(toy_parallel))]
            ctx = (rng.choice(vocabs),)
            total = sum(mt.step_prob(w, ctx, src) for w in mt.lm.predicted)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_unseen_source_words_back_off_to_uniform(self, toy_parallel):
        mt = train_lex_mixture_mt(toy_parallel, order=1, mix_lambda=0.5)
        bits, n_units = mt_logprob(mt, ["t1"], ["never-seen-source"])
        assert math.isfinite(bits) and bits < 0
        assert n_units == 2

    def test_conditioning_helps_on_correlated_corpus(
        self, toy_parallel, toy_parallel_heldout
    ):
        mt = train_lex_mixture_mt(toy_parallel, order=2, mix_lambda=0.5)
        lm = train_ngram_lm([t for _, t in toy_parallel], order=2)
        mt_total = 0.0
        lm_total = 0.0
        for src, tgt in toy_parallel_heldout:
            mt_total += mt_logprob(mt, tgt, src)[0]
            lm_total += lm_logprob(lm, tgt)[0]
        assert mt_total > lm_total  # closer to zero: conditioning helps

    def test_lambda_zero_eos_is_zero_probability(self):
        mt = train_lex_mixture_mt([(["a"], ["x"])], order=1, mix_lambda=0.0)
        with pytest.raises(ZeroProbabilityError):
            mt_logprob(mt, ["x"], ["a"])

    def test_invalid_lambda_rejected(self, toy_parallel):
        with pytest.raises(ValidationError):
            train_lex_mixture_mt(toy_parallel, mix_lambda=1.5)


class TestScoreRecords:
    def test_positive_logprob_rejected(self):
        with pytest.raises(ValidationError):
            ScoreRecord(sentence_id=0, n_units=3, logprob_bits=0.5)

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            ScoreRecord(sentence_id=0, n_units=3, logprob_bits=float("nan"))

    def test_zero_units_rejected(self):
        with pytest.raises(ValidationError):
            ScoreRecord(sentence_id=0, n_units=0, logprob_bits=-1.0)

    def test_duplicate_ids_rejected(self):
        records = (
            ScoreRecord(1, 2, -3.0),
            ScoreRecord(1, 4, -5.0),
        )
        with pytest.raises(ValidationError):
            ScoreSet(model_tag="m", direction=(None, "en"), records=records)


class TestScoreFiles:
    def make_set(self):
        records = tuple(
            ScoreRecord(i, i + 1, -float(i + 1) * 1.25) for i in range(5)
        )
        return ScoreSet(
            model_tag="kn3-lm",
            direction=("fi", "en"),
            records=records,
            vocab_hash="abc123",
        )

    def test_roundtrip(self, tmp_path):
        scores = self.make_set()
        path = tmp_path / "scores.tsv"
        write_scores(scores, path)
        assert read_scores(path) == scores

    def test_lm_direction_roundtrip(self, tmp_path):
        scores = ScoreSet(
            model_tag="lm",
            direction=(None, "fi"),
            records=(ScoreRecord(0, 1, -2.0),),
        )
        path = tmp_path / "lm.tsv"
        write_scores(scores, path)
        assert read_scores(path).direction == (None, "fi")

    def test_float_precision_preserved(self, tmp_path):
        bits = -123.45678901234567
        scores = ScoreSet(
            model_tag="m",
            direction=(None, "en"),
            records=(ScoreRecord(0, 7, bits),),
        )
        path = tmp_path / "s.tsv"
        write_scores(scores, path)
        assert read_scores(path).records[0].logprob_bits == bits

    def test_positive_logprob_in_file_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text(
            "# model_tag: m\n# direction: ->en\n# vocab_hash: x\n"
            "sentence_id\tn_units\tlogprob_bits\n0\t3\t0.5\n",
            encoding="utf-8",
        )
        with pytest.raises(ValidationError):
            read_scores(path)

    def test_duplicate_id_in_file_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text(
            "# model_tag: m\n# direction: ->en\n# vocab_hash: x\n"
            "sentence_id\tn_units\tlogprob_bits\n0\t3\t-1.0\n0\t4\t-2.0\n",
            encoding="utf-8",
        )
        with pytest.raises(ValidationError):
            read_scores(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text(
            "# model_tag: m\n# direction: ->en\nid\tunits\tbits\n0\t3\t-1.0\n",
            encoding="utf-8",
        )
        with pytest.raises(ValidationError):
            read_scores(path)

    def test_missing_metadata_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text(
            "sentence_id\tn_units\tlogprob_bits\n0\t3\t-1.0\n", encoding="utf-8"
        )
        with pytest.raises(ValidationError):
            read_scores(path)


class TestScoreHelpers:
    def test_score_sentences_lm(self):
        lm = train_ngram_lm([["a", "b"], ["b", "a"]], order=2)
        scores = score_sentences_lm(
            lm, [(0, ["a"]), (1, ["b", "a"])], model_tag="lm", tgt_lang="en"
        )
        assert scores.direction == (None, "en")
        assert [r.sentence_id for r in scores.records] == [0, 1]
        assert scores.records[0].n_units == 2
        assert scores.vocab_hash == lm.vocab_hash()
