import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import (
    GPT2Config,
    GPT2LMHeadModel,
    PreTrainedTokenizerFast,
    T5Config,
    T5ForConditionalGeneration,
)

WORDS = [f"w{i}" for i in range(28)]


def _tokenizer():
    vocab = {tok: i for i, tok in enumerate(["<pad>", "<s>", "</s>", "<unk>"] + WORDS)}
    backend = Tokenizer(models.WordLevel(vocab, unk_token="<unk>"))
    backend.pre_tokenizer = pre_tokenizers.Whitespace()
    return PreTrainedTokenizerFast(
        tokenizer_object=backend,
        bos_token="<s>",
        eos_token="</s>",
        unk_token="<unk>",
        pad_token="<pad>",
    )


@pytest.fixture(scope="session")
def lm_model_dir(tmp_path_factory):
    """A tiny randomly initialized causal LM plus its word-level tokenizer."""
    path = tmp_path_factory.mktemp("tiny-lm")
    tokenizer = _tokenizer()
    tokenizer.save_pretrained(path)
    torch.manual_seed(7)
    config = GPT2Config(
        vocab_size=len(tokenizer),
        n_layer=1,
        n_head=2,
        n_embd=32,
        n_positions=128,
        bos_token_id=tokenizer.bos_token_id,
        eos_token_id=tokenizer.eos_token_id,
    )
    GPT2LMHeadModel(config).save_pretrained(path)
    return str(path)


@pytest.fixture(scope="session")
def mt_model_dir(tmp_path_factory):
    """A tiny randomly initialized encoder-decoder plus the same tokenizer."""
    path = tmp_path_factory.mktemp("tiny-mt")
    tokenizer = _tokenizer()
    tokenizer.save_pretrained(path)
    torch.manual_seed(11)
    config = T5Config(
        vocab_size=len(tokenizer),
        d_model=32,
        d_ff=64,
        num_layers=1,
        num_heads=2,
        d_kv=16,
        decoder_start_token_id=tokenizer.pad_token_id,
        eos_token_id=tokenizer.eos_token_id,
        pad_token_id=tokenizer.pad_token_id,
    )
    T5ForConditionalGeneration(config).save_pretrained(path)
    return str(path)


@pytest.fixture()
def corpus_files(tmp_path):
    import random

    rng = random.Random(3)
    src_lines = [
        " ".join(rng.choice(WORDS) for _ in range(rng.randint(2, 7)))
        for _ in range(23)
    ]
    tgt_lines = [
        " ".join(rng.choice(WORDS) for _ in range(rng.randint(2, 7)))
        for _ in range(23)
    ]
    src = tmp_path / "corpus.src"
    tgt = tmp_path / "corpus.tgt"
    src.write_text("\n".join(src_lines) + "\n", encoding="utf-8")
    tgt.write_text("\n".join(tgt_lines) + "\n", encoding="utf-8")
    return src, tgt
