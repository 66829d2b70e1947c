"""Score corpora under neural checkpoints and emit crossmi score files.

A job points at a Hugging Face model directory (or hub name), the corpus
side(s) to score, and an output path.  Jobs without a source file score a
causal language model; jobs with one force-score a sequence-to-sequence
model on the (source, target) pairs.  Either way the file carries one record
per sentence: the total log2 probability of the target units plus EOS, and
the number of generated units under the model's own segmentation
(subwords + 1 for EOS).

Scores are true negative log-likelihoods straight from the model's softmax;
label smoothing never enters evaluation.  Base conversion happens once:
bits = nats / ln 2.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import torch


class ExportError(Exception):
    """Bad job inputs or a model that produced unusable scores."""


@dataclass(frozen=True)
class ScoredSentence:
    sentence_id: int
    n_units: int
    logprob_bits: float


@dataclass
class ExportJob:
    """One scoring run: model locator, corpus paths, direction, output."""

    model_path: str
    tgt_path: str
    tgt_lang: str
    src_path: str | None = None  # None: language-model job
    src_lang: str | None = None
    output_path: str = "scores.tsv"
    batch_size: int = 16
    model_tag: str = ""

    def is_lm(self) -> bool:
        return self.src_path is None

    def direction(self) -> str:
        return f"{self.src_lang or ''}->{self.tgt_lang}"

    def tag(self) -> str:
        return self.model_tag or Path(self.model_path).name


def _read_lines(path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _vocab_hash(tokenizer) -> str:
    tokens = sorted(tokenizer.get_vocab())
    payload = "\n".join(tokens).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16]


def _check_finite(value: float, sentence_id: int) -> float:
    if not math.isfinite(value):
        raise ExportError(f"sentence {sentence_id}: non-finite log-probability")
    return value


def _gathered_bits(logits: torch.Tensor, targets: torch.Tensor, mask: torch.Tensor):
    """Per-sentence total log2 probability of `targets` under `logits`.

    logits: (batch, steps, vocab); targets/mask: (batch, steps).  Masked
    positions contribute nothing.
    """
    logprobs = torch.log_softmax(logits, dim=-1)
    picked = logprobs.gather(-1, targets.unsqueeze(-1)).squeeze(-1)
    nats = (picked * mask).double().sum(dim=1)
    return nats / math.log(2.0)


def score_lm(model, tokenizer, sentences: list[str], batch_size: int):
    """Total bits of each sentence (subwords + EOS) under a causal LM."""
    if tokenizer.eos_token_id is None:
        raise ExportError("tokenizer has no EOS token; cannot score sentences")
    bos_id = tokenizer.bos_token_id
    if bos_id is None:
        bos_id = tokenizer.eos_token_id
    pad_id = tokenizer.pad_token_id if tokenizer.pad_token_id is not None else 0

    model.eval()
    results: list[ScoredSentence] = []
    for start in range(0, len(sentences), batch_size):
        batch = sentences[start : start + batch_size]
        encoded = [
            tokenizer(text, add_special_tokens=False)["input_ids"] for text in batch
        ]
        full = [[bos_id] + ids + [tokenizer.eos_token_id] for ids in encoded]
        width = max(len(ids) for ids in full)
        input_ids = torch.full((len(full), width), pad_id, dtype=torch.long)
        attention = torch.zeros((len(full), width), dtype=torch.long)
        for row, ids in enumerate(full):
            input_ids[row, : len(ids)] = torch.tensor(ids)
            attention[row, : len(ids)] = 1
        with torch.no_grad():
            logits = model(input_ids=input_ids, attention_mask=attention).logits
        # position i predicts input_ids[i+1]; mask off padding
        targets = input_ids[:, 1:]
        mask = attention[:, 1:].to(logits.dtype)
        bits = _gathered_bits(logits[:, :-1], targets, mask)
        for row, ids in enumerate(encoded):
            sid = start + row
            results.append(
                ScoredSentence(
                    sentence_id=sid,
                    n_units=len(ids) + 1,
                    logprob_bits=_check_finite(float(bits[row]), sid),
                )
            )
    return results


def score_mt(model, tokenizer, pairs: list[tuple[str, str]], batch_size: int):
    """Total bits of each target (subwords + EOS) given its source, under a
    sequence-to-sequence model (forced scoring, no decoding)."""
    if tokenizer.eos_token_id is None:
        raise ExportError("tokenizer has no EOS token; cannot score sentences")
    pad_id = tokenizer.pad_token_id if tokenizer.pad_token_id is not None else 0

    model.eval()
    results: list[ScoredSentence] = []
    for start in range(0, len(pairs), batch_size):
        batch = pairs[start : start + batch_size]
        src_ids = [
            tokenizer(src, add_special_tokens=False)["input_ids"] for src, _ in batch
        ]
        tgt_ids = [
            tokenizer(tgt, add_special_tokens=False)["input_ids"]
            + [tokenizer.eos_token_id]
            for _, tgt in batch
        ]
        src_width = max(max(len(s) for s in src_ids), 1)
        tgt_width = max(len(t) for t in tgt_ids)
        input_ids = torch.full((len(batch), src_width), pad_id, dtype=torch.long)
        attention = torch.zeros((len(batch), src_width), dtype=torch.long)
        labels = torch.full((len(batch), tgt_width), -100, dtype=torch.long)
        for row, (s, t) in enumerate(zip(src_ids, tgt_ids)):
            if s:
                input_ids[row, : len(s)] = torch.tensor(s)
                attention[row, : len(s)] = 1
            labels[row, : len(t)] = torch.tensor(t)
        with torch.no_grad():
            logits = model(
                input_ids=input_ids, attention_mask=attention, labels=labels
            ).logits
        mask = (labels != -100).to(logits.dtype)
        targets = labels.clamp(min=0)
        bits = _gathered_bits(logits, targets, mask)
        for row, t in enumerate(tgt_ids):
            sid = start + row
            results.append(
                ScoredSentence(
                    sentence_id=sid,
                    n_units=len(t),
                    logprob_bits=_check_finite(float(bits[row]), sid),
                )
            )
    return results


def write_score_file(
    path, records: list[ScoredSentence], model_tag: str, direction: str, vocab_hash: str
) -> None:
    """The crossmi score-file contract: # metadata lines, header, TSV rows,
    floats at round-trip precision."""
    lines = [
        f"# model_tag: {model_tag}",
        f"# direction: {direction}",
        f"# vocab_hash: {vocab_hash}",
        "sentence_id\tn_units\tlogprob_bits",
    ]
    for r in sorted(records, key=lambda r: r.sentence_id):
        lines.append(f"{r.sentence_id}\t{r.n_units}\t{r.logprob_bits!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_scores(job: ExportJob) -> Path:
    """Run one job end to end and return the written score file's path."""
    from transformers import (
        AutoModelForCausalLM,
        AutoModelForSeq2SeqLM,
        AutoTokenizer,
    )

    targets = _read_lines(job.tgt_path)
    if not targets:
        raise ExportError(f"{job.tgt_path}: empty corpus")
    tokenizer = AutoTokenizer.from_pretrained(job.model_path)

    if job.is_lm():
        model = AutoModelForCausalLM.from_pretrained(job.model_path)
        records = score_lm(model, tokenizer, targets, job.batch_size)
    else:
        sources = _read_lines(job.src_path)
        if len(sources) != len(targets):
            raise ExportError(
                f"corpus misaligned: {len(sources)} source lines vs "
                f"{len(targets)} target lines"
            )
        model = AutoModelForSeq2SeqLM.from_pretrained(job.model_path)
        records = score_mt(
            model, tokenizer, list(zip(sources, targets)), job.batch_size
        )

    out = Path(job.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_score_file(
        out,
        records,
        model_tag=job.tag(),
        direction=job.direction(),
        vocab_hash=_vocab_hash(tokenizer),
    )
    return out
