"""n-gram language models and bits per sentence
================================================

Train a Kneser-Ney-smoothed trigram model on a toy corpus, score held-out
sentences in log2 probability, and reduce them to a cross-entropy in bits
per sentence.
"""

import random

from crossmi import cross_entropy, lm_logprob, train_ngram_lm
from crossmi.scoring import ScoreRecord, ScoreSet

rng = random.Random(0)
VOCAB = "the a cat dog bird sat ran flew on under tree mat".split()


def sentence():
    return [rng.choice(VOCAB) for _ in range(rng.randint(3, 9))]


train = [sentence() for _ in range(300)]
heldout = [sentence() for _ in range(50)]

lm = train_ngram_lm(train, order=3, smoothing="kn")

# per-sentence bits: every unit (including the end-of-sentence event) is scored
records = []
for i, s in enumerate(heldout):
    bits, n_units = lm_logprob(lm, s)
    records.append(ScoreRecord(i, n_units, bits))
    if i < 3:
        print(f"{' '.join(s):45} {bits:8.2f} bits over {n_units} units")

scores = ScoreSet(model_tag="kn3", direction=(None, "toy"), records=tuple(records))
ce = cross_entropy(scores)
print(f"\ncross-entropy: {ce.bits_per_sentence:.2f} bits/sentence "
      f"over {ce.n_sentences} sentences")

# unseen words never zero out under Kneser-Ney: they back off to the uniform base
bits, _ = lm_logprob(lm, ["a", "completely", "novel", "sentence"])
print(f"sentence with unseen words still scores finitely: {bits:.2f} bits")
