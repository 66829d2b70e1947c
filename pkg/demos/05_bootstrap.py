"""Bootstrap confidence intervals for corpus metrics
=====================================================

Resampling sentences with replacement gives a sampling distribution for any
metric that decomposes into per-sentence sufficient statistics.  BLEU
resamples its clipped match counts, totals, and lengths; XMI resamples the
per-sentence log-probability gaps.
"""

import random

from crossmi import bleu_from_stats, bleu_sentence_stats, bootstrap_test

rng = random.Random(5)
VOCAB = "the a cat dog sat ran on mat tree bird".split()

# a noisy "system": references with some words replaced
references = [
    " ".join(rng.choice(VOCAB) for _ in range(rng.randint(5, 12))) for _ in range(150)
]
candidates = [
    " ".join(w if rng.random() > 0.25 else rng.choice(VOCAB) for w in ref.split())
    for ref in references
]

stats = bleu_sentence_stats(candidates, references)
result = bootstrap_test(stats, bleu_from_stats, n_replicates=1000, seed=11)
print(
    f"BLEU = {result.point_estimate:.2f}, replicate mean {result.replicate_mean:.2f}, "
    f"95% CI [{result.ci_low:.2f}, {result.ci_high:.2f}] "
    f"over {result.n_replicates} replicates"
)

# the interval narrows like 1/sqrt(n)
for n in (40, 150):
    part = bootstrap_test(stats[:n], bleu_from_stats, n_replicates=1000, seed=11)
    width = part.ci_high - part.ci_low
    print(f"  n={n:4d}: CI width {width:.2f}")

# same machinery for a mean-style metric (per-sentence XMI contributions)
gaps = [rng.gauss(8.0, 3.0) for _ in range(400)]
result = bootstrap_test(gaps, lambda g: sum(g) / len(g), n_replicates=1000, seed=11)
print(
    f"\nXMI = {result.point_estimate:.2f} bits/sentence, "
    f"95% CI [{result.ci_low:.2f}, {result.ci_high:.2f}]"
)
