"""The whole pipeline on a generated three-language corpus
===========================================================

Builds two toy languages aligned to a shared pivot, writes the raw files and
a declarative config, and runs every stage: prepare (intersection, length
filter, splits), joint BPE, builtin scoring, metrics, correlations,
bootstrap, and the report figures.  The same config drives the CLI:

    crossmi run --config demo-output/pipeline/config.json
"""

import json
import random
from pathlib import Path

from crossmi import RunConfig, run_pipeline

OUT = Path("demo-output") / "pipeline"
RAW = OUT / "raw"
RAW.mkdir(parents=True, exist_ok=True)

rng = random.Random(1)
PIVOT_VOCAB = [f"e{i}" for i in range(20)]
CONSONANTS = "bcdfgklmnprstvzbcdfg"
VOWELS = "aeiouaeiouaeiouaeiou"
# language aa translates word for word; bb is periphrastic, spending two
# words on a third of the vocabulary, so lengths and TTRs differ per pair
FORMS = {
    "aa": {
        w: f"{c}{v}n" for w, c, v in zip(PIVOT_VOCAB, CONSONANTS, VOWELS)
    },
    "bb": {
        w: (f"zu{c} go{v}" if i % 3 == 0 else f"zu{c}{v}")
        for i, (w, c, v) in enumerate(zip(PIVOT_VOCAB, CONSONANTS, VOWELS))
    },
}
# make the mappings injective despite the short alphabet
for lang, mapping in FORMS.items():
    seen = {}
    for w in PIVOT_VOCAB:
        form = mapping[w]
        while form in seen:
            form += "o"
        seen[form] = w
        mapping[w] = form

pivot_lines = [
    " ".join(rng.choice(PIVOT_VOCAB) for _ in range(rng.randint(3, 8)))
    for _ in range(240)
]
corpora = {}
for lang in ("aa", "bb"):
    lang_lines = [" ".join(FORMS[lang][w] for w in l.split()) for l in pivot_lines]
    (RAW / f"{lang}.txt").write_text("\n".join(lang_lines) + "\n", encoding="utf-8")
    (RAW / f"{lang}.en.txt").write_text("\n".join(pivot_lines) + "\n", encoding="utf-8")
    corpora[lang] = {
        "lang_file": str(RAW / f"{lang}.txt"),
        "pivot_file": str(RAW / f"{lang}.en.txt"),
    }

config = RunConfig(
    pivot="en",
    corpora=corpora,
    n_valid=20,
    n_test=50,
    split_seed=3,
    bpe_merges=300,
    lm_order=2,
    mix_lambda=0.5,
    bootstrap_replicates=300,
    output_dir=str(OUT / "run"),
    seed=9,
)
(OUT / "config.json").write_text(config.to_json(), encoding="utf-8")

result = run_pipeline(config)

print(f"config hash: {config.config_hash()}\n")
print(f"{'direction':10} {'H_lm':>8} {'H_mt':>8} {'XMI':>8}")
for report in result.reports:
    print(
        f"{report.direction:10} {report.h_lm:8.2f} {report.h_mt:8.2f} "
        f"{report.xmi:8.2f}"
    )

print("\nbootstrap 95% intervals for XMI:")
for direction, by_metric in result.bootstraps.items():
    ci = by_metric["xmi"]
    print(f"  {direction:10} [{ci.ci_low:6.2f}, {ci.ci_high:6.2f}]")

stats = json.loads((OUT / "run" / "prepare" / "stats.json").read_text())
print(f"\nprepared sizes: {stats['splits']}")
print(f"artifacts under {OUT / 'run'}")
