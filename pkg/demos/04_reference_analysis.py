"""Analyzing the 40-direction reference measurements
=====================================================

The packaged reference table holds published test scores for Europarl
translation between English and 20 languages.  This demo reproduces the
analysis layer on that table: the XMI identity, the XMI~BLEU correlation
where BLEU is comparable (fixed target side), and the two figures.
"""

from pathlib import Path

from crossmi import FeatureTable, bonferroni_threshold, correlate_features, pearson
from crossmi.datasets import PIVOT, europarl_reference, from_pivot_rows, into_pivot_rows
from crossmi.plots import render_scatter, render_stack

OUT = Path("demo-output")
OUT.mkdir(exist_ok=True)

rows = europarl_reference()
worst = max(abs(r.xmi - (r.h_lm - r.h_mt)) for r in rows)
print(f"XMI identity over 40 rows: worst |xmi - (h_lm - h_mt)| = {worst:.2f} bits")
print("(components were rounded independently, so up to 0.1 is expected)\n")

# XMI correlates with BLEU only where BLEU is comparable: fixed target side
for name, group in (("into", into_pivot_rows()), ("from", from_pivot_rows())):
    r, p = pearson([x.bleu for x in group], [x.xmi for x in group])
    print(f"XMI ~ BLEU, {name}-{PIVOT} directions: r = {r:+.3f} (p = {p:.2g})")

print(f"\nBonferroni level for 17 predictors: {bonferroni_threshold(0.05, 17):.4f}")

# correlate XMI against BLEU-as-a-feature through the analysis layer
table = FeatureTable()
for row in rows:
    table.set(row.direction, "bleu", row.bleu)
results = correlate_features(
    {r.direction: r.xmi for r in rows}, table,
    direction_filter="into_pivot", pivot=PIVOT,
)
res = results[0]
print(
    f"analysis layer agrees: r = {res.pearson_r:+.3f}, rho = {res.spearman_rho:+.3f}, "
    f"significant at 0.05: {res.significant_05}"
)

# figures: labeled scatter and the stacked decomposition of H_lm
into = into_pivot_rows()
svg = render_scatter(
    [r.bleu for r in into], [r.xmi for r in into], [r.src_lang for r in into],
    xlabel="BLEU", ylabel="XMI (bits/sentence)", title=f"into-{PIVOT} directions",
)
(OUT / "xmi_vs_bleu.svg").write_text(svg, encoding="utf-8")

frm = from_pivot_rows()
svg = render_stack(
    [r.h_mt for r in frm], [r.xmi for r in frm], [r.tgt_lang for r in frm],
    title=f"H_lm = H_mt + XMI, {PIVOT}->* directions",
)
(OUT / "stack_from_pivot.svg").write_text(svg, encoding="utf-8")
print(f"\nwrote {OUT}/xmi_vs_bleu.svg and {OUT}/stack_from_pivot.svg")
