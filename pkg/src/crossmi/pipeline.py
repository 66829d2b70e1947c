"""End-to-end orchestration: raw corpora or score files in, reports out.

A run is described by one declarative RunConfig.  Stages (prepare, bpe,
score, metrics, correlate, bootstrap, report) each read their inputs from and
persist their outputs under the run's output directory, so any stage can be
re-run independently and externally produced score files can enter the
pipeline between `bpe` and `metrics`.  Every artifact embeds the config hash;
equal hashes reproduce byte-identical numeric outputs.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import analysis, bpe, corpus, metrics, plots, scoring
from .errors import PipelineError, ValidationError

logger = logging.getLogger(__name__)

STAGES = ("prepare", "bpe", "score", "metrics", "correlate", "bootstrap", "report")


@dataclass
class RunConfig:
    """Everything a run needs; serialized into every output for provenance."""

    pivot: str
    # lang -> {"lang_file": path, "pivot_file": path}, line-aligned text files
    corpora: dict[str, dict[str, str]] = field(default_factory=dict)
    n_valid: int = 0
    n_test: int = 0
    split_seed: int = 0
    max_len: int = 80
    bpe_merges: int = 16000
    directions: str = "both"  # "both" | "into_pivot" | "from_pivot"
    scorer: str = "builtin"  # "builtin" | "score-files"
    # direction ("src->tgt") -> {"lm": path, "mt": path}; used when scorer="score-files"
    score_files: dict[str, dict[str, str]] = field(default_factory=dict)
    lm_order: int = 3
    lm_smoothing: str = "kn"
    mix_lambda: float = 0.5
    em_iterations: int = 5
    bleu_case: str = "mixed"
    bleu_tokenizer: str = "13a"
    bleu_smoothing: str = "exp"
    # direction -> path of candidate translations (one per test sentence)
    candidates: dict[str, str] = field(default_factory=dict)
    # direction -> path of reference translations; defaults to the prepared test side
    references: dict[str, str] = field(default_factory=dict)
    feature_tables: list[str] = field(default_factory=list)
    bootstrap_replicates: int = 1000
    # >0 additionally bootstraps the TRAINING set (retraining the desk-scale
    # scorers per replicate); builtin scorer only
    train_bootstrap_replicates: int = 0
    output_dir: str = "crossmi-out"
    seed: int = 0

    def bleu_config(self) -> metrics.BleuConfig:
        return metrics.BleuConfig(
            case=self.bleu_case,
            tokenizer=self.bleu_tokenizer,
            smoothing=self.bleu_smoothing,
        )

    def validate(self) -> None:
        if not self.pivot:
            raise ValidationError("pivot language is required")
        if self.scorer not in ("builtin", "score-files"):
            raise ValidationError(f"unknown scorer {self.scorer!r}")
        if self.directions not in ("both", "into_pivot", "from_pivot"):
            raise ValidationError(f"unknown directions {self.directions!r}")
        if self.scorer == "builtin" and not self.corpora:
            raise ValidationError("builtin scorer needs corpora")
        if self.scorer == "score-files" and not self.score_files:
            raise ValidationError("score-files scorer needs score_files")
        if self.train_bootstrap_replicates > 0 and self.scorer != "builtin":
            raise ValidationError(
                "train-set bootstrap retrains the builtin scorers; it is not "
                "available with external score files"
            )
        for lang, files in self.corpora.items():
            for key in ("lang_file", "pivot_file"):
                if key not in files:
                    raise ValidationError(f"corpus {lang!r}: missing {key}")
                if not Path(files[key]).exists():
                    raise ValidationError(f"corpus {lang!r}: {files[key]} not found")
        self.bleu_config()  # validates the three BLEU fields

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        if "pivot" not in data:
            raise ValidationError("config is missing 'pivot'")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def config_hash(self) -> str:
        """Hash of everything that shapes the numbers (output_dir is excluded:
        equal hashes must mean bit-identical numeric outputs, wherever they
        land)."""
        fields = asdict(self)
        fields.pop("output_dir")
        canonical = json.dumps(fields, sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


@dataclass
class PipelineResult:
    reports: list[metrics.MetricReport]
    correlations: dict[str, list[analysis.CorrelationResult]]
    bootstraps: dict[str, dict[str, analysis.BootstrapResult]]


# ---------------------------------------------------------------------------
# helpers


def _out(config: RunConfig, *parts) -> Path:
    path = Path(config.output_dir).joinpath(*parts)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _direction_pairs(config: RunConfig) -> list[tuple[str, str]]:
    """(src, tgt) per evaluated direction.

    Builtin runs evaluate every configured language against the pivot (per
    the directions filter); score-file runs evaluate exactly the directions
    that have score files, filtered the same way.
    """

    def wanted(src: str, tgt: str) -> bool:
        if config.directions == "into_pivot":
            return tgt == config.pivot
        if config.directions == "from_pivot":
            return src == config.pivot
        return True

    if config.scorer == "score-files":
        pairs = [_split_direction(d) for d in sorted(config.score_files)]
        return [(src, tgt) for src, tgt in pairs if wanted(src, tgt)]
    dirs = []
    for lang in sorted(config.corpora):
        if wanted(lang, config.pivot):
            dirs.append((lang, config.pivot))
        if wanted(config.pivot, lang):
            dirs.append((config.pivot, lang))
    return dirs


def _split_direction(direction: str) -> tuple[str, str]:
    if "->" not in direction:
        raise ValidationError(f"malformed direction {direction!r}")
    src, tgt = direction.split("->", 1)
    return src, tgt


def _split_paths(config: RunConfig, lang: str, split: str) -> tuple[Path, Path]:
    base = Path(config.output_dir) / "prepare" / lang
    return base / f"{split}.{lang}.txt", base / f"{split}.{config.pivot}.txt"


def _load_split(config: RunConfig, lang: str, split: str) -> corpus.ParallelCorpus:
    lang_file, pivot_file = _split_paths(config, lang, split)
    if not lang_file.exists():
        raise ValidationError(
            f"missing prepared split {lang_file}; run the prepare stage first"
        )
    return corpus.read_parallel(lang_file, pivot_file, lang, config.pivot)


def _write_hashed_tsv(path: Path, body: str, config: RunConfig) -> None:
    path.write_text(f"# config_hash: {config.config_hash()}\n" + body, encoding="utf-8")


# ---------------------------------------------------------------------------
# stages


def stage_prepare(config: RunConfig) -> dict:
    """Read raw corpora, intersect on the pivot, filter, split, persist."""
    raw = {
        lang: corpus.read_parallel(
            files["lang_file"], files["pivot_file"], lang, config.pivot
        )
        for lang, files in sorted(config.corpora.items())
    }
    prepared, stats = corpus.prepare_multiway(raw, config.pivot, config.max_len)
    spec = corpus.SplitSpec(
        n_valid=config.n_valid, n_test=config.n_test, seed=config.split_seed
    )
    sizes = {}
    for lang, pair_corpus in prepared.items():
        train, valid, test = corpus.make_splits(pair_corpus, spec)
        for split, part in (("train", train), ("valid", valid), ("test", test)):
            lang_file, pivot_file = _split_paths(config, lang, split)
            lang_file.parent.mkdir(parents=True, exist_ok=True)
            corpus.write_corpus_side(lang_file, part.side(lang))
            corpus.write_corpus_side(pivot_file, part.side(config.pivot))
        manifest = corpus.split_manifest(spec, train, valid, test)
        manifest["config_hash"] = config.config_hash()
        corpus.write_split_manifest(
            Path(config.output_dir) / "prepare" / lang / "manifest.json", manifest
        )
        sizes[lang] = {"train": len(train), "valid": len(valid), "test": len(test)}
    stats["splits"] = sizes
    stats["config_hash"] = config.config_hash()
    _out(config, "prepare", "stats.json").write_text(
        json.dumps(stats, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return stats


def stage_bpe(config: RunConfig) -> dict[str, bpe.BpeModel]:
    """Train one joint BPE model per language pair on its train split."""
    models = {}
    for lang in sorted(config.corpora):
        train = _load_split(config, lang, "train")
        model = bpe.bpe_train(
            [
                corpus.corpus_token_sequences(train.side(lang)),
                corpus.corpus_token_sequences(train.side(config.pivot)),
            ],
            n_merges=config.bpe_merges,
        )
        bpe.save_bpe(
            model,
            _out(config, "bpe", f"{lang}.bpe"),
            extra_meta={"config_hash": config.config_hash()},
        )
        models[lang] = model
    return models


def _score_path(config: RunConfig, src: str, tgt: str, kind: str) -> Path:
    return _out(config, "scores", f"{src}-{tgt}.{kind}.tsv")


def _encode_side(model: bpe.BpeModel, sentences) -> list[list[str]]:
    return [list(bpe.bpe_encode(model, s.tokens)) for s in sentences]


def stage_score(config: RunConfig) -> None:
    """Builtin mode: train desk-scale scorers and score the test split.

    Score-files mode: validate the configured external files and never touch
    the trainers.
    """
    if config.scorer == "score-files":
        for direction, files in sorted(config.score_files.items()):
            for kind in ("lm", "mt"):
                if kind not in files:
                    raise ValidationError(f"{direction}: missing {kind} score file")
                scoring.read_scores(files[kind])  # validates schema + invariants
        return

    langs = sorted(config.corpora)
    meta = {"config_hash": config.config_hash()}
    models = {
        lang: bpe.load_bpe(Path(config.output_dir) / "bpe" / f"{lang}.bpe")
        for lang in langs
    }

    # One pivot-side LM shared by every into-pivot direction, trained with the
    # first pair's joint vocabulary (the pivot has no pair of its own).
    first = langs[0]
    first_train = _load_split(config, first, "train")
    pivot_lm = scoring.train_ngram_lm(
        _encode_side(models[first], first_train.side(config.pivot)),
        order=config.lm_order,
        smoothing=config.lm_smoothing,
    )
    first_test = _load_split(config, first, "test")
    pivot_test_units = _encode_side(models[first], first_test.side(config.pivot))

    for lang in langs:
        model = models[lang]
        train = _load_split(config, lang, "train")
        test = _load_split(config, lang, "test")
        train_lang = _encode_side(model, train.side(lang))
        train_piv = _encode_side(model, train.side(config.pivot))
        test_lang = _encode_side(model, test.side(lang))
        test_piv = _encode_side(model, test.side(config.pivot))
        ids = [s.id for s in test.side(lang)]

        if config.directions in ("both", "into_pivot"):
            # lang -> pivot: shared pivot LM vs pair-trained mixture
            mt = scoring.LexMixtureMt(
                lm=scoring.train_ngram_lm(
                    train_piv, order=config.lm_order, smoothing=config.lm_smoothing
                ),
                table=scoring.train_lex_table(
                    zip(train_lang, train_piv), iterations=config.em_iterations
                ),
                mix_lambda=config.mix_lambda,
            )
            lm_set = scoring.score_sentences_lm(
                pivot_lm,
                zip(ids, pivot_test_units),
                model_tag=f"{config.lm_smoothing}{config.lm_order}-lm",
                tgt_lang=config.pivot,
            )
            mt_set = scoring.score_sentences_mt(
                mt,
                zip(ids, test_piv, test_lang),
                model_tag=f"lexmix-{config.mix_lambda}",
                src_lang=lang,
                tgt_lang=config.pivot,
            )
            scoring.write_scores(
                lm_set, _score_path(config, lang, config.pivot, "lm"), extra_meta=meta
            )
            scoring.write_scores(
                mt_set, _score_path(config, lang, config.pivot, "mt"), extra_meta=meta
            )

        if config.directions in ("both", "from_pivot"):
            lang_lm = scoring.train_ngram_lm(
                train_lang, order=config.lm_order, smoothing=config.lm_smoothing
            )
            mt = scoring.LexMixtureMt(
                lm=lang_lm,
                table=scoring.train_lex_table(
                    zip(train_piv, train_lang), iterations=config.em_iterations
                ),
                mix_lambda=config.mix_lambda,
            )
            lm_set = scoring.score_sentences_lm(
                lang_lm,
                zip(ids, test_lang),
                model_tag=f"{config.lm_smoothing}{config.lm_order}-lm",
                tgt_lang=lang,
            )
            mt_set = scoring.score_sentences_mt(
                mt,
                zip(ids, test_lang, test_piv),
                model_tag=f"lexmix-{config.mix_lambda}",
                src_lang=config.pivot,
                tgt_lang=lang,
            )
            scoring.write_scores(
                lm_set, _score_path(config, config.pivot, lang, "lm"), extra_meta=meta
            )
            scoring.write_scores(
                mt_set, _score_path(config, config.pivot, lang, "mt"), extra_meta=meta
            )


def _score_files_for(config: RunConfig, src: str, tgt: str) -> tuple[Path, Path]:
    direction = f"{src}->{tgt}"
    if config.scorer == "score-files":
        files = config.score_files.get(direction)
        if files is None:
            raise ValidationError(f"no score files configured for {direction}")
        return Path(files["lm"]), Path(files["mt"])
    return (
        _score_path(config, src, tgt, "lm"),
        _score_path(config, src, tgt, "mt"),
    )


def _references_for(config: RunConfig, src: str, tgt: str) -> list[str] | None:
    direction = f"{src}->{tgt}"
    if direction in config.references:
        return Path(config.references[direction]).read_text("utf-8").splitlines()
    lang = tgt if src == config.pivot else src
    tgt_file = _split_paths(config, lang, "test")[0 if tgt == lang else 1]
    if tgt_file.exists():
        return tgt_file.read_text("utf-8").splitlines()
    return None


def stage_metrics(config: RunConfig) -> list[metrics.MetricReport]:
    """Cross-entropies, XMI, and (when candidates exist) BLEU per direction."""
    bleu_config = config.bleu_config()
    reports = []
    for src, tgt in _direction_pairs(config):
        lm_path, mt_path = _score_files_for(config, src, tgt)
        lm_set = scoring.read_scores(lm_path)
        mt_set = scoring.read_scores(mt_path)
        result = metrics.xmi(lm_set, mt_set)
        bleu_score = None
        direction = f"{src}->{tgt}"
        if direction in config.candidates:
            candidates = (
                Path(config.candidates[direction]).read_text("utf-8").splitlines()
            )
            references = _references_for(config, src, tgt)
            if references is None:
                raise ValidationError(
                    f"{direction}: candidates given but no references available"
                )
            bleu_score = metrics.bleu(candidates, references, bleu_config)
        reports.append(metrics.MetricReport.build(src, tgt, result, bleu_score))

    _write_hashed_tsv(
        _out(config, "metrics", "report.tsv"),
        metrics.reports_to_tsv(reports, bleu_config),
        config,
    )
    _out(config, "metrics", "report.json").write_text(
        json.dumps(
            {
                "config_hash": config.config_hash(),
                "bleu_signature": bleu_config.signature(),
                "reports": metrics.reports_to_json(reports),
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    return reports


def _load_reports(config: RunConfig) -> list[metrics.MetricReport]:
    path = Path(config.output_dir) / "metrics" / "report.json"
    if not path.exists():
        raise ValidationError(f"missing {path}; run the metrics stage first")
    data = json.loads(path.read_text(encoding="utf-8"))
    return [
        metrics.MetricReport(
            src_lang=row["src_lang"],
            tgt_lang=row["tgt_lang"],
            h_lm=row["h_lm"],
            h_mt=row["h_mt"],
            xmi=row["xmi"],
            bleu=row["bleu"],
            n_sentences=row["n_sentences"],
        )
        for row in data["reports"]
    ]


def stage_correlate(config: RunConfig) -> dict[str, list[analysis.CorrelationResult]]:
    """Assemble the feature table (computed + ingested) and correlate with XMI."""
    reports = _load_reports(config)
    xmi_by_direction = {r.direction: r.xmi for r in reports}

    table = analysis.FeatureTable()
    if config.scorer == "builtin" and config.corpora:
        for src, tgt in _direction_pairs(config):
            lang = tgt if src == config.pivot else src
            train = _load_split(config, lang, "train")
            computed = analysis.compute_data_features(
                corpus.corpus_token_sequences(train.side(src)),
                corpus.corpus_token_sequences(train.side(tgt)),
            )
            for feature, value in computed.items():
                table.set(f"{src}->{tgt}", feature, value)
    for path in config.feature_tables:
        table.merge(analysis.read_feature_csv(path))
    analysis.write_feature_csv(table, _out(config, "analysis", "features.csv"))

    filters = {"both": None}
    if config.directions in ("both", "into_pivot"):
        filters["into_pivot"] = config.pivot
    if config.directions in ("both", "from_pivot"):
        filters["from_pivot"] = config.pivot
    out: dict[str, list[analysis.CorrelationResult]] = {}
    for name in filters:
        results = analysis.correlate_features(
            xmi_by_direction, table, direction_filter=name, pivot=config.pivot
        )
        out[name] = results
        _write_hashed_tsv(
            _out(config, "analysis", f"correlations_{name}.tsv"),
            analysis.correlations_to_tsv(results, extra_meta={"filter": name}),
            config,
        )
    return out


def train_bootstrap_xmi(
    train_pairs,
    test_pairs,
    order: int = 3,
    smoothing: str = "kn",
    em_iterations: int = 5,
    mix_lambda: float = 0.5,
    n_replicates: int = 100,
    seed: int = 0,
) -> analysis.BootstrapResult:
    """Bootstrap over the TRAINING set for the desk-scale scorers.

    Each replicate resamples training sentence pairs with replacement,
    retrains the target-side model and the lexical mixture on the resampled
    units (segmentation stays fixed), and recomputes XMI on the unchanged
    test pairs.  Only the builtin scorers support this; external checkpoints
    cannot be retrained here.
    """
    train_pairs = [(tuple(s), tuple(t)) for s, t in train_pairs]
    test_pairs = [(tuple(s), tuple(t)) for s, t in test_pairs]

    def metric(sample):
        lm = scoring.train_ngram_lm(
            [t for _, t in sample], order=order, smoothing=smoothing
        )
        mt = scoring.LexMixtureMt(
            lm=lm,
            table=scoring.train_lex_table(sample, iterations=em_iterations),
            mix_lambda=mix_lambda,
        )
        gaps = []
        for src, tgt in test_pairs:
            lm_bits, _ = scoring.lm_logprob(lm, tgt)
            mt_bits, _ = scoring.mt_logprob(mt, tgt, src)
            gaps.append(mt_bits - lm_bits)
        return sum(gaps) / len(gaps)

    return analysis.bootstrap_test(
        train_pairs, metric, n_replicates=n_replicates, seed=seed
    )


def stage_bootstrap(config: RunConfig) -> dict[str, dict[str, analysis.BootstrapResult]]:
    """95% bootstrap intervals for XMI (and BLEU where candidates exist)."""
    bleu_config = config.bleu_config()
    out: dict[str, dict[str, analysis.BootstrapResult]] = {}
    lines = ["\t".join(
        ["direction", "metric", "point", "replicate_mean", "ci_low", "ci_high", "n"]
    )]
    for idx, (src, tgt) in enumerate(_direction_pairs(config)):
        direction = f"{src}->{tgt}"
        lm_path, mt_path = _score_files_for(config, src, tgt)
        lm_by_id = scoring.read_scores(lm_path).by_id()
        mt_by_id = scoring.read_scores(mt_path).by_id()
        ids = sorted(lm_by_id)
        # XMI = mean over sentences of (mt_bits - lm_bits)
        gaps = [mt_by_id[i].logprob_bits - lm_by_id[i].logprob_bits for i in ids]
        result = analysis.bootstrap_test(
            gaps,
            lambda g: sum(g) / len(g),
            n_replicates=config.bootstrap_replicates,
            seed=config.seed + idx,
        )
        out.setdefault(direction, {})["xmi"] = result
        lines.append(
            "\t".join(
                [
                    direction, "xmi", repr(result.point_estimate),
                    repr(result.replicate_mean), repr(result.ci_low),
                    repr(result.ci_high), str(result.n_replicates),
                ]
            )
        )
        if direction in config.candidates:
            candidates = (
                Path(config.candidates[direction]).read_text("utf-8").splitlines()
            )
            references = _references_for(config, src, tgt)
            stats = metrics.bleu_sentence_stats(candidates, references, bleu_config)
            result = analysis.bootstrap_test(
                stats,
                lambda s: metrics.bleu_from_stats(s, bleu_config),
                n_replicates=config.bootstrap_replicates,
                seed=config.seed + idx,
            )
            out[direction]["bleu"] = result
            lines.append(
                "\t".join(
                    [
                        direction, "bleu", repr(result.point_estimate),
                        repr(result.replicate_mean), repr(result.ci_low),
                        repr(result.ci_high), str(result.n_replicates),
                    ]
                )
            )
        if config.train_bootstrap_replicates > 0:
            lang = tgt if src == config.pivot else src
            model = bpe.load_bpe(Path(config.output_dir) / "bpe" / f"{lang}.bpe")
            train = _load_split(config, lang, "train")
            test = _load_split(config, lang, "test")
            train_units = {
                side: _encode_side(model, train.side(side))
                for side in (src, tgt)
            }
            test_units = {
                side: _encode_side(model, test.side(side)) for side in (src, tgt)
            }
            result = train_bootstrap_xmi(
                list(zip(train_units[src], train_units[tgt])),
                list(zip(test_units[src], test_units[tgt])),
                order=config.lm_order,
                smoothing=config.lm_smoothing,
                em_iterations=config.em_iterations,
                mix_lambda=config.mix_lambda,
                n_replicates=config.train_bootstrap_replicates,
                seed=config.seed + idx,
            )
            out[direction]["xmi_train"] = result
            lines.append(
                "\t".join(
                    [
                        direction, "xmi_train", repr(result.point_estimate),
                        repr(result.replicate_mean), repr(result.ci_low),
                        repr(result.ci_high), str(result.n_replicates),
                    ]
                )
            )
    _write_hashed_tsv(
        _out(config, "analysis", "bootstrap.tsv"), "\n".join(lines) + "\n", config
    )
    return out


def stage_report(config: RunConfig) -> None:
    """Scatter and stacked-bar documents plus their TSV twins."""
    reports = _load_reports(config)
    groups = {
        "into_pivot": [r for r in reports if r.tgt_lang == config.pivot],
        "from_pivot": [r for r in reports if r.src_lang == config.pivot],
    }
    for name, rows in groups.items():
        if not rows:
            continue
        labels = [
            r.src_lang if r.tgt_lang == config.pivot else r.tgt_lang for r in rows
        ]
        with_bleu = [
            (r, lab) for r, lab in zip(rows, labels) if r.bleu is not None
        ]
        if with_bleu:
            xs = [r.bleu for r, _ in with_bleu]
            ys = [r.xmi for r, _ in with_bleu]
            labs = [lab for _, lab in with_bleu]
            svg = plots.render_scatter(
                xs, ys, labs, xlabel="BLEU", ylabel="XMI (bits/sentence)",
                title=f"XMI vs BLEU ({name})",
            )
            _out(config, "plots", f"xmi_vs_bleu_{name}.svg").write_text(
                svg, encoding="utf-8"
            )
            _write_hashed_tsv(
                _out(config, "plots", f"xmi_vs_bleu_{name}.tsv"),
                plots.scatter_tsv(xs, ys, labs, xname="bleu", yname="xmi"),
                config,
            )
        try:
            svg = plots.render_stack(
                [r.h_mt for r in rows],
                [r.xmi for r in rows],
                labels,
                title=f"cross-entropy decomposition ({name})",
            )
        except ValidationError as exc:
            logger.warning("stack plot for %s skipped: %s", name, exc)
        else:
            _out(config, "plots", f"stack_{name}.svg").write_text(svg, "utf-8")
            _write_hashed_tsv(
                _out(config, "plots", f"stack_{name}.tsv"),
                plots.stack_tsv([r.h_mt for r in rows], [r.xmi for r in rows], labels),
                config,
            )


# ---------------------------------------------------------------------------
# the whole run


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Execute every stage in order; any stage error aborts with its stage name."""
    config.validate()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(
        json.dumps(
            {"config_hash": config.config_hash(), "config": json.loads(config.to_json())},
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )

    def run_stage(name, fn):
        try:
            return fn(config)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(name, exc) from exc

    if config.scorer == "builtin":
        run_stage("prepare", stage_prepare)
        run_stage("bpe", stage_bpe)
    elif config.corpora:
        run_stage("prepare", stage_prepare)
    run_stage("score", stage_score)
    reports = run_stage("metrics", stage_metrics)
    correlations = run_stage("correlate", stage_correlate)
    bootstraps = run_stage("bootstrap", stage_bootstrap)
    run_stage("report", stage_report)
    return PipelineResult(
        reports=reports, correlations=correlations, bootstraps=bootstraps
    )
