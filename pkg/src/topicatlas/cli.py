"""Pipeline orchestration: config file in, staged artifacts out.

Each stage reads its predecessor's JSON artifact from the output directory
and writes its own, so runs are resumable stage by stage. A manifest records
the config hash and artifact checksums; a stage whose config, inputs and
outputs are all unchanged is skipped.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import corpus as corpus_mod
from . import export as export_mod
from . import layout as layout_mod
from . import textprep as textprep_mod
from . import trends as trends_mod
from .cluster import agglomerate, cosine_distance_matrix
from .corpus import DEFAULT_DATE_FORMATS, ingest
from .hierarchy import TopicHierarchy, build_hierarchy, display_label, topic_weight
from .lda import Hyperparams, TopicModel, model_from_dict, model_to_dict, train
from .layout import BubbleMap, layout_map, render_svg
from .textprep import PreprocessOptions, preprocess

log = logging.getLogger(__name__)

STAGES = ("ingest", "preprocess", "train", "hierarchy", "trends", "layout", "export")

_STAGE_ARTIFACTS = {
    "ingest": ("corpus.json",),
    "preprocess": ("tokenized.json",),
    "train": ("model_main.json", "model_sub.json"),
    "hierarchy": ("hierarchy.json",),
    "trends": ("trends.json",),
    "layout": ("maps.json",),
    "export": ("atlas.json",),
}
_ARTIFACT_STAGE = {name: stage for stage, names in _STAGE_ARTIFACTS.items() for name in names}
_STAGE_INPUTS = {
    "ingest": (),
    "preprocess": ("corpus.json",),
    "train": ("tokenized.json", "corpus.json"),
    "hierarchy": ("model_main.json", "model_sub.json"),
    "trends": ("model_main.json", "model_sub.json", "corpus.json"),
    "layout": ("model_main.json", "model_sub.json", "hierarchy.json"),
    "export": (
        "corpus.json", "tokenized.json", "model_main.json", "model_sub.json",
        "hierarchy.json", "trends.json", "maps.json",
    ),
}


class ConfigError(Exception):
    """Config file cannot be parsed or validated (exit code 1)."""


class PipelineError(Exception):
    """A stage failed or its prerequisites are missing (exit code 2)."""


# ---------- configuration ----------

@dataclass
class InputConfig:
    path: str
    format: str = "csv"
    mapping: dict = field(default_factory=lambda: {"id": "id", "title": "title"})
    date_formats: tuple = DEFAULT_DATE_FORMATS


@dataclass
class TextprepConfig:
    stopwords: str | None = None  # None -> bundled list
    lemmas: str | None = None     # None -> bundled table
    min_token_len: int = 3
    min_df: int = 3
    max_df_fraction: float = 0.9
    min_tokens: int = 5


@dataclass
class TrendConfig:
    binning: str = "auto"  # auto | day | week | month
    exclude_dates: tuple = ()
    include_sentinels: bool = False


@dataclass
class LayoutConfig:
    padding_fraction: float = 0.04
    n_angles: int = 64
    max_sub_clusters: int = 4
    svg: bool = False


@dataclass
class PipelineConfig:
    input: InputConfig
    main_model: Hyperparams
    sub_model: Hyperparams
    n_clusters_main: int
    output_dir: str
    textprep: TextprepConfig = field(default_factory=TextprepConfig)
    trends: TrendConfig = field(default_factory=TrendConfig)
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    source_label: str | None = None

    def to_canonical(self) -> dict:
        return {
            "input": {
                "path": self.input.path,
                "format": self.input.format,
                "mapping": dict(sorted(self.input.mapping.items())),
                "date_formats": list(self.input.date_formats),
            },
            "textprep": vars(self.textprep),
            "main_model": vars(self.main_model),
            "sub_model": vars(self.sub_model),
            "n_clusters_main": self.n_clusters_main,
            "trends": {**vars(self.trends), "exclude_dates": list(self.trends.exclude_dates)},
            "layout": vars(self.layout),
            "output_dir": self.output_dir,
            "source_label": self.source_label,
        }

    def hash(self) -> str:
        canon = json.dumps(self.to_canonical(), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _section(raw: dict, name: str, allowed: set[str], errors: list[str]) -> dict:
    data = raw.get(name) or {}
    if not isinstance(data, dict):
        errors.append(f"{name}: expected a mapping")
        return {}
    unknown = set(data) - allowed
    for key in sorted(unknown):
        errors.append(f"{name}.{key}: unknown key")
    return {k: v for k, v in data.items() if k in allowed}


def _model_config(raw: dict, name: str, errors: list[str]) -> Hyperparams | None:
    allowed = {"k", "alpha", "beta", "iterations", "burn_in", "seed"}
    data = _section(raw, name, allowed, errors)
    if "k" not in data:
        errors.append(f"{name}.k: required")
        return None
    try:
        return Hyperparams(**data)
    except Exception as exc:
        errors.append(f"{name}: {exc}")
        return None


def load_config(path: str | Path) -> PipelineConfig:
    """Parse and validate a YAML pipeline config; unknown keys are errors and
    every violated field is reported."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a YAML mapping")

    errors: list[str] = []
    top_allowed = {
        "input", "textprep", "main_model", "sub_model", "n_clusters_main",
        "trends", "layout", "output_dir", "source_label",
    }
    for key in sorted(set(raw) - top_allowed):
        errors.append(f"{key}: unknown key")

    input_data = _section(raw, "input", {"path", "format", "mapping", "date_formats"}, errors)
    if "path" not in input_data:
        errors.append("input.path: required")
    if input_data.get("format", "csv") not in ("csv", "jsonl"):
        errors.append(f"input.format: must be 'csv' or 'jsonl', got {input_data.get('format')!r}")
    mapping = input_data.get("mapping", {"id": "id", "title": "title"})
    if not isinstance(mapping, dict):
        errors.append("input.mapping: expected a mapping")
        mapping = {}
    for required in ("id", "title"):
        if required not in mapping:
            errors.append(f"input.mapping.{required}: required")
    for key in sorted(set(mapping) - {"id", "title", "abstract", "date"}):
        errors.append(f"input.mapping.{key}: unknown key")

    textprep_data = _section(
        raw, "textprep",
        {"stopwords", "lemmas", "min_token_len", "min_df", "max_df_fraction", "min_tokens"},
        errors,
    )
    main_model = _model_config(raw, "main_model", errors)
    sub_model = _model_config(raw, "sub_model", errors)
    if main_model and sub_model and sub_model.k <= main_model.k:
        errors.append(
            f"sub_model.k: must exceed main_model.k (coarse-to-fine hierarchy), "
            f"got sub={sub_model.k} main={main_model.k}"
        )

    n_clusters_main = raw.get("n_clusters_main")
    if not isinstance(n_clusters_main, int) or n_clusters_main < 1:
        errors.append("n_clusters_main: required positive integer")
    elif main_model and n_clusters_main > main_model.k:
        errors.append(
            f"n_clusters_main: cannot exceed main_model.k, got {n_clusters_main} > {main_model.k}"
        )

    trend_data = _section(raw, "trends", {"binning", "exclude_dates", "include_sentinels"}, errors)
    if trend_data.get("binning", "auto") not in ("auto",) + trends_mod.BINNINGS:
        errors.append(f"trends.binning: must be auto/day/week/month, got {trend_data.get('binning')!r}")

    layout_data = _section(
        raw, "layout", {"padding_fraction", "n_angles", "max_sub_clusters", "svg"}, errors
    )

    output_dir = raw.get("output_dir")
    if not isinstance(output_dir, str) or not output_dir:
        errors.append("output_dir: required string")

    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(errors))

    return PipelineConfig(
        input=InputConfig(
            path=input_data["path"],
            format=input_data.get("format", "csv"),
            mapping=mapping,
            date_formats=tuple(input_data.get("date_formats", DEFAULT_DATE_FORMATS)),
        ),
        textprep=TextprepConfig(**textprep_data),
        main_model=main_model,
        sub_model=sub_model,
        n_clusters_main=n_clusters_main,
        trends=TrendConfig(
            binning=trend_data.get("binning", "auto"),
            exclude_dates=tuple(trend_data.get("exclude_dates", ())),
            include_sentinels=trend_data.get("include_sentinels", False),
        ),
        layout=LayoutConfig(**layout_data),
        output_dir=output_dir,
        source_label=raw.get("source_label"),
    )


# ---------- artifacts & manifest ----------

def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    path.write_text(text + "\n", encoding="utf-8")


def _read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _require(out_dir: Path, artifact: str) -> Path:
    path = out_dir / artifact
    if not path.is_file():
        stage = _ARTIFACT_STAGE[artifact]
        raise PipelineError(f"missing artifact {artifact}; run stage {stage!r} first")
    return path


class _Manifest:
    def __init__(self, out_dir: Path, config_hash: str):
        self.path = out_dir / "manifest.json"
        self.config_hash = config_hash
        self.data = {"config_hash": config_hash, "stages": {}}
        if self.path.is_file():
            try:
                previous = _read_json(self.path)
                if previous.get("config_hash") == config_hash:
                    self.data = previous
            except (json.JSONDecodeError, OSError):
                pass

    def up_to_date(self, out_dir: Path, stage: str) -> bool:
        entry = self.data["stages"].get(stage)
        if not entry:
            return False
        for name, digest in entry.get("inputs", {}).items():
            path = out_dir / name
            if not path.is_file() or _sha256(path) != digest:
                return False
        for name, digest in entry.get("artifacts", {}).items():
            path = out_dir / name
            if not path.is_file() or _sha256(path) != digest:
                return False
        return True

    def record(self, out_dir: Path, stage: str) -> None:
        self.data["stages"][stage] = {
            "inputs": {name: _sha256(out_dir / name) for name in _STAGE_INPUTS[stage]
                       if (out_dir / name).is_file()},
            "artifacts": {name: _sha256(out_dir / name) for name in _STAGE_ARTIFACTS[stage]},
        }
        _write_json(self.path, self.data)


# ---------- stages ----------

def _preprocess_options(cfg: PipelineConfig) -> PreprocessOptions:
    stopwords = (
        textprep_mod.load_stopwords(cfg.textprep.stopwords)
        if cfg.textprep.stopwords
        else textprep_mod.bundled_stopwords()
    )
    lemmas = (
        textprep_mod.load_lemma_table(cfg.textprep.lemmas)
        if cfg.textprep.lemmas
        else textprep_mod.bundled_lemma_table()
    )
    return PreprocessOptions(
        stopwords=stopwords,
        lemmas=lemmas,
        min_token_len=cfg.textprep.min_token_len,
        min_df=cfg.textprep.min_df,
        max_df_fraction=cfg.textprep.max_df_fraction,
        min_tokens=cfg.textprep.min_tokens,
    )


def _stage_ingest(cfg: PipelineConfig, out_dir: Path) -> None:
    corpus = ingest(
        cfg.input.path, cfg.input.format, cfg.input.mapping,
        date_formats=cfg.input.date_formats, source_label=cfg.source_label,
    )
    log.info(
        "ingested %d documents (%d dateless, %d bare-year)",
        corpus.report.rows, corpus.report.dateless, corpus.report.sentinel_dates,
    )
    _write_json(out_dir / "corpus.json", corpus_mod.corpus_to_dict(corpus))


def _stage_preprocess(cfg: PipelineConfig, out_dir: Path) -> None:
    corpus = corpus_mod.corpus_from_dict(_read_json(_require(out_dir, "corpus.json")))
    tc = preprocess(corpus, _preprocess_options(cfg))
    log.info(
        "tokenized %d/%d documents, vocabulary %d terms, %d tokens",
        len(tc.docs), len(corpus.documents), len(tc.vocabulary), tc.total_tokens,
    )
    _write_json(out_dir / "tokenized.json", textprep_mod.tokenized_to_dict(tc))


def _stage_train(cfg: PipelineConfig, out_dir: Path) -> None:
    corpus = corpus_mod.corpus_from_dict(_read_json(_require(out_dir, "corpus.json")))
    tc = textprep_mod.tokenized_from_dict(_read_json(_require(out_dir, "tokenized.json")))
    doc_ids = [corpus.documents[i].id for i in tc.kept_doc_map]

    # The two models share only immutable inputs and the sampler releases the
    # GIL, so main and sub train concurrently.
    with ThreadPoolExecutor(max_workers=2) as pool:
        main_future = pool.submit(train, tc, cfg.main_model, doc_ids)
        sub_future = pool.submit(train, tc, cfg.sub_model, doc_ids)
        main_model, sub_model = main_future.result(), sub_future.result()
    _write_json(out_dir / "model_main.json", model_to_dict(main_model))
    _write_json(out_dir / "model_sub.json", model_to_dict(sub_model))


def _load_models(out_dir: Path) -> tuple[TopicModel, TopicModel]:
    main_model = model_from_dict(_read_json(_require(out_dir, "model_main.json")))
    sub_model = model_from_dict(_read_json(_require(out_dir, "model_sub.json")))
    return main_model, sub_model


def _stage_hierarchy(cfg: PipelineConfig, out_dir: Path) -> None:
    main_model, sub_model = _load_models(out_dir)
    hier = build_hierarchy(main_model, sub_model)
    _write_json(out_dir / "hierarchy.json", {
        "assignment": list(hier.assignment),
        "labels": {
            level: [list(terms) for terms in per_topic]
            for level, per_topic in hier.labels.items()
        },
    })


def _load_hierarchy(out_dir: Path, main_model: TopicModel, sub_model: TopicModel) -> TopicHierarchy:
    data = _read_json(_require(out_dir, "hierarchy.json"))
    return TopicHierarchy(
        main=main_model,
        sub=sub_model,
        assignment=tuple(data["assignment"]),
        labels={
            level: tuple(tuple(terms) for terms in per_topic)
            for level, per_topic in data["labels"].items()
        },
    )


def _stage_trends(cfg: PipelineConfig, out_dir: Path) -> None:
    corpus = corpus_mod.corpus_from_dict(_read_json(_require(out_dir, "corpus.json")))
    main_model, sub_model = _load_models(out_dir)
    binning = cfg.trends.binning
    if binning == "auto":
        binning = trends_mod.default_binning(corpus)
    series = {}
    for level, model in (("main", main_model), ("sub", sub_model)):
        for k in range(model.k):
            trend = trends_mod.topic_trend(
                model, corpus, k, binning=binning,
                exclusions=cfg.trends.exclude_dates,
                include_sentinels=cfg.trends.include_sentinels,
                level=level,
            )
            series[f"{level}-{k}"] = trends_mod.series_to_dict(trend)
    _write_json(out_dir / "trends.json", {"binning": binning, "series": series})


def _sub_cluster_count(group_size: int, cap: int) -> int:
    return max(1, min(cap, math.isqrt(group_size - 1) + 1 if group_size > 1 else 1, group_size))


def _stage_layout(cfg: PipelineConfig, out_dir: Path) -> None:
    main_model, sub_model = _load_models(out_dir)
    hier = _load_hierarchy(out_dir, main_model, sub_model)

    def build_map(model, indices, level, n_clusters):
        vectors = [model.theta[:, k] for k in indices]
        dendro = agglomerate(cosine_distance_matrix(vectors))
        weights = [topic_weight(model, k) for k in indices]
        labels = [display_label(hier.labels[level][k]) for k in indices]
        topics = [(level, k) for k in indices]
        return layout_map(
            dendro, weights, n_clusters, labels, topics=topics,
            padding_fraction=cfg.layout.padding_fraction, n_angles=cfg.layout.n_angles,
        )

    main_map = build_map(main_model, list(range(main_model.k)), "main", cfg.n_clusters_main)
    groups = {m: hier.group(m) for m in range(main_model.k) if hier.group(m)}
    # sub-maps are independent pure computations; lay them out concurrently
    with ThreadPoolExecutor(max_workers=min(4, max(1, len(groups)))) as pool:
        futures = {
            m: pool.submit(
                build_map, sub_model, list(group), "sub",
                _sub_cluster_count(len(group), cfg.layout.max_sub_clusters),
            )
            for m, group in groups.items()
        }
        sub_maps = {m: future.result() for m, future in futures.items()}

    _write_json(out_dir / "maps.json", {
        "main_map": layout_mod.map_to_dict(main_map),
        "sub_maps": {str(m): layout_mod.map_to_dict(sub_map) for m, sub_map in sub_maps.items()},
    })
    if cfg.layout.svg:
        svg_dir = out_dir / "svg"
        svg_dir.mkdir(parents=True, exist_ok=True)
        (svg_dir / "main.svg").write_text(render_svg(main_map), encoding="utf-8")
        for m, sub_map in sub_maps.items():
            (svg_dir / f"sub_{m}.svg").write_text(render_svg(sub_map), encoding="utf-8")


def _stage_export(cfg: PipelineConfig, out_dir: Path) -> None:
    corpus = corpus_mod.corpus_from_dict(_read_json(_require(out_dir, "corpus.json")))
    main_model, sub_model = _load_models(out_dir)
    hier = _load_hierarchy(out_dir, main_model, sub_model)
    trends_data = _read_json(_require(out_dir, "trends.json"))
    maps_data = _read_json(_require(out_dir, "maps.json"))

    series = {}
    for key, entry in trends_data["series"].items():
        level, idx = key.rsplit("-", 1)
        series[(level, int(idx))] = trends_mod.series_from_dict(entry)
    main_map = layout_mod.map_from_dict(maps_data["main_map"])
    sub_maps = {int(m): layout_mod.map_from_dict(d) for m, d in maps_data["sub_maps"].items()}

    opts = _preprocess_options(cfg)
    bundle = export_mod.build_bundle(
        hier, (main_map, sub_maps), series, corpus,
        search_norm={
            "min_token_len": opts.min_token_len,
            "stopwords": opts.stopwords,
            "lemmas": opts.lemmas,
        },
    )
    export_mod.validate_bundle(bundle)
    (out_dir / "atlas.json").write_bytes(export_mod.bundle_to_json(bundle))


_STAGE_FUNCS = {
    "ingest": _stage_ingest,
    "preprocess": _stage_preprocess,
    "train": _stage_train,
    "hierarchy": _stage_hierarchy,
    "trends": _stage_trends,
    "layout": _stage_layout,
    "export": _stage_export,
}


def run(config: PipelineConfig, stages=("all",)) -> int:
    """Execute the requested stages in pipeline order; returns 0 on success."""
    wanted = list(stages)
    if "all" in wanted:
        wanted = list(STAGES)
    unknown = [s for s in wanted if s not in STAGES]
    if unknown:
        raise ConfigError(f"unknown stage(s): {', '.join(unknown)} (expected {', '.join(STAGES)})")
    wanted = [s for s in STAGES if s in wanted]

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = _Manifest(out_dir, config.hash())

    for stage in wanted:
        if manifest.up_to_date(out_dir, stage):
            log.info("stage %s is up to date, skipping", stage)
            continue
        log.info("running stage %s", stage)
        _STAGE_FUNCS[stage](config, out_dir)
        manifest.record(out_dir, stage)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="topicatlas",
        description="Build a hierarchical topic atlas (maps, trends, search bundle) from a corpus.",
    )
    parser.add_argument("--config", required=True, help="YAML pipeline configuration")
    parser.add_argument(
        "--stages", default="all",
        help=f"comma-separated subset of: {', '.join(STAGES)} (or 'all')",
    )
    parser.add_argument("--seed", type=int, default=None, help="override both models' seeds")
    parser.add_argument("--out", default=None, help="override the output directory")
    parser.add_argument(
        "--log-level", default="info", choices=["error", "warn", "info", "debug"]
    )
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    level = {"error": logging.ERROR, "warn": logging.WARNING,
             "info": logging.INFO, "debug": logging.DEBUG}[args.log_level]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config.main_model = Hyperparams(**{**vars(config.main_model), "seed": args.seed})
            config.sub_model = Hyperparams(**{**vars(config.sub_model), "seed": args.seed})
        if args.out is not None:
            config.output_dir = args.out
        stages = [s.strip() for s in args.stages.split(",") if s.strip()]
        return run(config, stages)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pipeline/runtime failure
        log.debug("stage failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
