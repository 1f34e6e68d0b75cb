"""Assembly of the self-contained atlas bundle and search over it.

The bundle is a single deterministic JSON document: maps, per-topic records
(label, word cloud, trend, top documents), a term -> topics search index, and
the normalisation tables needed to run queries through the same text pipeline
client-side. Floats are rounded to six significant digits before
serialisation so that byte-identical output only depends on content.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .corpus import Corpus
from .hierarchy import TopicHierarchy, display_label, label_topic
from .layout import BubbleMap
from .trends import TrendSeries

__all__ = [
    "AtlasBundle",
    "BundleError",
    "SCHEMA_VERSION",
    "build_bundle",
    "search",
    "bundle_to_json",
    "bundle_from_json",
    "load_schema",
    "validate_bundle",
]

SCHEMA_VERSION = "1.0"
WORD_CLOUD_TERMS = 30
TOP_DOCS = 20
SEARCH_INDEX_TERMS = 50


class BundleError(Exception):
    pass


@dataclass(frozen=True)
class AtlasBundle:
    data: dict

    @property
    def schema_version(self) -> str:
        return self.data["schema_version"]


def _round6(value: float) -> float:
    return float(f"{float(value):.6g}")


def _map_to_dict(bubble_map: BubbleMap) -> dict:
    return {
        "bubbles": [
            {
                "level": bubble.topic[0],
                "index": bubble.topic[1],
                "x": _round6(bubble.x),
                "y": _round6(bubble.y),
                "r": _round6(bubble.r),
                "cluster": bubble.cluster,
                "label": bubble.label,
            }
            for bubble in bubble_map.bubbles
        ],
        "cluster_outlines": {
            str(cid): [[_round6(x), _round6(y)] for x, y in ring]
            for cid, ring in bubble_map.cluster_outlines.items()
        },
        "bounding_circle": [_round6(v) for v in bubble_map.bounding_circle],
    }


def _trend_to_dict(series: TrendSeries) -> dict:
    return {
        "binning": series.binning,
        "points": [[day.isoformat(), _round6(weight)] for day, weight in series.points],
        "excluded_dates": [day.isoformat() for day in series.excluded_dates],
    }


def _topic_record(model, level, index, parent, corpus_docs, trend):
    order = np.argsort(-model.phi[index], kind="stable")
    cloud = [
        [model.vocab.terms[w], _round6(model.phi[index, w])]
        for w in order[: min(WORD_CLOUD_TERMS, model.v)]
    ]
    column = model.theta[:, index]
    doc_order = sorted(range(model.d), key=lambda row: (-column[row], model.doc_ids[row]))
    top_docs = []
    for row in doc_order[:TOP_DOCS]:
        doc = corpus_docs[model.doc_ids[row]]
        top_docs.append(
            [doc.id, doc.title, doc.date.isoformat() if doc.date else None, _round6(column[row])]
        )
    return {
        "level": level,
        "index": index,
        "parent": parent,
        "label": display_label(label_topic(model, index, min(3, model.v))),
        "word_cloud": cloud,
        "trend": trend,
        "top_docs": top_docs,
    }


def build_bundle(
    hier: TopicHierarchy,
    maps: tuple[BubbleMap, dict[int, BubbleMap]],
    trends: dict[tuple[str, int], TrendSeries],
    corpus: Corpus,
    search_norm: dict | None = None,
) -> AtlasBundle:
    """Assemble the atlas bundle from one pipeline run.

    ``maps`` is (main map, {main topic index -> sub map}); ``trends`` is keyed
    by (level, topic index). ``search_norm`` carries min_token_len, stopwords
    and lemma entries for client-side query normalisation.
    """
    main_map, sub_maps = maps
    corpus_docs = corpus.by_id()

    topics: dict[str, dict] = {}
    for k in range(hier.main.k):
        trend = trends.get(("main", k))
        topics[f"main-{k}"] = _topic_record(
            hier.main, "main", k, None, corpus_docs,
            _trend_to_dict(trend) if trend else {"binning": "day", "points": [], "excluded_dates": []},
        )
    for s in range(hier.sub.k):
        trend = trends.get(("sub", s))
        topics[f"sub-{s}"] = _topic_record(
            hier.sub, "sub", s, hier.assignment[s], corpus_docs,
            _trend_to_dict(trend) if trend else {"binning": "day", "points": [], "excluded_dates": []},
        )

    for bubble_map in [main_map, *sub_maps.values()]:
        for bubble in bubble_map.bubbles:
            key = f"{bubble.topic[0]}-{bubble.topic[1]}"
            if key not in topics:
                raise BundleError(f"map references topic {key} without a topic record")

    search_index: dict[str, list] = {}
    for level, model in (("main", hier.main), ("sub", hier.sub)):
        for k in range(model.k):
            order = np.argsort(-model.phi[k], kind="stable")
            for w in order[: min(SEARCH_INDEX_TERMS, model.v)]:
                term = model.vocab.terms[w]
                search_index.setdefault(term, []).append(
                    [level, int(k), _round6(model.phi[k, w])]
                )

    norm = {
        "min_token_len": 3,
        "stopwords": [],
        "lemmas": {},
    }
    if search_norm:
        norm["min_token_len"] = int(search_norm.get("min_token_len", 3))
        norm["stopwords"] = sorted(search_norm.get("stopwords", ()))
        norm["lemmas"] = {
            form: lemma
            for form, lemma in sorted(search_norm.get("lemmas", {}).items())
            if lemma in search_index
        }

    dates = [doc.date for doc in corpus.documents if doc.date is not None]
    data = {
        "schema_version": SCHEMA_VERSION,
        "corpus_meta": {
            "source_label": corpus.source_label,
            "doc_count": len(corpus.documents),
            "date_range": [
                min(dates).isoformat() if dates else None,
                max(dates).isoformat() if dates else None,
            ],
        },
        "main_map": _map_to_dict(main_map),
        "sub_maps": {str(m): _map_to_dict(sub_map) for m, sub_map in sorted(sub_maps.items())},
        "topics": topics,
        "search_index": search_index,
        "search_norm": norm,
    }
    return AtlasBundle(data=data)


def _normalize_query(query: str, norm: dict) -> list[str]:
    # Mirrors textprep.normalize_text against the bundle's own tables.
    import re
    import unicodedata

    tokens = re.findall(r"[^\W\d_]+", unicodedata.normalize("NFC", query).lower(), re.UNICODE)
    stopwords = set(norm.get("stopwords", ()))
    lemmas = norm.get("lemmas", {})
    out = []
    for token in tokens:
        if len(token) < norm.get("min_token_len", 3):
            continue
        lemma = lemmas.get(token, token)
        if lemma in stopwords:
            continue
        out.append(lemma)
    return out


_LEVEL_ORDER = {"main": 0, "sub": 1}


def search(bundle: AtlasBundle, query: str) -> list[tuple[str, int, float]]:
    """Rank topics by the summed search-index weight of the query's lemmas.

    Topics scoring zero are omitted; ties order main before sub, then by
    index. The query runs through the same normalisation as corpus text.
    """
    lemmas = _normalize_query(query, bundle.data.get("search_norm", {}))
    index = bundle.data["search_index"]
    scores: dict[tuple[str, int], float] = {}
    for lemma in lemmas:
        for level, topic_id, weight in index.get(lemma, ()):
            key = (level, int(topic_id))
            scores[key] = scores.get(key, 0.0) + float(weight)
    ranked = sorted(
        scores.items(), key=lambda kv: (-kv[1], _LEVEL_ORDER.get(kv[0][0], 9), kv[0][1])
    )
    return [(level, idx, score) for (level, idx), score in ranked]


# ---------- serialization & validation ----------

def bundle_to_json(bundle: AtlasBundle) -> bytes:
    text = json.dumps(bundle.data, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return (text + "\n").encode("utf-8")


def bundle_from_json(raw: bytes | str) -> AtlasBundle:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    return AtlasBundle(data=json.loads(raw))


def load_schema() -> dict:
    ref = resources.files("topicatlas").joinpath("schema/atlas.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def validate_bundle(bundle: AtlasBundle) -> None:
    """Raise if the bundle does not conform to the shipped JSON schema."""
    import jsonschema

    jsonschema.validate(bundle.data, load_schema())
