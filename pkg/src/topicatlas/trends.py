"""Per-topic publication-volume trends over time.

A trend bins theta weights by document date. Documents without a date,
documents whose date is a bare-year sentinel (defaulted to January 1) and
documents on explicitly excluded dates contribute nothing.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

from .corpus import Corpus
from .lda import TopicModel

__all__ = [
    "TrendSeries",
    "BINNINGS",
    "bin_start",
    "default_binning",
    "topic_trend",
    "series_to_dict",
    "series_from_dict",
]

BINNINGS = ("day", "week", "month")


@dataclass(frozen=True)
class TrendSeries:
    topic: tuple[str, int]                       # (level, index)
    points: tuple[tuple[dt.date, float], ...]    # strictly ascending bins
    binning: str
    excluded_dates: tuple[dt.date, ...]          # dates dropped (sentinels / exclusions)

    def total(self) -> float:
        return sum(weight for _, weight in self.points)


def bin_start(date: dt.date, binning: str) -> dt.date:
    if binning == "day":
        return date
    if binning == "week":
        return date - dt.timedelta(days=date.weekday())  # ISO week, Monday
    if binning == "month":
        return date.replace(day=1)
    raise ValueError(f"unknown binning {binning!r} (expected one of {BINNINGS})")


def default_binning(corpus: Corpus) -> str:
    """Day bins for corpora spanning less than a year, month bins otherwise."""
    dates = [doc.date for doc in corpus.documents if doc.date is not None]
    if not dates:
        return "day"
    span = (max(dates) - min(dates)).days
    return "day" if span < 365 else "month"


def topic_trend(
    model: TopicModel,
    corpus: Corpus,
    k: int,
    binning: str = "day",
    exclusions=(),
    include_sentinels: bool = False,
    level: str = "main",
) -> TrendSeries:
    """Sum topic k's theta weight per date bin.

    Model rows are matched to corpus documents through ``model.doc_ids``;
    rows whose id is not in the corpus are an error. Bins with no
    contributing documents are omitted.
    """
    if not 0 <= k < model.k:
        raise IndexError(f"topic index {k} out of range [0, {model.k})")
    if binning not in BINNINGS:
        raise ValueError(f"unknown binning {binning!r} (expected one of {BINNINGS})")
    excluded_set = {d if isinstance(d, dt.date) else dt.date.fromisoformat(d) for d in exclusions}

    by_id = corpus.by_id()
    bins: dict[dt.date, float] = {}
    dropped: set[dt.date] = set()
    for row, doc_id in enumerate(model.doc_ids):
        doc = by_id.get(doc_id)
        if doc is None:
            raise KeyError(f"model row {row} references unknown document id {doc_id!r}")
        if doc.date is None:
            continue
        if (doc.sentinel and not include_sentinels) or doc.date in excluded_set:
            dropped.add(doc.date)
            continue
        key = bin_start(doc.date, binning)
        bins[key] = bins.get(key, 0.0) + float(model.theta[row, k])

    points = tuple(sorted(bins.items()))
    return TrendSeries(
        topic=(level, k),
        points=points,
        binning=binning,
        excluded_dates=tuple(sorted(dropped)),
    )


# ---------- artifact serialization ----------

def series_to_dict(series: TrendSeries) -> dict:
    return {
        "topic": [series.topic[0], series.topic[1]],
        "binning": series.binning,
        "points": [[day.isoformat(), weight] for day, weight in series.points],
        "excluded_dates": [day.isoformat() for day in series.excluded_dates],
    }


def series_from_dict(data: dict) -> TrendSeries:
    return TrendSeries(
        topic=(data["topic"][0], int(data["topic"][1])),
        points=tuple(
            (dt.date.fromisoformat(day), float(weight)) for day, weight in data["points"]
        ),
        binning=data["binning"],
        excluded_dates=tuple(dt.date.fromisoformat(day) for day in data["excluded_dates"]),
    )
