#!/usr/bin/env python3
"""Regenerate tests/fixtures/fixture_corpus.csv (200 synthetic publications).

Six planted themes with three sub-themes each, plus shared filler vocabulary,
dates spread over the first half of 2020 with a handful of bare-year records
and missing dates. The CSV is committed; rerun this script only when the
fixture needs to change.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from topicatlas.textprep import bundled_lemma_table

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "fixture_corpus.csv"

THEMES = {
    "virology": {
        "shared": ["virus", "genome", "protein", "mutation", "viral"],
        "subs": {
            "vaccine": ["vaccine", "antibody", "immune", "immunity", "dose", "trial", "candidate", "efficacy"],
            "testing": ["test", "assay", "sample", "laboratory", "detection", "swab", "positive", "diagnostic"],
            "drugs": ["drug", "antiviral", "compound", "inhibitor", "therapy", "molecule", "target", "screening"],
        },
    },
    "social": {
        "shared": ["measure", "intervention", "policy", "behavior", "strategy"],
        "subs": {
            "distancing": ["social", "distancing", "lockdown", "quarantine", "mobility", "contact", "restriction", "closure"],
            "education": ["school", "education", "student", "teaching", "learning", "university", "online", "classroom"],
            "mental": ["mental", "anxiety", "stress", "depression", "wellbeing", "isolation", "psychological", "coping"],
        },
    },
    "clinical": {
        "shared": ["patient", "hospital", "clinical", "care", "admission"],
        "subs": {
            "symptoms": ["symptom", "fever", "cough", "pneumonia", "fatigue", "respiratory", "onset", "severity"],
            "icu": ["intensive", "ventilator", "oxygen", "unit", "critical", "support", "failure", "therapy"],
            "mortality": ["mortality", "risk", "age", "outcome", "comorbidity", "survival", "death", "cohort"],
        },
    },
    "epidemic": {
        "shared": ["epidemic", "model", "transmission", "number", "spread"],
        "subs": {
            "forecast": ["forecast", "prediction", "simulation", "curve", "scenario", "projection", "fitting", "estimate"],
            "reproduction": ["reproduction", "rate", "growth", "exponential", "peak", "doubling", "incidence", "dynamics"],
            "tracing": ["tracing", "surveillance", "application", "privacy", "monitoring", "technology", "digital", "identification"],
        },
    },
    "economy": {
        "shared": ["economic", "market", "impact", "crisis", "sector"],
        "subs": {
            "finance": ["stock", "price", "financial", "bank", "investment", "volatility", "asset", "currency"],
            "employment": ["employment", "worker", "income", "labor", "unemployment", "wage", "remote", "workforce"],
            "supply": ["supply", "chain", "trade", "industry", "production", "shortage", "logistics", "manufacturing"],
        },
    },
    "publichealth": {
        "shared": ["health", "public", "response", "government", "communication"],
        "subs": {
            "information": ["information", "news", "misinformation", "media", "message", "awareness", "campaign", "trust"],
            "equity": ["equity", "community", "access", "vulnerable", "disparity", "minority", "poverty", "housing"],
            "coordination": ["coordination", "international", "organization", "global", "preparedness", "capacity", "agency", "cooperation"],
        },
    },
}

FILLER = ["research", "study", "analysis", "result", "datum", "evidence", "finding", "report"]


def build_rows(seed: int = 20200512, n_docs: int = 200):
    rng = np.random.default_rng(seed)
    lemma_forms = set(bundled_lemma_table())
    theme_names = list(THEMES)
    rows = []
    start = np.datetime64("2020-01-05")
    for i in range(n_docs):
        theme = theme_names[i % len(theme_names)]
        sub_names = list(THEMES[theme]["subs"])
        sub = sub_names[(i // len(theme_names)) % len(sub_names)]
        sub_words = THEMES[theme]["subs"][sub]
        shared_words = THEMES[theme]["shared"]

        def draw(n):
            out = []
            for _ in range(n):
                roll = rng.random()
                if roll < 0.55:
                    out.append(sub_words[rng.integers(len(sub_words))])
                elif roll < 0.85:
                    out.append(shared_words[rng.integers(len(shared_words))])
                else:
                    out.append(FILLER[rng.integers(len(FILLER))])
            return out

        title_words = draw(int(rng.integers(6, 10)))
        abstract_words = draw(int(rng.integers(35, 55)))
        # Occasional inflected form exercises the lemma table.
        for words in (title_words, abstract_words):
            for j, word in enumerate(words):
                if rng.random() < 0.15 and word + "s" in lemma_forms:
                    words[j] = word + "s"
        title = " ".join(title_words).capitalize()
        abstract = " ".join(abstract_words).capitalize() + "."

        offset = int(rng.integers(0, 176))
        date = str(start + np.timedelta64(offset, "D"))
        kind = rng.random()
        if kind < 0.04:
            date = "2020"  # bare year -> sentinel
        elif kind < 0.06:
            date = ""      # missing date
        rows.append(
            {
                "id": f"doc-{i:04d}",
                "title": title,
                "abstract": abstract,
                "date": date,
                "source": f"{theme}/{sub}",
            }
        )
    return rows


def main() -> None:
    rows = build_rows()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["id", "title", "abstract", "date", "source"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows -> {OUT}")


if __name__ == "__main__":
    main()
