"""Ingestion of publication metadata (CSV / JSON-lines) into an immutable corpus.

A corpus is an ordered list of documents; the position of a document in that
list is its canonical index for everything downstream (tokenisation, topic
models, trends), so loading must be reproducible row for row.
"""
from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "Document",
    "Corpus",
    "LoadReport",
    "IngestError",
    "DEFAULT_DATE_FORMATS",
    "ingest",
]

# A bare-year pattern resolves to January 1 and marks the document's date as a
# sentinel so trend charts can drop the artificial spike.
DEFAULT_DATE_FORMATS = ("%Y-%m-%d", "%Y/%m/%d", "%d/%m/%Y", "%Y")


class IngestError(Exception):
    """Hard failure while loading a corpus file (bad mapping, duplicate id, malformed row)."""


@dataclass(frozen=True)
class Document:
    """One publication record.

    ``date`` is None when the source row had no parseable date. ``sentinel``
    is True when the date was completed from a bare year (defaulted to
    January 1) and should not be trusted for day-level trend analysis.
    """

    id: str
    title: str
    abstract: str = ""
    date: dt.date | None = None
    sentinel: bool = False
    extras: dict[str, str] = field(default_factory=dict)

    def text(self) -> str:
        """Title and abstract joined with a single space (the modelling input)."""
        if self.abstract:
            return f"{self.title} {self.abstract}"
        return self.title


@dataclass(frozen=True)
class LoadReport:
    """Counts gathered while ingesting one file."""

    rows: int
    dateless: int
    sentinel_dates: int


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    source_label: str
    report: LoadReport

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, idx: int) -> Document:
        return self.documents[idx]

    def by_id(self) -> dict[str, Document]:
        return {doc.id: doc for doc in self.documents}


def _parse_date(raw: str, date_formats) -> tuple[dt.date | None, bool]:
    """Try each pattern in order; returns (date, sentinel_flag).

    A pattern without day/month directives (e.g. "%Y") yields January 1 of
    that year and flags the result as a sentinel.
    """
    for pattern in date_formats:
        try:
            parsed = dt.datetime.strptime(raw, pattern).date()
        except ValueError:
            continue
        sentinel = not any(code in pattern for code in ("%d", "%m", "%j"))
        return parsed, sentinel
    return None, False


def _rows_from_csv(path: Path):
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return  # empty file: zero rows
        try:
            for row in reader:
                if None in row and row[None]:
                    raise IngestError(
                        f"{path}: malformed CSV row at line {reader.line_num}: "
                        f"{len(reader.fieldnames) + len(row[None])} fields, expected {len(reader.fieldnames)}"
                    )
                yield reader.line_num, row
        except csv.Error as exc:
            raise IngestError(f"{path}: malformed CSV at line {reader.line_num}: {exc}") from exc


def _rows_from_jsonl(path: Path):
    with path.open("r", encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}: malformed JSON at line {line_num}: {exc}") from exc
            if not isinstance(obj, dict):
                raise IngestError(f"{path}: line {line_num} is not a JSON object")
            yield line_num, obj


def ingest(
    path: str | Path,
    format: str,
    mapping: dict[str, str],
    date_formats=DEFAULT_DATE_FORMATS,
    source_label: str | None = None,
) -> Corpus:
    """Load a CSV or JSONL file into a Corpus.

    ``mapping`` names the source column/key for each Document field; "id" and
    "title" are required, "abstract" and "date" optional. Unmapped columns are
    kept verbatim in ``Document.extras``. Rows with unparseable dates are kept
    (date absent) and counted in the corpus' LoadReport; duplicate ids and
    malformed rows abort the load.
    """
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"input file not found: {path}")
    if format not in ("csv", "jsonl"):
        raise IngestError(f"unsupported format {format!r} (expected 'csv' or 'jsonl')")
    for required in ("id", "title"):
        if required not in mapping:
            raise IngestError(f"field mapping is missing required field {required!r}")

    rows = _rows_from_csv(path) if format == "csv" else _rows_from_jsonl(path)
    mapped_keys = set(mapping.values())

    documents: list[Document] = []
    seen_ids: set[str] = set()
    dateless = 0
    sentinels = 0
    for line_num, row in rows:
        for field_name in ("id", "title"):
            if mapping[field_name] not in row:
                raise IngestError(
                    f"{path}: line {line_num} has no {field_name!r} field "
                    f"(mapped to {mapping[field_name]!r})"
                )
        doc_id = str(row[mapping["id"]] if row[mapping["id"]] is not None else "").strip()
        if not doc_id:
            raise IngestError(f"{path}: line {line_num}: empty document id")
        if doc_id in seen_ids:
            raise IngestError(f"{path}: duplicate document id {doc_id!r} at line {line_num}")
        seen_ids.add(doc_id)

        title = str(row.get(mapping["title"]) or "").strip()
        abstract = ""
        if "abstract" in mapping:
            abstract = str(row.get(mapping["abstract"]) or "").strip()

        date: dt.date | None = None
        sentinel = False
        if "date" in mapping:
            raw_date = str(row.get(mapping["date"]) or "").strip()
            if raw_date:
                date, sentinel = _parse_date(raw_date, date_formats)
            if date is None:
                dateless += 1
            elif sentinel:
                sentinels += 1
        else:
            dateless += 1

        extras = {
            str(key): str(value)
            for key, value in row.items()
            if key is not None
            and key not in mapped_keys
            and isinstance(value, (str, int, float, bool))
        }
        documents.append(
            Document(id=doc_id, title=title, abstract=abstract, date=date,
                     sentinel=sentinel, extras=extras)
        )

    report = LoadReport(rows=len(documents), dateless=dateless, sentinel_dates=sentinels)
    return Corpus(
        documents=tuple(documents),
        source_label=source_label if source_label is not None else path.name,
        report=report,
    )


# ---------- artifact serialization (pipeline stage files) ----------

def corpus_to_dict(corpus: Corpus) -> dict:
    return {
        "source_label": corpus.source_label,
        "report": {
            "rows": corpus.report.rows,
            "dateless": corpus.report.dateless,
            "sentinel_dates": corpus.report.sentinel_dates,
        },
        "documents": [
            {
                "id": doc.id,
                "title": doc.title,
                "abstract": doc.abstract,
                "date": doc.date.isoformat() if doc.date else None,
                "sentinel": doc.sentinel,
                "extras": doc.extras,
            }
            for doc in corpus.documents
        ],
    }


def corpus_from_dict(data: dict) -> Corpus:
    documents = tuple(
        Document(
            id=entry["id"],
            title=entry["title"],
            abstract=entry["abstract"],
            date=dt.date.fromisoformat(entry["date"]) if entry["date"] else None,
            sentinel=entry["sentinel"],
            extras=dict(entry["extras"]),
        )
        for entry in data["documents"]
    )
    report = LoadReport(**data["report"])
    return Corpus(documents=documents, source_label=data["source_label"], report=report)
