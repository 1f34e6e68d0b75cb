"""Tokenisation, lemma lookup, stop-word removal and vocabulary pruning.

The per-document normalisation is a fixed pipeline: NFC-normalise, lowercase,
split on any non-letter, drop short tokens, lemmatise by table lookup
(identity fallback), drop stop words. The vocabulary is then built over the
surviving tokens and pruned by document frequency.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import Corpus

__all__ = [
    "PreprocessOptions",
    "Vocabulary",
    "TokenizedCorpus",
    "TextPrepError",
    "load_stopwords",
    "load_lemma_table",
    "bundled_stopwords",
    "bundled_lemma_table",
    "normalize_text",
    "preprocess",
]

# Runs of Unicode letters; digits and underscore are separators like any
# other non-letter.
_LETTER_RUN = re.compile(r"[^\W\d_]+", re.UNICODE)


class TextPrepError(Exception):
    """Preprocessing cannot produce a usable tokenised corpus."""


@dataclass(frozen=True)
class PreprocessOptions:
    stopwords: frozenset[str] = frozenset()
    lemmas: dict[str, str] = field(default_factory=dict)
    min_token_len: int = 3
    min_df: int = 3
    max_df_fraction: float = 0.9
    min_tokens: int = 5

    def __post_init__(self):
        if not 0 < self.max_df_fraction <= 1:
            raise TextPrepError(
                f"max_df_fraction must be in (0, 1], got {self.max_df_fraction}"
            )


@dataclass(frozen=True)
class Vocabulary:
    """Pruned term universe; term index order is first appearance in the corpus."""

    terms: tuple[str, ...]
    doc_frequency: tuple[int, ...]
    index: dict[str, int] = field(repr=False, default_factory=dict)

    @staticmethod
    def build(terms, doc_frequency) -> "Vocabulary":
        terms = tuple(terms)
        return Vocabulary(
            terms=terms,
            doc_frequency=tuple(doc_frequency),
            index={term: i for i, term in enumerate(terms)},
        )

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class TokenizedCorpus:
    """Per-document token-index sequences plus the vocabulary they refer to.

    ``kept_doc_map[i]`` is the index in the original Corpus of tokenised
    document i (documents below ``min_tokens`` are dropped).
    """

    docs: tuple[tuple[int, ...], ...]
    vocabulary: Vocabulary
    kept_doc_map: tuple[int, ...]

    @property
    def total_tokens(self) -> int:
        return sum(len(doc) for doc in self.docs)

    def __len__(self) -> int:
        return len(self.docs)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One term per line; blank lines and '#' comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        term = line.split("#", 1)[0].strip()
        if term:
            words.add(term)
    return frozenset(words)


def load_lemma_table(path: str | Path) -> dict[str, str]:
    """Two tab-separated columns (form, lemma), one pair per line.

    Chains are resolved to fixed points (form -> lemma -> lemma...) so that
    lemmatisation is idempotent; a cycle keeps the first target encountered.
    """
    table: dict[str, str] = {}
    for line_num, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise TextPrepError(f"{path}: line {line_num}: expected 'form<TAB>lemma'")
        form, lemma = parts[0].strip(), parts[1].strip()
        if form and lemma:
            table[form] = lemma
    resolved: dict[str, str] = {}
    for form, lemma in table.items():
        seen = {form}
        while lemma in table and table[lemma] != lemma and lemma not in seen:
            seen.add(lemma)
            lemma = table[lemma]
        resolved[form] = lemma
    return resolved


def bundled_stopwords() -> frozenset[str]:
    """The English stop list shipped with the package."""
    ref = resources.files("topicatlas").joinpath("data/stopwords.txt")
    with resources.as_file(ref) as path:
        return load_stopwords(path)


def bundled_lemma_table() -> dict[str, str]:
    """The English lemma table shipped with the package."""
    ref = resources.files("topicatlas").joinpath("data/lemmas.tsv")
    with resources.as_file(ref) as path:
        return load_lemma_table(path)


def normalize_text(text: str, opts: PreprocessOptions) -> list[str]:
    """Run the per-document pipeline on raw text, returning surviving lemmas.

    Idempotent as long as the lemma table maps onto fixed points of at least
    ``min_token_len`` letters (the bundled table and ``load_lemma_table``
    guarantee the fixed-point part).
    """
    text = unicodedata.normalize("NFC", text).lower()
    out = []
    for token in _LETTER_RUN.findall(text):
        if len(token) < opts.min_token_len:
            continue
        lemma = opts.lemmas.get(token, token)
        if lemma in opts.stopwords:
            continue
        out.append(lemma)
    return out


def preprocess(corpus: Corpus, opts: PreprocessOptions) -> TokenizedCorpus:
    """Tokenise every document and build the pruned vocabulary.

    Document frequency is measured over all documents of ``corpus``; terms
    with df < min_df or df > max_df_fraction * |corpus| are pruned and removed
    from documents. Documents left with fewer than ``min_tokens`` tokens are
    dropped (tracked through ``kept_doc_map``).
    """
    token_docs = [normalize_text(doc.text(), opts) for doc in corpus.documents]

    # First-appearance order defines term indices; df counts documents.
    first_seen: dict[str, int] = {}
    df: dict[str, int] = {}
    for tokens in token_docs:
        for term in tokens:
            if term not in first_seen:
                first_seen[term] = len(first_seen)
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1

    n_docs = len(corpus.documents)
    max_df = opts.max_df_fraction * n_docs
    kept_terms = [
        term
        for term in sorted(first_seen, key=first_seen.get)
        if opts.min_df <= df[term] and df[term] <= max_df
    ]
    if not kept_terms:
        raise TextPrepError("corpus too small or filters too aggressive")
    vocabulary = Vocabulary.build(kept_terms, (df[t] for t in kept_terms))

    docs: list[tuple[int, ...]] = []
    kept_doc_map: list[int] = []
    for original_idx, tokens in enumerate(token_docs):
        ids = tuple(vocabulary.index[t] for t in tokens if t in vocabulary.index)
        if len(ids) < opts.min_tokens:
            continue
        docs.append(ids)
        kept_doc_map.append(original_idx)
    return TokenizedCorpus(
        docs=tuple(docs), vocabulary=vocabulary, kept_doc_map=tuple(kept_doc_map)
    )


# ---------- artifact serialization ----------

def tokenized_to_dict(tc: TokenizedCorpus) -> dict:
    return {
        "vocabulary": {
            "terms": list(tc.vocabulary.terms),
            "doc_frequency": list(tc.vocabulary.doc_frequency),
        },
        "docs": [list(doc) for doc in tc.docs],
        "kept_doc_map": list(tc.kept_doc_map),
    }


def tokenized_from_dict(data: dict) -> TokenizedCorpus:
    vocab = Vocabulary.build(data["vocabulary"]["terms"], data["vocabulary"]["doc_frequency"])
    return TokenizedCorpus(
        docs=tuple(tuple(doc) for doc in data["docs"]),
        vocabulary=vocab,
        kept_doc_map=tuple(data["kept_doc_map"]),
    )
