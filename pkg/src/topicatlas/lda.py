"""Latent Dirichlet Allocation trained by collapsed Gibbs sampling.

Training is a pure function of (tokenised corpus, hyperparameters): the same
seed reproduces the topic-word matrix phi and document-topic matrix theta
bit for bit. phi and theta are estimated from counts averaged over every
post-burn-in sweep.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import _gibbs
from .textprep import TokenizedCorpus, Vocabulary

__all__ = [
    "Hyperparams",
    "TopicModel",
    "SamplerState",
    "LdaError",
    "train",
    "log_likelihood",
    "doc_vector",
]

log = logging.getLogger(__name__)


class LdaError(Exception):
    """Invalid hyperparameters or an untrainable corpus."""


@dataclass(frozen=True)
class Hyperparams:
    """Sampler configuration. alpha defaults to 50/K and beta to 0.01."""

    k: int
    alpha: float | None = None
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise LdaError(f"topic count must be positive, got {self.k}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.k)
        if self.alpha <= 0:
            raise LdaError(f"alpha must be > 0, got {self.alpha}")
        if self.beta <= 0:
            raise LdaError(f"beta must be > 0, got {self.beta}")
        if self.iterations < 1:
            raise LdaError(f"iterations must be >= 1, got {self.iterations}")
        if not 0 <= self.burn_in < self.iterations:
            raise LdaError(
                f"burn_in must satisfy 0 <= burn_in < iterations, got "
                f"burn_in={self.burn_in} iterations={self.iterations}"
            )


@dataclass(frozen=True)
class SamplerState:
    """Snapshot of the collapsed sampler counts (shared views during training)."""

    z: np.ndarray          # per-token topic assignment, flat, document order
    doc_starts: np.ndarray  # doc d owns z[doc_starts[d]:doc_starts[d+1]]
    n_dk: np.ndarray       # (D, K) document-topic counts
    n_kw: np.ndarray       # (K, V) topic-word counts
    n_k: np.ndarray        # (K,) topic totals


@dataclass(frozen=True)
class TopicModel:
    phi: np.ndarray          # (K, V), rows are word distributions
    theta: np.ndarray        # (D, K), rows are topic mixtures
    hyper: Hyperparams
    vocab: Vocabulary
    doc_ids: tuple[str, ...]

    @property
    def k(self) -> int:
        return self.phi.shape[0]

    @property
    def v(self) -> int:
        return self.phi.shape[1]

    @property
    def d(self) -> int:
        return self.theta.shape[0]


def _flatten(tc: TokenizedCorpus) -> tuple[np.ndarray, np.ndarray]:
    doc_starts = np.zeros(len(tc.docs) + 1, dtype=np.int64)
    for i, doc in enumerate(tc.docs):
        doc_starts[i + 1] = doc_starts[i] + len(doc)
    tokens = np.empty(doc_starts[-1], dtype=np.int32)
    for i, doc in enumerate(tc.docs):
        tokens[doc_starts[i]:doc_starts[i + 1]] = doc
    return tokens, doc_starts


def train(
    tc: TokenizedCorpus,
    hyper: Hyperparams,
    doc_ids=None,
    sweep_callback=None,
) -> TopicModel:
    """Run the collapsed Gibbs sampler and estimate phi/theta.

    ``sweep_callback(sweep_index, state)`` is invoked after every sweep with a
    read-only view of the live counts (used by invariant checks). ``doc_ids``
    labels the theta rows; defaults to the original corpus indices from
    ``tc.kept_doc_map``.
    """
    if hyper.k < 2:
        raise LdaError(f"training needs at least 2 topics, got k={hyper.k}")
    if len(tc.docs) == 0 or tc.total_tokens == 0:
        raise LdaError("tokenized corpus is empty")
    n_words = len(tc.vocabulary)
    if n_words < hyper.k:
        log.warning("vocabulary size %d is smaller than topic count %d", n_words, hyper.k)

    if doc_ids is None:
        doc_ids = tuple(str(i) for i in tc.kept_doc_map)
    else:
        doc_ids = tuple(doc_ids)
        if len(doc_ids) != len(tc.docs):
            raise LdaError(f"got {len(doc_ids)} doc_ids for {len(tc.docs)} documents")

    tokens, doc_starts = _flatten(tc)
    n_docs = len(tc.docs)
    k = hyper.k
    alpha = float(hyper.alpha)
    beta = float(hyper.beta)

    z = np.zeros(tokens.shape[0], dtype=np.int32)
    n_dk = np.zeros((n_docs, k), dtype=np.int32)
    n_wk = np.zeros((n_words, k), dtype=np.int32)
    n_k = np.zeros(k, dtype=np.int64)
    rng_state = np.array([np.uint64(hyper.seed & 0xFFFFFFFFFFFFFFFF)], dtype=np.uint64)
    probs = np.empty(k, dtype=np.float64)

    _gibbs.init_state(tokens, doc_starts, k, z, n_dk, n_wk, n_k, rng_state)
    inv_nk = 1.0 / (n_k + n_words * beta)

    state = SamplerState(z=z, doc_starts=doc_starts, n_dk=n_dk, n_kw=n_wk.T, n_k=n_k)
    acc_dk = np.zeros((n_docs, k), dtype=np.float64)
    acc_wk = np.zeros((n_words, k), dtype=np.float64)
    acc_k = np.zeros(k, dtype=np.float64)
    debug = log.isEnabledFor(logging.DEBUG)

    for sweep in range(hyper.iterations):
        _gibbs.gibbs_sweep(
            tokens, doc_starts, z, n_dk, n_wk, n_k, inv_nk, alpha, beta, rng_state, probs
        )
        if sweep >= hyper.burn_in:
            acc_dk += n_dk
            acc_wk += n_wk
            acc_k += n_k
        if debug:
            log.debug("sweep %d log-likelihood %.4f", sweep, log_likelihood(state, hyper))
        if sweep_callback is not None:
            sweep_callback(sweep, state)

    n_estimates = hyper.iterations - hyper.burn_in
    acc_dk /= n_estimates
    acc_wk /= n_estimates
    acc_k /= n_estimates

    doc_lens = (doc_starts[1:] - doc_starts[:-1]).astype(np.float64)
    phi = (acc_wk.T + beta) / (acc_k + n_words * beta)[:, None]
    theta = (acc_dk + alpha) / (doc_lens + k * alpha)[:, None]
    return TopicModel(phi=phi, theta=theta, hyper=hyper, vocab=tc.vocabulary, doc_ids=doc_ids)


def log_likelihood(state: SamplerState, hyper: Hyperparams) -> float:
    """Collapsed joint log p(w, z) of the current assignment."""
    alpha = float(hyper.alpha)
    beta = float(hyper.beta)
    n_docs, k = state.n_dk.shape
    n_words = state.n_kw.shape[1]
    doc_lens = state.n_dk.sum(axis=1)

    lp_w = (
        k * (gammaln(n_words * beta) - n_words * gammaln(beta))
        + float(np.sum(gammaln(state.n_kw + beta)))
        - float(np.sum(gammaln(state.n_k + n_words * beta)))
    )
    lp_z = (
        n_docs * (gammaln(k * alpha) - k * gammaln(alpha))
        + float(np.sum(gammaln(state.n_dk + alpha)))
        - float(np.sum(gammaln(doc_lens + k * alpha)))
    )
    return lp_w + lp_z


def doc_vector(model: TopicModel, k: int) -> np.ndarray:
    """Topic k's weight in every document: column k of theta."""
    if not 0 <= k < model.k:
        raise IndexError(f"topic index {k} out of range [0, {model.k})")
    return model.theta[:, k].copy()


# ---------- artifact serialization ----------

def model_to_dict(model: TopicModel) -> dict:
    return {
        "hyper": {
            "k": model.hyper.k,
            "alpha": model.hyper.alpha,
            "beta": model.hyper.beta,
            "iterations": model.hyper.iterations,
            "burn_in": model.hyper.burn_in,
            "seed": model.hyper.seed,
        },
        "vocab": list(model.vocab.terms),
        "doc_ids": list(model.doc_ids),
        "phi": [[float(x) for x in row] for row in model.phi],
        "theta": [[float(x) for x in row] for row in model.theta],
    }


def model_from_dict(data: dict) -> TopicModel:
    vocab = Vocabulary.build(data["vocab"], [0] * len(data["vocab"]))
    return TopicModel(
        phi=np.asarray(data["phi"], dtype=np.float64),
        theta=np.asarray(data["theta"], dtype=np.float64),
        hyper=Hyperparams(**data["hyper"]),
        vocab=vocab,
        doc_ids=tuple(data["doc_ids"]),
    )
