"""Compiled inner loops of the collapsed Gibbs sampler.

Count conventions (token i in document d with word w, current topic old):
  n_dk[d, k]   tokens of document d assigned to topic k
  n_wk[w, k]   tokens of word w assigned to topic k (word-major so the K
               values touched per token are contiguous)
  n_k[k]       total tokens assigned to topic k
  inv_nk[k]    1 / (n_k[k] + V*beta), maintained incrementally

A token is resampled with probability proportional to
(n_dk[d,k] + alpha) * (n_wk[w,k] + beta) / (n_k[k] + V*beta), all counts
excluding the token itself.

Randomness comes from an explicit splitmix64 stream so that runs are
bit-identical across platforms for a given seed: initialisation consumes one
draw per token, then every sweep consumes one draw per token, in document
order. Compiled without fastmath, so the arithmetic is plain IEEE double
operations in a fixed order and can be replayed exactly in pure Python.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_DOUBLE_SCALE = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, nogil=True, inline="always")
def _next_u64(rng_state):
    rng_state[0] = rng_state[0] + _GOLDEN
    x = rng_state[0]
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


@njit(cache=True, nogil=True, inline="always")
def _next_double(rng_state):
    return (_next_u64(rng_state) >> np.uint64(11)) * _DOUBLE_SCALE


@njit(cache=True, nogil=True)
def init_state(tokens, doc_starts, k_topics, z, n_dk, n_wk, n_k, rng_state):
    """Assign every token a uniform random topic and build the count tables."""
    n_docs = doc_starts.shape[0] - 1
    for d in range(n_docs):
        for i in range(doc_starts[d], doc_starts[d + 1]):
            k = np.int64(_next_u64(rng_state) % np.uint64(k_topics))
            z[i] = k
            n_dk[d, k] += 1
            n_wk[tokens[i], k] += 1
            n_k[k] += 1


@njit(cache=True, nogil=True)
def gibbs_sweep(tokens, doc_starts, z, n_dk, n_wk, n_k, inv_nk, alpha, beta, rng_state, probs):
    """One full sweep: resample every token's topic in document order."""
    n_docs = doc_starts.shape[0] - 1
    k_topics = n_dk.shape[1]
    vbeta = beta * n_wk.shape[0]
    for d in range(n_docs):
        row_dk = n_dk[d]
        for i in range(doc_starts[d], doc_starts[d + 1]):
            w = tokens[i]
            old = z[i]
            row_wk = n_wk[w]

            row_dk[old] -= 1
            row_wk[old] -= 1
            n_k[old] -= 1
            inv_nk[old] = 1.0 / (n_k[old] + vbeta)

            total = 0.0
            for k in range(k_topics):
                p = (row_dk[k] + alpha) * (row_wk[k] + beta) * inv_nk[k]
                probs[k] = p
                total += p
            u = _next_double(rng_state) * total

            new = k_topics - 1
            acc = 0.0
            for k in range(k_topics):
                acc += probs[k]
                if u < acc:
                    new = k
                    break

            z[i] = new
            row_dk[new] += 1
            row_wk[new] += 1
            n_k[new] += 1
            inv_nk[new] = 1.0 / (n_k[new] + vbeta)
