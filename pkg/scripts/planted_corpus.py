#!/usr/bin/env python3
"""Generate a synthetic corpus from a known LDA model (the generative oracle).

Draws topic-word rows from Dirichlet(beta), per-document mixtures from
Dirichlet(alpha), then samples every token from the generative process. The
planted phi/theta are the ground truth that a trained model is graded
against. Token streams are emitted as integer word ids; --words also renders
them as fake words ("w017 w003 ...") for end-to-end runs.

Usage:
    python scripts/planted_corpus.py --docs 500 --topics 5 --vocab 100 \
        --doc-len 60 --alpha 0.1 --beta 0.01 --seed 7 --out planted.json
"""
from __future__ import annotations

import argparse
import json

import numpy as np


def generate_planted_corpus(
    n_docs: int,
    n_topics: int,
    n_words: int,
    doc_len_mean: float,
    alpha: float,
    beta: float,
    seed: int,
):
    """Returns (docs, phi_true, theta_true); docs are lists of word ids."""
    rng = np.random.default_rng(seed)
    phi = rng.dirichlet(np.full(n_words, beta), size=n_topics)
    theta = rng.dirichlet(np.full(n_topics, alpha), size=n_docs)
    docs = []
    for d in range(n_docs):
        length = max(1, int(rng.poisson(doc_len_mean)))
        topics = rng.choice(n_topics, size=length, p=theta[d])
        words = [int(rng.choice(n_words, p=phi[t])) for t in topics]
        docs.append(words)
    return docs, phi, theta


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=500)
    parser.add_argument("--topics", type=int, default=5)
    parser.add_argument("--vocab", type=int, default=100)
    parser.add_argument("--doc-len", type=float, default=60.0)
    parser.add_argument("--alpha", type=float, default=0.1)
    parser.add_argument("--beta", type=float, default=0.01)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--words", action="store_true", help="emit fake word strings")
    parser.add_argument("--out", default="planted.json")
    args = parser.parse_args()

    docs, phi, theta = generate_planted_corpus(
        args.docs, args.topics, args.vocab, args.doc_len, args.alpha, args.beta, args.seed
    )
    payload = {
        "n_topics": args.topics,
        "n_vocab": args.vocab,
        "alpha": args.alpha,
        "beta": args.beta,
        "seed": args.seed,
        "phi_true": phi.tolist(),
        "theta_true": theta.tolist(),
        "docs": [
            " ".join(f"w{w:03d}" for w in doc) if args.words else doc for doc in docs
        ],
    }
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)
    print(f"wrote {args.docs} docs, {sum(len(d) for d in docs)} tokens -> {args.out}")


if __name__ == "__main__":
    main()
