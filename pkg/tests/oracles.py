"""Independent reference implementations used to grade the real code.

Everything here is deliberately written the slow, obvious way (pure Python
loops, exhaustive scans) and stays independent of the modules it checks,
except that the Gibbs reference replays the exact same arithmetic so runs can
be compared bit for bit.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Pure-Python splitmix64, the sampler's random stream."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        x = self.state
        x = ((x ^ (x >> 30)) * _MIX1) & _MASK
        x = ((x ^ (x >> 27)) * _MIX2) & _MASK
        return x ^ (x >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)


def reference_gibbs(docs, n_words, k, alpha, beta, iterations, burn_in, seed,
                    topic_order=None):
    """Collapsed Gibbs sampler replaying the production kernel's arithmetic.

    ``topic_order`` permutes the order in which topics are enumerated during
    the categorical draw (identity by default); relabelling a run means
    permuting both the initial assignments and this enumeration order.
    Returns (phi, theta, state_dict).
    """
    if topic_order is None:
        topic_order = list(range(k))
    rng = SplitMix64(seed)
    vbeta = beta * n_words

    z = [[0] * len(doc) for doc in docs]
    n_dk = [[0] * k for _ in docs]
    n_wk = [[0] * k for _ in range(n_words)]
    n_k = [0] * k
    for d, doc in enumerate(docs):
        for i, w in enumerate(doc):
            init = topic_order[rng.next_u64() % k]
            z[d][i] = init
            n_dk[d][init] += 1
            n_wk[w][init] += 1
            n_k[init] += 1

    acc_dk = np.zeros((len(docs), k))
    acc_wk = np.zeros((n_words, k))
    acc_k = np.zeros(k)
    probs = [0.0] * k
    for sweep in range(iterations):
        for d, doc in enumerate(docs):
            row_dk = n_dk[d]
            for i, w in enumerate(doc):
                old = z[d][i]
                row_wk = n_wk[w]
                row_dk[old] -= 1
                row_wk[old] -= 1
                n_k[old] -= 1

                total = 0.0
                for j in range(k):
                    t = topic_order[j]
                    p = (row_dk[t] + alpha) * (row_wk[t] + beta) * (1.0 / (n_k[t] + vbeta))
                    probs[j] = p
                    total += p
                u = rng.next_double() * total
                pick = k - 1
                acc = 0.0
                for j in range(k):
                    acc += probs[j]
                    if u < acc:
                        pick = j
                        break
                new = topic_order[pick]

                z[d][i] = new
                row_dk[new] += 1
                row_wk[new] += 1
                n_k[new] += 1
        if sweep >= burn_in:
            acc_dk += np.asarray(n_dk)
            acc_wk += np.asarray(n_wk)
            acc_k += np.asarray(n_k)

    n_est = iterations - burn_in
    acc_dk /= n_est
    acc_wk /= n_est
    acc_k /= n_est
    doc_lens = np.array([len(doc) for doc in docs], dtype=np.float64)
    phi = (acc_wk.T + beta) / (acc_k + n_words * beta)[:, None]
    theta = (acc_dk + alpha) / (doc_lens + k * alpha)[:, None]
    state = {"z": z, "n_dk": n_dk, "n_wk": n_wk, "n_k": n_k}
    return phi, theta, state


def brute_force_complete_linkage(matrix):
    """Exhaustive complete-linkage agglomeration over member sets.

    Returns a list of (left_id, right_id, height, new_id) with the same id
    scheme and tie-breaking contract as the real implementation, but computes
    every cluster distance as an explicit max over member pairs.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    active = {i: [i] for i in range(n)}
    merges = []
    for step in range(n - 1):
        best = None
        for a, b in itertools.combinations(sorted(active), 2):
            dist = max(matrix[x, y] for x in active[a] for y in active[b])
            if best is None or dist < best[0] or (dist == best[0] and (a, b) < best[1:]):
                best = (dist, a, b)
        dist, a, b = best
        new_id = n + step
        merges.append((a, b, dist, new_id))
        active[new_id] = active.pop(a) + active.pop(b)
    return merges


def brute_force_assignment(theta_main, theta_sub):
    """argmin over the full cosine-distance table, ties to the smaller index."""
    def cosine_dist(u, v):
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu == 0.0 and nv == 0.0:
            return 0.0
        if nu == 0.0 or nv == 0.0:
            return 1.0
        return 1.0 - float(np.dot(u, v)) / (nu * nv)

    out = []
    for s in range(theta_sub.shape[1]):
        best_m, best_d = 0, math.inf
        for m in range(theta_main.shape[1]):
            d = cosine_dist(theta_sub[:, s], theta_main[:, m])
            if d < best_d:
                best_m, best_d = m, d
        out.append(best_m)
    return out


def grid_search_enclosing_circle(circles, grid=48):
    """Smallest circle containing all input circles, by global grid search
    plus convex polish.

    The radius needed from a candidate center is max_i(dist + r_i), a convex
    function of the center; a dense grid finds the basin and Nelder-Mead
    drives the error far below 1e-6 relative.
    """
    from scipy.optimize import minimize

    circles = [(float(x), float(y), float(r)) for x, y, r in circles]
    xs = np.array([c[0] for c in circles])
    ys = np.array([c[1] for c in circles])
    rs = np.array([c[2] for c in circles])

    def radius_needed(center):
        return float(np.max(np.hypot(xs - center[0], ys - center[1]) + rs))

    gx = np.linspace(float(xs.min() - rs.max()), float(xs.max() + rs.max()), grid)
    gy = np.linspace(float(ys.min() - rs.max()), float(ys.max() + rs.max()), grid)
    best = min(((px, py) for px in gx for py in gy), key=radius_needed)

    result = minimize(
        radius_needed, np.array(best), method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-13, "maxiter": 4000, "maxfev": 4000},
    )
    px, py = result.x
    return float(px), float(py), radius_needed(result.x)


def greedy_match_mean_cosine(phi_true, phi_learned):
    """Greedy bipartite matching on row cosine similarity; returns the mean."""
    true = np.asarray(phi_true, dtype=float)
    learned = np.asarray(phi_learned, dtype=float)
    sims = np.zeros((true.shape[0], learned.shape[0]))
    for i in range(true.shape[0]):
        for j in range(learned.shape[0]):
            sims[i, j] = np.dot(true[i], learned[j]) / (
                np.linalg.norm(true[i]) * np.linalg.norm(learned[j])
            )
    chosen = []
    open_rows = set(range(true.shape[0]))
    open_cols = set(range(learned.shape[0]))
    while open_rows and open_cols:
        i, j = max(
            ((i, j) for i in open_rows for j in open_cols), key=lambda ij: sims[ij[0], ij[1]]
        )
        chosen.append(sims[i, j])
        open_rows.remove(i)
        open_cols.remove(j)
    return float(np.mean(chosen))
