"""Cosine distances between topics and complete-linkage agglomeration.

The dendrogram records merges as (left, right, height, new_id) with leaves
0..n-1 and internal nodes n..2n-2. Merging always picks the active pair with
the smallest complete-linkage distance; ties break to the lexicographically
smallest (left, right) node-id pair, which keeps layouts reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Merge",
    "Dendrogram",
    "ClusterError",
    "cosine_distance_matrix",
    "agglomerate",
    "cut",
]


class ClusterError(Exception):
    pass


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    node: int


@dataclass(frozen=True)
class Dendrogram:
    n_leaves: int
    merges: tuple[Merge, ...]

    def __post_init__(self):
        heights = [m.height for m in self.merges]
        if any(b < a for a, b in zip(heights, heights[1:])):
            raise ClusterError("merge heights must be non-decreasing")
        merged = [m.left for m in self.merges] + [m.right for m in self.merges]
        if len(set(merged)) != len(merged):
            raise ClusterError("a node was merged more than once")

    def leaves_under(self, node: int) -> tuple[int, ...]:
        """All leaf indices in the subtree rooted at ``node``."""
        if node < self.n_leaves:
            return (node,)
        merge = self.merges[node - self.n_leaves]
        return self.leaves_under(merge.left) + self.leaves_under(merge.right)


def cosine_distance_matrix(vectors) -> np.ndarray:
    """Pairwise 1 - cosine similarity; symmetric, zero diagonal, clipped to [0, 2].

    Zero-norm vectors are at distance 1 from everything and 0 from themselves.
    """
    mat = np.asarray(vectors, dtype=np.float64)
    if mat.ndim == 1:
        mat = mat[None, :]
    if mat.ndim != 2:
        raise ClusterError(f"expected a list of vectors, got ndim={mat.ndim}")
    norms = np.linalg.norm(mat, axis=1)
    zero = norms == 0.0
    safe = np.where(zero, 1.0, norms)
    unit = mat / safe[:, None]
    dist = 1.0 - unit @ unit.T
    dist[zero, :] = 1.0
    dist[:, zero] = 1.0
    np.clip(dist, 0.0, 2.0, out=dist)
    np.fill_diagonal(dist, 0.0)
    # Force exact symmetry (BLAS does not guarantee it entry-wise).
    upper = np.triu_indices_from(dist, k=1)
    dist.T[upper] = dist[upper]
    return dist


def agglomerate(matrix: np.ndarray) -> Dendrogram:
    """Complete-linkage agglomerative clustering over a distance matrix."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ClusterError(f"distance matrix must be square, got {matrix.shape}")
    n = matrix.shape[0]
    if n == 0:
        raise ClusterError("empty distance matrix")

    # Active-cluster distance matrix; ids stay sorted ascending because each
    # new node id exceeds all existing ones and is appended at the end.
    work = matrix.copy()
    ids = list(range(n))
    merges: list[Merge] = []
    for step in range(n - 1):
        m = work.copy()
        np.fill_diagonal(m, np.inf)
        m[np.tril_indices_from(m)] = np.inf
        flat = int(np.argmin(m))  # row-major first minimum = lexicographic tie-break
        i, j = divmod(flat, m.shape[1])
        height = float(work[i, j])
        new_id = n + step
        merges.append(Merge(left=ids[i], right=ids[j], height=height, node=new_id))

        # Lance-Williams update for complete linkage: d(new, x) = max(d(i,x), d(j,x)).
        merged_row = np.maximum(work[i], work[j])
        keep = [x for x in range(len(ids)) if x not in (i, j)]
        work = work[np.ix_(keep, keep)]
        merged_row = merged_row[keep]
        work = np.pad(work, ((0, 1), (0, 1)))
        work[-1, :-1] = merged_row
        work[:-1, -1] = merged_row
        ids = [ids[x] for x in keep] + [new_id]
    return Dendrogram(n_leaves=n, merges=tuple(merges))


def cut(dendro: Dendrogram, n_clusters: int) -> tuple[int, ...]:
    """Flat clusters from undoing the last n_clusters - 1 merges.

    Returns one cluster id per leaf; ids are assigned 0.. in order of each
    cluster's smallest leaf index.
    """
    n = dendro.n_leaves
    if not 1 <= n_clusters <= n:
        raise ClusterError(f"n_clusters must be in [1, {n}], got {n_clusters}")

    parent = list(range(2 * n - 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for merge in dendro.merges[: n - n_clusters]:
        parent[find(merge.left)] = find(merge.node)
        parent[find(merge.right)] = find(merge.node)

    roots: dict[int, list[int]] = {}
    for leaf in range(n):
        roots.setdefault(find(leaf), []).append(leaf)
    groups = sorted(roots.values(), key=min)
    assignment = [0] * n
    for cluster_id, leaves in enumerate(groups):
        for leaf in leaves:
            assignment[leaf] = cluster_id
    return tuple(assignment)
