"""Bubble-treemap layout: weight-proportional circles packed along a dendrogram.

Packing walks the merge sequence bottom-up. At each internal node the right
subtree slides towards the left one along a candidate direction until the
closest pair of actual bubbles touches (with the padding gap); 64 evenly
spaced directions are tried and the one giving the smallest bounding estimate
wins. Every node's enclosing circle is the exact smallest circle containing
all bubbles of its subtree, so the map's bounding circle is tight.

Flat clusters (from cutting the dendrogram) colour the bubbles and get a
convex-hull outline offset outward by the padding gap.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull

from .cluster import Dendrogram, cut

__all__ = [
    "Bubble",
    "BubbleMap",
    "LayoutError",
    "smallest_enclosing_circle",
    "layout_map",
    "render_svg",
    "map_to_dict",
    "map_from_dict",
]

# Multiplicative slack used by containment tests; the public contract is
# center distance + r_i <= R + 1e-9 * R.
_SLACK = 1e-9
_SEC_SHUFFLE_SEED = 0x5EC
_MAX_LEAF_RADIUS = 100.0
_OUTLINE_ARC_POINTS = 32


class LayoutError(Exception):
    pass


@dataclass(frozen=True)
class Bubble:
    topic: tuple[str, int]
    x: float
    y: float
    r: float
    cluster: int
    label: str


@dataclass(frozen=True)
class BubbleMap:
    bubbles: tuple[Bubble, ...]
    cluster_outlines: dict[int, tuple[tuple[float, float], ...]]
    bounding_circle: tuple[float, float, float]


# ---------- smallest enclosing circle of circles ----------

def _contains(circle, other, slack=_SLACK) -> bool:
    cx, cy, cr = circle
    ox, oy, orad = other
    return math.hypot(ox - cx, oy - cy) + orad <= cr + slack * max(cr, 1e-30)


def _circle_two(a, b):
    """Smallest circle containing two circles."""
    ax, ay, ar = a
    bx, by, br = b
    d = math.hypot(bx - ax, by - ay)
    if d + br <= ar:
        return a
    if d + ar <= br:
        return b
    radius = (d + ar + br) / 2.0
    f = (radius - ar) / d
    return (ax + (bx - ax) * f, ay + (by - ay) * f, radius)


def _circles_three(a, b, c):
    """Candidate circles internally tangent to all three inputs.

    Solves dist(center, c_i) = R - r_i; pairwise subtraction gives two linear
    equations in (x, y, R), leaving one quadratic in R. Returns up to two
    candidates (empty for collinear-degenerate configurations, which the
    pairwise candidates cover).
    """
    (x1, y1, r1), (x2, y2, r2), (x3, y3, r3) = a, b, c
    e1 = x1 * x1 + y1 * y1 - r1 * r1
    a1, b1, c1 = 2 * (x2 - x1), 2 * (y2 - y1), -2 * (r2 - r1)
    d1 = (x2 * x2 + y2 * y2 - r2 * r2) - e1
    a2, b2, c2 = 2 * (x3 - x1), 2 * (y3 - y1), -2 * (r3 - r1)
    d2 = (x3 * x3 + y3 * y3 - r3 * r3) - e1

    det = a1 * b2 - a2 * b1
    scale = max(abs(a1), abs(b1), abs(a2), abs(b2), 1e-30)
    if abs(det) <= 1e-12 * scale * scale:
        return []
    # center as an affine function of R: (x, y) = (x0 + xr R, y0 + yr R)
    x0 = (d1 * b2 - d2 * b1) / det
    xr = (-c1 * b2 + c2 * b1) / det
    y0 = (a1 * d2 - a2 * d1) / det
    yr = (a2 * c1 - a1 * c2) / det

    px, py = x0 - x1, y0 - y1
    qa = xr * xr + yr * yr - 1.0
    qb = 2.0 * (px * xr + py * yr + r1)
    qc = px * px + py * py - r1 * r1

    roots = []
    if abs(qa) < 1e-14:
        if qb != 0.0:
            roots.append(-qc / qb)
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc >= 0.0:
            sq = math.sqrt(disc)
            roots.extend([(-qb + sq) / (2 * qa), (-qb - sq) / (2 * qa)])

    min_radius = max(r1, r2, r3)
    out = []
    for radius in roots:
        if radius >= min_radius - 1e-9 * max(min_radius, 1.0):
            out.append((x0 + xr * radius, y0 + yr * radius, radius))
    return out


def _sec_of_basis(support):
    """Exact smallest enclosing circle of at most a handful of circles."""
    best = None
    candidates = list(support)
    for i, j in combinations(range(len(support)), 2):
        candidates.append(_circle_two(support[i], support[j]))
    for i, j, k in combinations(range(len(support)), 3):
        candidates.extend(_circles_three(support[i], support[j], support[k]))
    for cand in candidates:
        if all(_contains(cand, s) for s in support):
            if best is None or cand[2] < best[2]:
                best = cand
    if best is None:  # numerically degenerate; cover from the two-circle bound
        best = support[0]
        for s in support[1:]:
            best = _circle_two(best, s)
    return best


def smallest_enclosing_circle(circles) -> tuple[float, float, float]:
    """Minimal circle containing every input circle.

    Exact subset enumeration for up to three circles; incremental basis
    updates with a seeded random scan order otherwise. Containment holds
    within a 1e-9 relative slack.
    """
    items = [(float(x), float(y), float(r)) for x, y, r in circles]
    if not items:
        raise LayoutError("smallest_enclosing_circle needs at least one circle")
    if len(items) <= 3:
        return _sec_of_basis(items)

    order = list(range(len(items)))
    random.Random(_SEC_SHUFFLE_SEED).shuffle(order)
    xs = np.array([items[i][0] for i in order])
    ys = np.array([items[i][1] for i in order])
    rs = np.array([items[i][2] for i in order])

    basis = [0]
    cx, cy, cr = items[order[0]]
    for _ in range(10 * len(items) + 50):
        needed = np.hypot(xs - cx, ys - cy) + rs
        worst = int(np.argmax(needed))
        if needed[worst] <= cr + _SLACK * max(cr, 1e-30):
            break
        group = list(dict.fromkeys(basis + [worst]))
        support = [(xs[i], ys[i], rs[i]) for i in group]
        cx, cy, cr = _sec_of_basis(support)
        basis = [
            i for i in group
            if math.hypot(xs[i] - cx, ys[i] - cy) + rs[i] >= cr - 1e-7 * max(cr, 1e-30)
        ] or group
    else:
        # Did not settle (pathological float ties): enlarge to cover.
        needed = np.hypot(xs - cx, ys - cy) + rs
        cr = float(needed.max())
    return (cx, cy, cr)


# ---------- packing ----------

@dataclass
class _Assembly:
    """A packed subtree: bubble coordinates relative to its enclosing-circle
    center, which is at the origin."""

    leaves: np.ndarray  # leaf indices
    xs: np.ndarray
    ys: np.ndarray
    rs: np.ndarray
    radius: float       # enclosing-circle radius


def _leaf_assembly(leaf: int, radius: float) -> _Assembly:
    return _Assembly(
        leaves=np.array([leaf]),
        xs=np.zeros(1),
        ys=np.zeros(1),
        rs=np.array([radius]),
        radius=radius,
    )


def _pack_pair(a: _Assembly, b: _Assembly, padding: float, n_angles: int) -> _Assembly:
    """Slide b towards a along each candidate direction until bubbles touch,
    keep the direction with the smallest bounding estimate, then recentre on
    the exact enclosing circle of the union."""
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    units = np.stack([np.cos(angles), np.sin(angles)], axis=1)  # (n_angles, 2)

    # Pairwise contact: |c - t u| = s has larger root t = u.c + sqrt((u.c)^2 - |c|^2 + s^2).
    cx = a.xs[:, None] - b.xs[None, :]
    cy = a.ys[:, None] - b.ys[None, :]
    s = a.rs[:, None] + b.rs[None, :] + padding
    c_sq_minus_s_sq = (cx * cx + cy * cy - s * s).ravel()
    dots = cx.ravel()[:, None] * units[None, :, 0] + cy.ravel()[:, None] * units[None, :, 1]
    disc = dots * dots - c_sq_minus_s_sq[:, None]
    valid = disc >= 0.0
    roots = np.where(valid, dots + np.sqrt(np.where(valid, disc, 0.0)), -np.inf)
    t = roots.max(axis=0)  # (n_angles,)
    fallback = a.radius + b.radius + padding
    t = np.where(np.isfinite(t), t, fallback)

    # Bounding estimate per angle: radius needed from the two-enclosure trial center.
    centers_b = t[:, None] * units  # b's enclosure center per angle
    d = np.abs(t)
    half = (d + a.radius + b.radius) / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(d > 0.0, (half - a.radius) / np.where(d > 0.0, d, 1.0), 0.0)
    trial = centers_b * f[:, None]
    trial[d + b.radius <= a.radius] = 0.0
    inside_b = d + a.radius <= b.radius
    trial[inside_b] = centers_b[inside_b]

    reach_a = np.hypot(a.xs[None, :] - trial[:, 0:1], a.ys[None, :] - trial[:, 1:2]) + a.rs[None, :]
    bx = centers_b[:, 0:1] + b.xs[None, :]
    by = centers_b[:, 1:2] + b.ys[None, :]
    reach_b = np.hypot(bx - trial[:, 0:1], by - trial[:, 1:2]) + b.rs[None, :]
    estimate = np.maximum(reach_a.max(axis=1), reach_b.max(axis=1))

    best = int(np.argmin(estimate))
    offset = t[best] * units[best]

    xs = np.concatenate([a.xs, b.xs + offset[0]])
    ys = np.concatenate([a.ys, b.ys + offset[1]])
    rs = np.concatenate([a.rs, b.rs])
    ecx, ecy, radius = smallest_enclosing_circle(np.stack([xs, ys, rs], axis=1))
    return _Assembly(
        leaves=np.concatenate([a.leaves, b.leaves]),
        xs=xs - ecx,
        ys=ys - ecy,
        rs=rs,
        radius=radius,
    )


def _cluster_outline(bubbles, padding: float) -> tuple[tuple[float, float], ...]:
    """Closed convex outline around a cluster's bubbles, offset by the padding."""
    steps = np.arange(_OUTLINE_ARC_POINTS)
    angles = 2.0 * np.pi * steps / _OUTLINE_ARC_POINTS
    points = []
    for bubble in bubbles:
        radius = bubble.r + padding
        points.append(
            np.stack(
                [bubble.x + radius * np.cos(angles), bubble.y + radius * np.sin(angles)],
                axis=1,
            )
        )
    cloud = np.concatenate(points)
    hull = ConvexHull(cloud)
    ring = [(float(cloud[v, 0]), float(cloud[v, 1])) for v in hull.vertices]
    ring.append(ring[0])
    return tuple(ring)


def layout_map(
    dendro: Dendrogram,
    weights,
    n_clusters: int,
    labels,
    topics=None,
    padding_fraction: float = 0.04,
    n_angles: int = 64,
) -> BubbleMap:
    """Lay out one bubble map for the given dendrogram and topic weights.

    Bubble areas are proportional to the weights (largest radius scaled to
    100 layout units); ``n_clusters`` flat clusters from the dendrogram set
    the colour groups and outlines. ``topics`` optionally names each leaf as
    a (level, index) pair.
    """
    weights = np.asarray(weights, dtype=np.float64)
    n = dendro.n_leaves
    if weights.shape != (n,):
        raise LayoutError(f"expected {n} weights, got shape {weights.shape}")
    if np.any(weights <= 0.0):
        raise LayoutError("all topic weights must be positive")
    labels = list(labels)
    if len(labels) != n:
        raise LayoutError(f"expected {n} labels, got {len(labels)}")
    if topics is None:
        topics = [("topic", i) for i in range(n)]

    raw = np.sqrt(weights / np.pi)
    radii = raw * (_MAX_LEAF_RADIUS / raw.max())
    padding = padding_fraction * float(radii.mean())

    nodes: dict[int, _Assembly] = {i: _leaf_assembly(i, float(radii[i])) for i in range(n)}
    for merge in dendro.merges:
        left = nodes.pop(merge.left)
        right = nodes.pop(merge.right)
        nodes[merge.node] = _pack_pair(left, right, padding, n_angles)
    root = nodes[max(nodes)] if nodes else None

    clusters = cut(dendro, n_clusters)
    bubbles = [None] * n
    for pos, leaf in enumerate(root.leaves):
        leaf = int(leaf)
        bubbles[leaf] = Bubble(
            topic=tuple(topics[leaf]),
            x=float(root.xs[pos]),
            y=float(root.ys[pos]),
            r=float(root.rs[pos]),
            cluster=clusters[leaf],
            label=labels[leaf],
        )

    outlines = {}
    for cluster_id in sorted(set(clusters)):
        members = [b for b in bubbles if b.cluster == cluster_id]
        outlines[cluster_id] = _cluster_outline(members, padding)

    return BubbleMap(
        bubbles=tuple(bubbles),
        cluster_outlines=outlines,
        bounding_circle=(0.0, 0.0, float(root.radius)),
    )


# ---------- artifact serialization ----------

def map_to_dict(bubble_map: BubbleMap) -> dict:
    return {
        "bubbles": [
            {
                "level": b.topic[0], "index": b.topic[1],
                "x": b.x, "y": b.y, "r": b.r,
                "cluster": b.cluster, "label": b.label,
            }
            for b in bubble_map.bubbles
        ],
        "cluster_outlines": {
            str(cid): [[x, y] for x, y in ring]
            for cid, ring in bubble_map.cluster_outlines.items()
        },
        "bounding_circle": list(bubble_map.bounding_circle),
    }


def map_from_dict(data: dict) -> BubbleMap:
    return BubbleMap(
        bubbles=tuple(
            Bubble(
                topic=(b["level"], int(b["index"])),
                x=float(b["x"]), y=float(b["y"]), r=float(b["r"]),
                cluster=int(b["cluster"]), label=b["label"],
            )
            for b in data["bubbles"]
        ),
        cluster_outlines={
            int(cid): tuple((float(x), float(y)) for x, y in ring)
            for cid, ring in data["cluster_outlines"].items()
        },
        bounding_circle=tuple(float(v) for v in data["bounding_circle"]),
    )


# ---------- debug SVG ----------

_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)


def render_svg(bubble_map: BubbleMap) -> str:
    """Standalone SVG of one map (debugging aid, not part of the bundle)."""
    _, _, bound = bubble_map.bounding_circle
    pad = 0.05 * bound if bound > 0 else 1.0
    size = 2 * (bound + pad)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-bound - pad:.2f} '
        f'{-bound - pad:.2f} {size:.2f} {size:.2f}">',
        f'<circle cx="0" cy="0" r="{bound:.3f}" fill="none" stroke="#ccc"/>',
    ]
    for cluster_id, ring in sorted(bubble_map.cluster_outlines.items()):
        path = " ".join(f"{x:.3f},{y:.3f}" for x, y in ring)
        color = _PALETTE[cluster_id % len(_PALETTE)]
        lines.append(f'<polygon points="{path}" fill="{color}" fill-opacity="0.15" stroke="{color}"/>')
    for bubble in bubble_map.bubbles:
        color = _PALETTE[bubble.cluster % len(_PALETTE)]
        lines.append(
            f'<circle cx="{bubble.x:.3f}" cy="{bubble.y:.3f}" r="{bubble.r:.3f}" '
            f'fill="{color}" fill-opacity="0.8"><title>{bubble.label}</title></circle>'
        )
        lines.append(
            f'<text x="{bubble.x:.3f}" y="{bubble.y:.3f}" text-anchor="middle" '
            f'font-size="{max(bubble.r / 4, 4):.1f}">{bubble.label}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines)
