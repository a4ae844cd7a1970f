"""Arc-level model of a clique with a star glued onto one of its vertices.

Take the complete graph on ``n_clique`` vertices and identify one of them
with the center of a star carrying ``n_leaves`` leaves.  The identified
vertex (the *hub*) is the search target of every walk in this package.
The graph is stored arc-wise: each undirected edge contributes two mutually
inverse arcs, and all evolution operators act on vectors indexed by arc id.

Arc ids are contiguous: the clique arcs come first in origin-major,
terminus-minor order, then the leaf-to-hub arcs, then the hub-to-leaf arcs.
This makes the inverse map O(1) and keeps iteration cache-friendly.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

#: Vertex id of the glued vertex.  The hub always gets the lowest id so that
#: two builds with the same parameters are byte-identical.
HUB = 0


class ArcClass(IntEnum):
    """Orbits of the arc set under the symmetries fixing the hub.

    The five orbits partition the arcs.  Arc inversion fixes
    ``CLIQUE_INTERIOR`` and swaps the IN/OUT member of each pair.
    """

    CLIQUE_INTERIOR = 0  # ordinary clique vertex -> ordinary clique vertex
    CLIQUE_IN = 1        # ordinary clique vertex -> hub
    CLIQUE_OUT = 2       # hub -> ordinary clique vertex
    STAR_IN = 3          # leaf -> hub
    STAR_OUT = 4         # hub -> leaf


#: Image of each arc class under arc inversion, indexed by ArcClass value.
INVERSE_CLASS = (
    ArcClass.CLIQUE_INTERIOR,
    ArcClass.CLIQUE_OUT,
    ArcClass.CLIQUE_IN,
    ArcClass.STAR_OUT,
    ArcClass.STAR_IN,
)


class LeafPhase(Enum):
    """How amplitudes reflect at the star's leaves.

    ``REVERSAL`` flips the sign of the amplitude bounced back from each
    leaf.  ``PLAIN`` keeps the ordinary degree-1 diffusion coin, which is
    +1, giving the unmodified walk used as the baseline.
    """

    REVERSAL = "reversal"
    PLAIN = "plain"


@dataclass(frozen=True, eq=False)
class GluedGraph:
    """Immutable arc table of the glued graph.

    All arrays are indexed by arc id.  ``degree`` is indexed by vertex id
    (hub = 0, ordinary clique vertices 1..n_clique-1, then the leaves).
    Safe for concurrent shared reads after construction.
    """

    n_clique: int
    n_leaves: int
    arc_count: int
    origin: np.ndarray      # int64, shape (arc_count,)
    terminus: np.ndarray    # int64, shape (arc_count,)
    inverse: np.ndarray     # int64, shape (arc_count,)
    arc_class: np.ndarray   # int64, shape (arc_count,), values are ArcClass
    degree: np.ndarray      # int64, shape (n_vertices,)
    class_order: np.ndarray  # int64, arc ids sorted by class (stable)

    @property
    def n_vertices(self) -> int:
        return self.n_clique + self.n_leaves

    @property
    def hub(self) -> int:
        return HUB


def _validate_sizes(n_clique: int, n_leaves: int) -> None:
    if n_clique < 3:
        raise ValueError(
            f"n_clique must be at least 3, got {n_clique}; the clique walk "
            "degenerates below the triangle"
        )
    if n_leaves < 1:
        raise ValueError(f"n_leaves must be at least 1, got {n_leaves}")


def leaves_from_alpha(n_clique: int, alpha: float) -> int:
    """Number of leaves for scaling exponent ``alpha``: floor(N**alpha), >= 1.

    The exponent only ever enters through this floor; everything downstream
    works with the exact integer leaf count.
    """
    if n_clique < 3:
        raise ValueError(f"n_clique must be at least 3, got {n_clique}")
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    power = float(n_clique) ** float(alpha)
    # pow() can land a hair below an exact integer; snap within 4 ulps.
    nearest = round(power)
    if nearest > 0 and abs(power - nearest) <= 4 * math.ulp(power):
        return max(1, nearest)
    return max(1, math.floor(power))


def class_sizes(n_clique: int, n_leaves: int) -> tuple[int, int, int, int, int]:
    """Sizes of the five arc classes, in ArcClass order.

    ((N-1)(N-2), N-1, N-1, m, m) for a clique on N vertices and m leaves.
    """
    _validate_sizes(n_clique, n_leaves)
    n, m = n_clique, n_leaves
    return ((n - 1) * (n - 2), n - 1, n - 1, m, m)


def build_graph(n_clique: int, n_leaves: int) -> GluedGraph:
    """Construct the glued graph as an arc table.

    Parameters
    ----------
    n_clique:
        Number of clique vertices (>= 3); one of them becomes the hub.
    n_leaves:
        Number of star leaves attached to the hub (>= 1).

    Returns
    -------
    GluedGraph
        Arc table with ``n_clique*(n_clique-1) + 2*n_leaves`` arcs.
    """
    _validate_sizes(n_clique, n_leaves)
    n, m = n_clique, n_leaves
    arc_count = n * (n - 1) + 2 * m
    if arc_count > sys.maxsize:
        raise ValueError(
            f"arc count {arc_count} exceeds the platform's addressable size"
        )

    clique_arcs = n * (n - 1)
    origin = np.empty(arc_count, dtype=np.int64)
    terminus = np.empty(arc_count, dtype=np.int64)
    inverse = np.empty(arc_count, dtype=np.int64)
    arc_class = np.empty(arc_count, dtype=np.int64)

    # Clique block: arc (u -> w) sits at u*(n-1) + w - (w > u).
    u = np.repeat(np.arange(n, dtype=np.int64), n - 1)
    slot = np.tile(np.arange(n - 1, dtype=np.int64), n)
    w = slot + (slot >= u)
    origin[:clique_arcs] = u
    terminus[:clique_arcs] = w
    inverse[:clique_arcs] = w * (n - 1) + u - (u > w)
    cls = np.full(clique_arcs, ArcClass.CLIQUE_INTERIOR, dtype=np.int64)
    cls[w == HUB] = ArcClass.CLIQUE_IN
    cls[u == HUB] = ArcClass.CLIQUE_OUT
    arc_class[:clique_arcs] = cls

    # Star block: m arcs into the hub, then m arcs out of it.
    leaves = np.arange(n, n + m, dtype=np.int64)
    into = np.arange(clique_arcs, clique_arcs + m, dtype=np.int64)
    out = into + m
    origin[into] = leaves
    terminus[into] = HUB
    origin[out] = HUB
    terminus[out] = leaves
    inverse[into] = out
    inverse[out] = into
    arc_class[into] = ArcClass.STAR_IN
    arc_class[out] = ArcClass.STAR_OUT

    degree = np.bincount(terminus, minlength=n + m).astype(np.int64)
    # class-sorted arc order, so per-class sums can run over contiguous
    # slices (pairwise summation) instead of sequential scatter-adds
    class_order = np.argsort(arc_class, kind="stable")
    return GluedGraph(
        n_clique=n,
        n_leaves=m,
        arc_count=arc_count,
        origin=origin,
        terminus=terminus,
        inverse=inverse,
        arc_class=arc_class,
        degree=degree,
        class_order=class_order,
    )
