"""Exact 5-dimensional reduced dynamics on the arc-class space.

The walk started from the uniform clique state never leaves the span of the
five class-uniform vectors, so the full evolution collapses to a 5x5
orthogonal matrix.  This module builds that matrix from closed-form entries
(validated against the conjugated full operator in the test suite) and
iterates it at O(1) cost per step, which keeps clique sizes of 10^6 and
beyond on a desk.

Class order is fixed everywhere as
(CLIQUE_INTERIOR, CLIQUE_IN, CLIQUE_OUT, STAR_IN, STAR_OUT);
vertex-class order for the boundary operator is
(ordinary clique vertices, leaves, hub).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import ArcClass, LeafPhase, class_sizes
from .trace import ProbabilityTrace


@dataclass(frozen=True, eq=False)
class CollapsedState:
    """Five complex amplitudes indexed by ArcClass, plus a step counter."""

    amplitudes: np.ndarray  # complex128, shape (5,)
    time: int = 0

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (5,):
            raise ValueError(f"expected 5 amplitudes, got {self.amplitudes.shape}")


@dataclass(frozen=True, eq=False)
class ReducedOperators:
    """The reduced walk operators on the class space.

    ``shift`` is the arc-inversion permutation (an involution), ``boundary``
    maps arc classes to vertex classes, ``evolution`` is the one-step
    operator shift @ (2 boundary* boundary - I), and ``discriminant`` is the
    symmetric 3x3 matrix boundary @ shift @ boundary* whose eigenvalues
    generate the walk's spectrum.
    """

    n_clique: int
    n_leaves: int
    leaf_phase: LeafPhase
    shift: np.ndarray        # float64, (5, 5)
    boundary: np.ndarray     # float64, (3, 5)
    evolution: np.ndarray    # float64, (5, 5)
    discriminant: np.ndarray  # float64, (3, 3)


#: Arc-inversion permutation on the five classes.
_SHIFT = np.array(
    [
        [1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0],
    ],
    dtype=np.float64,
)


def build_reduced_operators(
    n_clique: int, n_leaves: int, leaf_phase: LeafPhase = LeafPhase.REVERSAL
) -> ReducedOperators:
    """Build the reduced operators from closed-form entries.

    The boundary row for an ordinary clique vertex is
    (sqrt((N-2)/(N-1)), 0, 1/sqrt(N-1), 0, 0): an interior clique arc and a
    hub-to-clique arc arrive there.  The hub row is
    (0, sqrt((N-1)/(N+m-1)), 0, sqrt(m/(N+m-1)), 0).  The leaf row is zero
    under phase reversal and picks up the single hub-to-leaf arc,
    (0, 0, 0, 0, 1), in plain mode.
    """
    class_sizes(n_clique, n_leaves)  # validates the parameter ranges
    n, m = n_clique, n_leaves
    boundary = np.zeros((3, 5), dtype=np.float64)
    boundary[0, ArcClass.CLIQUE_INTERIOR] = math.sqrt((n - 2) / (n - 1))
    boundary[0, ArcClass.CLIQUE_OUT] = 1.0 / math.sqrt(n - 1)
    boundary[2, ArcClass.CLIQUE_IN] = math.sqrt((n - 1) / (n + m - 1))
    boundary[2, ArcClass.STAR_IN] = math.sqrt(m / (n + m - 1))
    if leaf_phase is LeafPhase.PLAIN:
        boundary[1, ArcClass.STAR_OUT] = 1.0
    evolution = _SHIFT @ (2.0 * boundary.T @ boundary - np.eye(5))
    discriminant = boundary @ _SHIFT @ boundary.T
    return ReducedOperators(
        n_clique=n,
        n_leaves=m,
        leaf_phase=leaf_phase,
        shift=_SHIFT.copy(),
        boundary=boundary,
        evolution=evolution,
        discriminant=discriminant,
    )


def collapsed_initial_state(n_clique: int, n_leaves: int) -> CollapsedState:
    """Collapse of the uniform clique state: (sqrt((N-2)/N), 1/sqrt(N), 1/sqrt(N), 0, 0)."""
    class_sizes(n_clique, n_leaves)
    n = n_clique
    amplitudes = np.zeros(5, dtype=np.complex128)
    amplitudes[ArcClass.CLIQUE_INTERIOR] = math.sqrt((n - 2) / n)
    amplitudes[ArcClass.CLIQUE_IN] = 1.0 / math.sqrt(n)
    amplitudes[ArcClass.CLIQUE_OUT] = 1.0 / math.sqrt(n)
    return CollapsedState(amplitudes=amplitudes, time=0)


def success_probability(state: CollapsedState) -> float:
    """Probability of measuring the hub: the squared mass arriving there."""
    amps = state.amplitudes
    return float(
        abs(amps[ArcClass.CLIQUE_IN]) ** 2 + abs(amps[ArcClass.STAR_IN]) ** 2
    )


def evolve_collapsed(
    ops: ReducedOperators, state: CollapsedState, t_max: int
) -> ProbabilityTrace:
    """Iterate the reduced step operator, recording the hub trace.

    Returns a trace of length ``t_max + 1`` whose row ``t`` holds the state
    after ``t`` applications of the evolution.
    """
    if t_max < 0:
        raise ValueError(f"t_max must be nonnegative, got {t_max}")
    evolution = ops.evolution
    psi = state.amplitudes.astype(np.complex128, copy=True)
    p = np.empty(t_max + 1, dtype=np.float64)
    clique_in = np.empty(t_max + 1, dtype=np.complex128)
    star_in = np.empty(t_max + 1, dtype=np.complex128)
    for t in range(t_max + 1):
        if t:
            psi = evolution @ psi
        p[t] = abs(psi[ArcClass.CLIQUE_IN]) ** 2 + abs(psi[ArcClass.STAR_IN]) ** 2
        clique_in[t] = psi[ArcClass.CLIQUE_IN]
        star_in[t] = psi[ArcClass.STAR_IN]
    times = np.arange(state.time, state.time + t_max + 1, dtype=np.int64)
    metadata = {
        "n": str(ops.n_clique),
        "m": str(ops.n_leaves),
        "mode": "collapsed",
        "leaf_phase": ops.leaf_phase.value,
    }
    return ProbabilityTrace(
        times=times,
        p_hub=p,
        psi_clique_in=clique_in,
        psi_star_in=star_in,
        metadata=metadata,
    )
