"""Cross-evaluator verification harness.

Runs the consistency checks that tie the three evaluators together on one
parameter point: full arc-space evolution against the reduced iteration,
the reduced operator against the conjugated full operator, commutation of
the evolution with the class-averaging projection, unitarity, shift
involution, spectral residuals, and the eigenbasis evaluator against plain
iteration.  Used by the command-line ``verify`` command and by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import collapsed as cw
from . import full_walk as fw
from .graph import GluedGraph, LeafPhase, build_graph
from .spectral import EigenbasisEvaluator, discriminant_angles


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    n_clique: int
    n_leaves: int
    steps: int
    seed: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n_clique,
            "m": self.n_leaves,
            "steps": self.steps,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def random_walk_states(graph: GluedGraph, count: int, seed: int) -> np.ndarray:
    """Random unit states on the arc space, one per row."""
    rng = np.random.default_rng(seed)
    states = rng.standard_normal((count, graph.arc_count)) + 1j * rng.standard_normal(
        (count, graph.arc_count)
    )
    return states / np.linalg.norm(states, axis=1, keepdims=True)


def conjugated_reduced_operator(
    graph: GluedGraph, leaf_phase: LeafPhase
) -> np.ndarray:
    """The 5x5 matrix obtained by sandwiching one full step between lift and
    collapse; must reproduce the closed-form reduced operator."""
    matrix = np.zeros((5, 5), dtype=np.complex128)
    for j in range(5):
        basis = np.zeros(5, dtype=np.complex128)
        basis[j] = 1.0
        lifted = fw.lift(graph, cw.CollapsedState(amplitudes=basis))
        stepped = fw.step(graph, lifted, leaf_phase)
        matrix[:, j] = fw.collapse(graph, stepped).amplitudes
    return matrix


def run_checks(
    n_clique: int,
    n_leaves: int,
    steps: int,
    seed: int = 0,
    leaf_phase: LeafPhase = LeafPhase.REVERSAL,
    n_random_states: int = 20,
    full_vs_collapsed_tol: float = 1e-10,
    commutation_tol: float = 1e-12,
    unitarity_tol: float = 1e-12,
    conjugation_tol: float = 1e-13,
    residual_tol: float = 1e-10,
    eigenbasis_tol: float = 1e-10,
    roundtrip_tol: float = 1e-14,
    inject_leaf_phase_flip: bool = False,
) -> VerificationReport:
    """Run every cross check on one (N, m) point.

    ``inject_leaf_phase_flip`` is a self-test hook: it flips the leaf phase
    in the full evolution only, which must make the cross checks fail.
    """
    graph = build_graph(n_clique, n_leaves)
    checks: list[CheckResult] = []

    full_phase = leaf_phase
    if inject_leaf_phase_flip:
        full_phase = (
            LeafPhase.PLAIN if leaf_phase is LeafPhase.REVERSAL else LeafPhase.REVERSAL
        )

    # full evolution vs reduced iteration
    full_trace = fw.evolve(graph, fw.initial_state(graph), steps, full_phase)
    ops = cw.build_reduced_operators(n_clique, n_leaves, leaf_phase)
    reduced_trace = cw.evolve_collapsed(
        ops, cw.collapsed_initial_state(n_clique, n_leaves), steps
    )
    dev = float(np.abs(full_trace.p_hub - reduced_trace.p_hub).max())
    checks.append(
        CheckResult(
            name="full_vs_collapsed_probability",
            passed=dev < full_vs_collapsed_tol,
            max_deviation=dev,
            tolerance=full_vs_collapsed_tol,
            detail=f"max |p_full - p_collapsed| over {steps + 1} rows",
        )
    )

    # commutation of the step with the class-averaging projection
    states = random_walk_states(graph, n_random_states, seed)
    dev = 0.0
    for row in states:
        state = fw.WalkState(amplitudes=row.copy())
        projected = fw.lift(graph, fw.collapse(graph, state))
        left = fw.step(graph, projected, leaf_phase).amplitudes
        stepped = fw.step(graph, state, leaf_phase)
        right = fw.lift(graph, fw.collapse(graph, stepped)).amplitudes
        dev = max(dev, float(np.linalg.norm(left - right)))
    checks.append(
        CheckResult(
            name="projection_commutation",
            passed=dev < commutation_tol,
            max_deviation=dev,
            tolerance=commutation_tol,
            detail=f"{n_random_states} random unit states",
        )
    )

    # unitarity of the full step, both leaf phases
    dev = 0.0
    for row in states:
        for phase in (LeafPhase.REVERSAL, LeafPhase.PLAIN):
            out = fw.step(graph, fw.WalkState(amplitudes=row.copy()), phase)
            dev = max(dev, abs(float(np.linalg.norm(out.amplitudes)) - 1.0))
    checks.append(
        CheckResult(
            name="unitarity",
            passed=dev < unitarity_tol,
            max_deviation=dev,
            tolerance=unitarity_tol,
        )
    )

    # the shift is an exact involution
    dev = 0.0
    for row in states:
        twice = fw.shift(graph, fw.shift(graph, row))
        dev = max(dev, float(np.abs(twice - row).max()))
    checks.append(
        CheckResult(
            name="shift_involution",
            passed=dev == 0.0,
            max_deviation=dev,
            tolerance=0.0,
            detail="bitwise equality required",
        )
    )

    # closed-form reduced operator vs conjugated full operator
    conjugated = conjugated_reduced_operator(graph, leaf_phase)
    dev = float(np.abs(conjugated - ops.evolution).max())
    checks.append(
        CheckResult(
            name="reduced_operator_conjugation",
            passed=dev < conjugation_tol,
            max_deviation=dev,
            tolerance=conjugation_tol,
        )
    )

    # spectral residuals and eigenbasis evaluator (reversal spectrum)
    evaluator = EigenbasisEvaluator(n_clique, n_leaves)
    dev = max(evaluator.report.residuals)
    checks.append(
        CheckResult(
            name="spectral_residuals",
            passed=dev < residual_tol,
            max_deviation=dev,
            tolerance=residual_tol,
        )
    )

    if leaf_phase is LeafPhase.REVERSAL:
        reversal_trace = reduced_trace
    else:
        reversal_trace = cw.evolve_collapsed(
            cw.build_reduced_operators(n_clique, n_leaves, LeafPhase.REVERSAL),
            cw.collapsed_initial_state(n_clique, n_leaves),
            steps,
        )
    series = evaluator.state_series(np.arange(steps + 1))
    closed_p = (
        np.abs(series[:, cw.ArcClass.CLIQUE_IN]) ** 2
        + np.abs(series[:, cw.ArcClass.STAR_IN]) ** 2
    )
    dev = float(np.abs(closed_p - reversal_trace.p_hub).max())
    checks.append(
        CheckResult(
            name="eigenbasis_vs_iteration",
            passed=dev < eigenbasis_tol,
            max_deviation=dev,
            tolerance=eigenbasis_tol,
            detail="reversal-mode reduced trace vs spectral evaluator",
        )
    )

    # discriminant identities: root sum and product
    ang = discriminant_angles(n_clique, n_leaves)
    sum_dev = abs(ang.cos_theta_1 + ang.cos_theta_2 - (n_clique - 2) / (n_clique - 1))
    prod_dev = abs(
        ang.cos_theta_1 * ang.cos_theta_2 + 1.0 / (n_clique + n_leaves - 1)
    )
    dev = max(sum_dev, prod_dev)
    checks.append(
        CheckResult(
            name="discriminant_identities",
            passed=dev < 1e-12,
            max_deviation=dev,
            tolerance=1e-12,
            detail="root sum (N-2)/(N-1); root product -1/(N+m-1)",
        )
    )

    # collapse/lift round trip is the identity on the class-uniform space
    basis = np.eye(5, dtype=np.complex128)
    dev = 0.0
    for j in range(5):
        state = cw.CollapsedState(amplitudes=basis[:, j].copy())
        back = fw.collapse(graph, fw.lift(graph, state)).amplitudes
        dev = max(dev, float(np.abs(back - basis[:, j]).max()))
    checks.append(
        CheckResult(
            name="collapse_lift_roundtrip",
            passed=dev < roundtrip_tol,
            max_deviation=dev,
            tolerance=roundtrip_tol,
        )
    )

    return VerificationReport(
        n_clique=n_clique,
        n_leaves=n_leaves,
        steps=steps,
        seed=seed,
        checks=tuple(checks),
    )
