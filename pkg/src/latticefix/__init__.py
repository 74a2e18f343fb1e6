"""Fixed points of set-valued maps on finite lattices.

Checkers and solvers for ascending and V-ascending correspondences, a seeded
theorem-fuzzing lab, and supermodular games with non-product feasible sets.
"""

from .correspondence import (
    THEOREMS,
    Correspondence,
    fixed_points_brute,
    greatest_fixed_point,
    is_ascending,
    is_v_ascending,
    least_fixed_point_infC,
    least_fixed_point_minsel,
    sup_fix_over_subset,
    theorem_hypotheses,
    verify_fix_complete,
)
from .game import Game, build_game, nash_brute, nash_via_fixpoint, verify_nash_lattice
from .lab import GeneratorConfig, run_game_suite, run_theorem_suite, search_counterexample
from .lattice import FiniteLattice, Poset, as_lattice, build_lattice, build_poset
from .rng import DEFAULT_SEED, XorShift64Star

__all__ = [
    "DEFAULT_SEED",
    "THEOREMS",
    "Correspondence",
    "FiniteLattice",
    "Game",
    "GeneratorConfig",
    "Poset",
    "XorShift64Star",
    "as_lattice",
    "build_game",
    "build_lattice",
    "build_poset",
    "fixed_points_brute",
    "greatest_fixed_point",
    "is_ascending",
    "is_v_ascending",
    "least_fixed_point_infC",
    "least_fixed_point_minsel",
    "nash_brute",
    "nash_via_fixpoint",
    "run_game_suite",
    "run_theorem_suite",
    "search_counterexample",
    "sup_fix_over_subset",
    "theorem_hypotheses",
    "verify_fix_complete",
    "verify_nash_lattice",
]
