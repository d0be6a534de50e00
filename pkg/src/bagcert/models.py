"""Smoothing-distribution parameters and the raw outcome PMFs.

Three perturbation kinds are supported: feature flips within a per-example
budget s, feature-plus-label flips within the same joint budget, and pure
label flips.  The smoothing keeps each noised dimension with probability
rho and otherwise re-draws it uniformly from the other K categories, so a
single outcome at total flip distance D carries mass rho^(dims-D) gamma^D
divided by n^k bag choices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from gmpy2 import mpq

from .exactmath import Rational


class PerturbationKind(enum.Enum):
    FEATURE = "f"
    FEATURE_LABEL = "fl"
    LABEL = "l"


class AttackMode(enum.Enum):
    TRIGGERLESS = "triggerless"
    BACKDOOR = "backdoor"


@dataclass(frozen=True)
class NoiseModel:
    """Category-flipping noise: keep with prob rho, else uniform over the
    other K values of the {0..K} domain."""

    rho: Rational
    K: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", mpq(self.rho))
        if not 0 <= self.rho <= 1:
            raise ValueError(f"rho={self.rho} outside [0, 1]")
        if self.K < 1:
            raise ValueError(f"K={self.K} must be a positive integer")

    @property
    def gamma(self) -> Rational:
        return (1 - self.rho) / self.K


@dataclass(frozen=True)
class PerturbationSpec:
    """Attacker model: which parts of an example can change, and the
    per-example budget s.  s=None means unbounded (resolved to the
    effective dimension, the largest budget the counting formulas admit).
    """

    kind: PerturbationKind
    s: int | None = 1

    def __post_init__(self) -> None:
        if self.s is not None and self.s < 1:
            raise ValueError("per-example budget s must be >= 1 (or None for unbounded)")


@dataclass(frozen=True)
class Problem:
    n: int
    k: int
    d: int
    attack_mode: AttackMode = AttackMode.TRIGGERLESS

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 1 or self.d < 1:
            raise ValueError("n, k, d must all be positive")


def effective_dimension(spec: PerturbationSpec, d: int) -> int:
    """Number of noised dimensions of one training example under ``kind``."""
    if spec.kind is PerturbationKind.FEATURE:
        return d
    if spec.kind is PerturbationKind.FEATURE_LABEL:
        return d + 1
    return 1


def resolve_budget(spec: PerturbationSpec, problem: Problem) -> int:
    """Concrete per-example budget, with unbounded mapped to the effective
    dimension."""
    dim = effective_dimension(spec, problem.d)
    if spec.s is None:
        return dim
    return spec.s


def validate_config(problem: Problem, noise: NoiseModel, spec: PerturbationSpec) -> None:
    """Reject parameter combinations the certification math is not defined
    for."""
    dim = effective_dimension(spec, problem.d)
    s = resolve_budget(spec, problem)
    if s > dim:
        raise ValueError(f"budget s={s} exceeds effective dimension {dim}")
    if spec.kind is PerturbationKind.LABEL and problem.attack_mode is AttackMode.BACKDOOR:
        raise ValueError("label flipping cannot touch the test input; backdoor mode is invalid")


def noised_dimensions(problem: Problem, spec: PerturbationSpec) -> int:
    """Total count of dimensions the smoothing noise acts on.

    The test input is only noised in backdoor mode; label flipping never
    noises features or the test input.
    """
    k, d = problem.k, problem.d
    if spec.kind is PerturbationKind.LABEL:
        return k
    dims = k * d
    if spec.kind is PerturbationKind.FEATURE_LABEL:
        dims += k
    if problem.attack_mode is AttackMode.BACKDOOR:
        dims += d
    return dims


def outcome_probability(
    problem: Problem,
    noise: NoiseModel,
    spec: PerturbationSpec,
    total_flips: int,
) -> Rational:
    """Mass of one sample-space outcome at total flip distance
    ``total_flips`` from the dataset it was noised from:
    rho^(dims - D) * gamma^D / n^k."""
    dims = noised_dimensions(problem, spec)
    if not 0 <= total_flips <= dims:
        raise ValueError(f"total_flips={total_flips} outside [0, {dims}]")
    rho, gamma = noise.rho, noise.gamma
    return rho ** (dims - total_flips) * gamma**total_flips / mpq(problem.n) ** problem.k
