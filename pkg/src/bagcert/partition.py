"""The (c, t) subspace partition of the smoothing sample space.

c is the number of perturbed indices among the k bag slots, t the signed
difference (distance to clean data) - (distance to poisoned data) summed
over the noised objects.  Conditioned on c, t is distributed as the
convolution T(c, .) of one layer per contributing object: the test input
layer (active only in backdoor mode) and c per-example layers.  The mass of
subspace (c, t) under the clean distribution is Binom(c; k, r/n) T(c, t);
under the maximally perturbed distribution the per-layer t-distribution is
mirrored, so the poisoned mass is Binom(c; k, r/n) T(c, -t).  That mirror
identity is what keeps the degenerate rho = 1 (pure bagging) case on the
same code path: likelihood ratios come out as mass ratios, with infinity
where the poisoned side vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .exactmath import Rational, binom_pmf
from .flipcounts import base_layer, label_layer
from .models import (
    AttackMode,
    NoiseModel,
    PerturbationKind,
    PerturbationSpec,
    Problem,
    resolve_budget,
    validate_config,
)

POS_INF = float("inf")


@dataclass(frozen=True)
class Subspace:
    """One partition cell: constant likelihood ratio eta = clean/poisoned
    (POS_INF when the poisoned mass is zero)."""

    c: int
    t: int
    mass_clean: Rational
    mass_poisoned: Rational

    @property
    def eta(self):
        if self.mass_poisoned == 0:
            return POS_INF
        return self.mass_clean / self.mass_poisoned


@dataclass(frozen=True)
class SubspaceTable:
    """Partition cells plus the truncation bookkeeping.

    delta is the poisoned mass discarded by the c <= kappa truncation
    (exactly the binomial tail); the clean-side discarded mass is derived
    as 1 - sum of the retained clean masses.
    """

    entries: tuple[Subspace, ...]
    delta: Rational = field(default_factory=lambda: mpq(0))
    kappa: int | None = None

    @property
    def clean_total(self) -> Rational:
        return sum((e.mass_clean for e in self.entries), mpq(0))

    @property
    def poisoned_total(self) -> Rational:
        return sum((e.mass_poisoned for e in self.entries), mpq(0))

    @property
    def clean_tail(self) -> Rational:
        return 1 - self.clean_total


def _per_example_layer(problem: Problem, noise: NoiseModel, spec: PerturbationSpec):
    s = resolve_budget(spec, problem)
    if spec.kind is PerturbationKind.FEATURE:
        return base_layer(s, problem.d, noise)
    if spec.kind is PerturbationKind.FEATURE_LABEL:
        return label_layer(s, problem.d, noise)
    return base_layer(s, 1, noise)


def _test_layer(problem: Problem, noise: NoiseModel, spec: PerturbationSpec):
    if problem.attack_mode is AttackMode.TRIGGERLESS:
        return {0: mpq(1)}
    # The test input has no label dimension, so its budget caps at d even
    # when the joint feature+label budget is d+1.
    s = min(resolve_budget(spec, problem), problem.d)
    return base_layer(s, problem.d, noise)


def _convolve(a: dict[int, Rational], b: dict[int, Rational]) -> dict[int, Rational]:
    out: dict[int, Rational] = {}
    for ta, ma in a.items():
        for tb, mb in b.items():
            key = ta + tb
            prev = out.get(key)
            out[key] = ma * mb if prev is None else prev + ma * mb
    return out


_GRID_CACHE: dict[tuple, list[dict[int, Rational]]] = {}


def t_grid(
    c: int, problem: Problem, noise: NoiseModel, spec: PerturbationSpec
) -> dict[int, Rational]:
    """T(c, .): distribution of t given c perturbed bag slots.

    Convolutions are over the exact support of the stored layers rather
    than closed-form index ranges, so no nonzero term can be clipped.
    Grids are cached per configuration and shared across radii.
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    validate_config(problem, noise, spec)
    key = (problem.d, problem.attack_mode, noise.rho, noise.K, spec.kind,
           resolve_budget(spec, problem))
    grids = _GRID_CACHE.setdefault(key, [])
    if not grids:
        grids.append(_test_layer(problem, noise, spec))
    if c >= len(grids):
        step = _per_example_layer(problem, noise, spec)
        for _ in range(len(grids), c + 1):
            grids.append(_convolve(grids[-1], step))
    return dict(grids[c])


def truncation_error(k: int, r, n, kappa: int) -> Rational:
    """Exact binomial tail mass beyond kappa: 1 - sum_{c<=kappa}
    Binom(c; k, r/n).  Accepts r, n as integers or r as an already-formed
    ratio with n = 1."""
    if kappa > k:
        raise ValueError(f"kappa={kappa} exceeds bag size k={k}")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    p = mpq(r) / mpq(n)
    return 1 - sum(binom_pmf(c, k, p) for c in range(kappa + 1))


def build_table(
    problem: Problem,
    noise: NoiseModel,
    spec: PerturbationSpec,
    r: int,
    kappa: int | None = None,
) -> SubspaceTable:
    """Subspace table against the maximally perturbed dataset at radius r.

    Cells with zero mass under both distributions are dropped; cells that
    only the poisoned distribution reaches (possible when rho = 1) are
    kept, since the runner-up upper bound needs their poisoned mass.
    """
    validate_config(problem, noise, spec)
    if not 0 <= r <= problem.n:
        raise ValueError(f"radius r={r} outside [0, {problem.n}]")
    if kappa is not None and kappa < 0:
        raise ValueError("kappa must be nonnegative")
    c_max = problem.k if kappa is None else min(problem.k, kappa)
    sel = mpq(r, problem.n)
    entries: list[Subspace] = []
    poisoned_total = mpq(0)
    for c in range(c_max + 1):
        weight = binom_pmf(c, problem.k, sel)
        if weight == 0:
            continue
        grid = t_grid(c, problem, noise, spec)
        for t in sorted(set(grid) | {-t for t in grid}):
            clean = weight * grid.get(t, 0)
            poisoned = weight * grid.get(-t, 0)
            if clean == 0 and poisoned == 0:
                continue
            entries.append(Subspace(c, t, mpq(clean), mpq(poisoned)))
            poisoned_total += poisoned
    return SubspaceTable(entries=tuple(entries), delta=1 - poisoned_total,
                         kappa=None if kappa is None else c_max)


def table_from_masses(pairs, kappa: int | None = None, delta=None) -> SubspaceTable:
    """Assemble a table from explicit (clean, poisoned) mass pairs.

    Used by tests and by the relaxation machinery on synthetic tables; the
    cells get synthetic (c, t) = (0, i) labels.  delta defaults to the
    poisoned mass missing from 1.
    """
    entries = tuple(
        Subspace(0, i, mpq(pc), mpq(pp)) for i, (pc, pp) in enumerate(pairs)
    )
    if delta is None:
        delta = 1 - sum((e.mass_poisoned for e in entries), mpq(0))
    return SubspaceTable(entries=entries, delta=mpq(delta), kappa=kappa)
