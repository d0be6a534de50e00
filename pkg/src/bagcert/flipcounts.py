"""Counting noised inputs at prescribed distances from two references.

Fix x and a perturbed copy x~ differing in exactly s of dim categorical
dimensions (domain {0..K} per dimension).  count_flips(u, v) is the number
of noised inputs x' with dis(x', x~) = u and dis(x', x) = v.  Splitting the
dimensions into the s disagreeing ones (where x' can match x, match x~, or
take one of the K-1 other values) and the dim-s agreeing ones (where x' can
take one of K other values) gives a single sum over i, the number of
agreeing dimensions that were flipped:

    sum_i (K-1)^j C(s,j) C(s-j, u-i-j) K^i C(dim-s, i),   j = u+v-2i-s.

Summation limits follow from the binomial domains alone, so out-of-range
terms vanish and no clipped restatement of the bounds is needed; the
enumeration oracle in the test suite pins this down on small grids.

The weighted layers below turn those counts into distributions of the
signed distance difference t = (distance to clean) - (distance to
perturbed) for a single noised object, the building block convolved into
the subspace partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactmath import Rational, binomial
from .models import NoiseModel


def count_flips(u: int, v: int, s: int, dim: int, K: int) -> int:
    """|{x' : dis(x', x~) = u, dis(x', x) = v}| for fixed dis(x, x~) = s
    over ({0..K})^dim.  Out-of-range arguments give 0."""
    if min(u, v, s) < 0 or u > dim or v > dim or s > dim:
        return 0
    if u + v < s:
        return 0
    total = 0
    for i in range(0, min(dim - s, (u + v - s) // 2) + 1):
        j = u + v - 2 * i - s
        if j < 0 or j > s:
            continue
        a = u - i - j  # dimensions where x' kept the clean value
        if a < 0 or a > s - j:
            continue
        total += (K - 1) ** j * binomial(s, j) * binomial(s - j, a) * K**i * binomial(dim - s, i)
    return total


@dataclass(frozen=True)
class FlipCountTable:
    """All counts for one (s, dim, K), as a (u, v) -> count map."""

    s: int
    dim: int
    K: int
    entries: dict[tuple[int, int], int]

    def __getitem__(self, uv: tuple[int, int]) -> int:
        return self.entries.get(uv, 0)


@lru_cache(maxsize=None)
def flip_count_table(s: int, dim: int, K: int) -> FlipCountTable:
    entries = {}
    for u in range(dim + 1):
        for v in range(dim + 1):
            n = count_flips(u, v, s, dim, K)
            if n:
                entries[(u, v)] = n
    return FlipCountTable(s, dim, K, entries)


def base_layer(s: int, dim: int, noise: NoiseModel) -> dict[int, Rational]:
    """Distribution of t = dis(x', x) - dis(x', x~) for one noised object:
    T(0, t) = sum_u count_flips(u, u - t) gamma^u rho^(dim - u).

    s = 0 collapses to a point mass at t = 0.
    """
    if not 0 <= s <= dim:
        raise ValueError(f"budget s={s} outside [0, {dim}]")
    rho, gamma = noise.rho, noise.gamma
    table = flip_count_table(s, dim, noise.K)
    layer: dict[int, Rational] = {}
    for t in range(-dim, dim + 1):
        mass = sum(
            count * gamma**u * rho ** (dim - u)
            for (u, v), count in table.entries.items()
            if v == u - t
        )
        if mass:
            layer[t] = mass
    return layer


def label_layer(s: int, dim: int, noise: NoiseModel) -> dict[int, Rational]:
    """Per-example layer when the label flips too: the label acts as one
    extra categorical dimension, so this is the dim+1 base layer."""
    return base_layer(s, dim + 1, noise)
