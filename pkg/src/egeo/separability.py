"""Partition lattice of subsystems and product/GME tests.

A state is pi-product iff every block-versus-rest flattening has rank 1:
intersecting product loci along the partition meet reduces the test to
those bipartite checks, so no recursive factor extraction is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .errors import ShapeMismatch, TooLarge
from .tensor_core import DEFAULT_RANK_TOL, Bipartition, PureState, flatten, numerical_rank

MAX_ENUM_SUBSYSTEMS = 16


@dataclass(frozen=True)
class Partition:
    """A set partition of subsystem indices, blocks sorted by minimum."""

    n_subsystems: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.n_subsystems
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        seen: list[int] = []
        for b in blocks:
            if not b:
                raise ShapeMismatch("partition blocks must be nonempty")
            seen.extend(b)
        if sorted(seen) != list(range(n)):
            raise ShapeMismatch(f"blocks {self.blocks} do not partition range({n})")
        object.__setattr__(self, "blocks", tuple(sorted(blocks, key=min)))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        """The single-block partition."""
        return cls(n, (tuple(range(n)),))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        """The all-singletons partition."""
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def from_bipartition(cls, cut: Bipartition) -> "Partition":
        return cls(cut.n_subsystems, (cut.block_a, cut.block_b))

    def __str__(self) -> str:
        return "|".join("".join(str(i) for i in b) for b in self.blocks)


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of p is contained in some block of q."""
    if p.n_subsystems != q.n_subsystems:
        raise ShapeMismatch("partitions are over different subsystem counts")
    qsets = [set(b) for b in q.blocks]
    return all(any(set(b) <= qs for qs in qsets) for b in p.blocks)


def meet(p: Partition, q: Partition) -> Partition:
    """Common refinement: all nonempty pairwise block intersections."""
    if p.n_subsystems != q.n_subsystems:
        raise ShapeMismatch("partitions are over different subsystem counts")
    blocks = []
    for b in p.blocks:
        for c in q.blocks:
            both = tuple(sorted(set(b) & set(c)))
            if both:
                blocks.append(both)
    return Partition(p.n_subsystems, tuple(blocks))


def bipartitions(n: int) -> list[Bipartition]:
    """All 2^(n-1) - 1 canonical bipartitions (block containing index 0)."""
    if not 2 <= n <= MAX_ENUM_SUBSYSTEMS:
        raise TooLarge(f"bipartition enumeration supports 2 <= n <= {MAX_ENUM_SUBSYSTEMS}, got {n}")
    rest = list(range(1, n))
    out = []
    for mask in range(2 ** (n - 1) - 1):
        block = (0,) + tuple(rest[i] for i in range(n - 1) if mask >> i & 1)
        out.append(Bipartition(n, block))
    return out


def is_pi_product(state: PureState, p: Partition, tol: float = DEFAULT_RANK_TOL) -> bool:
    """True iff the state factors along every block of the partition."""
    if p.n_subsystems != state.n_subsystems:
        raise ShapeMismatch("partition does not match the state's subsystem count")
    for block in p.blocks:
        if len(block) == state.n_subsystems:
            continue  # trivial partition: always product
        if numerical_rank(flatten(state, Bipartition(state.n_subsystems, block)), tol) != 1:
            return False
    return True


def _product_cuts(state: PureState, tol: float) -> list[Bipartition]:
    return [
        cut
        for cut in bipartitions(state.n_subsystems)
        if numerical_rank(flatten(state, cut), tol) == 1
    ]


def finest_product_partition(state: PureState, tol: float = DEFAULT_RANK_TOL) -> Partition:
    """Meet of all bipartitions along which the state is product."""
    n = state.n_subsystems
    if n > MAX_ENUM_SUBSYSTEMS:
        raise TooLarge(f"finest partition enumerates bipartitions, capped at N = {MAX_ENUM_SUBSYSTEMS}")
    if n == 1:
        return Partition.trivial(1)
    cuts = [Partition.from_bipartition(c) for c in _product_cuts(state, tol)]
    return reduce(meet, cuts, Partition.trivial(n))


def is_gme(state: PureState, tol: float = DEFAULT_RANK_TOL) -> bool:
    """Genuinely multipartite entangled: product along no bipartition."""
    if state.n_subsystems < 2:
        raise ShapeMismatch("GME needs at least two subsystems")
    return not _product_cuts(state, tol)


@dataclass(frozen=True)
class SeparabilityReport:
    finest: Partition
    product_bipartitions: tuple[Bipartition, ...]
    gme: bool


def separability_report(state: PureState, tol: float = DEFAULT_RANK_TOL) -> SeparabilityReport:
    """Finest product partition, the product cuts, and the GME verdict."""
    cuts = tuple(_product_cuts(state, tol))
    finest = reduce(meet, (Partition.from_bipartition(c) for c in cuts), Partition.trivial(state.n_subsystems))
    return SeparabilityReport(finest, cuts, not cuts)
