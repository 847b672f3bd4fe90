"""Ground sets, subsets as bitmasks, and validated symmetric submodular functions.

Subsets are plain ints: bit i set means element i of the ground set is in.
Every downstream search is evaluation-bound, so function values are memoized
in a dense array of length 2^n at construction time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GroundSetTooLarge,
    NormalizationViolation,
    SubmodularityViolation,
    SymmetryViolation,
    TableIncomplete,
)

MAX_N = 20
FULL_VALIDATION_MAX_N = 12
SAMPLED_VALIDATION_PAIRS = 10**6


def gate_limit(default: int) -> int:
    """Size gate, overridable via CONNSYS_MAX_N at the user's risk."""
    env = os.environ.get("CONNSYS_MAX_N")
    if env:
        try:
            return max(default, int(env))
        except ValueError:
            pass
    return default


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def singletons(mask: int):
    """Yield the set bits of mask as single-bit masks, ascending."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


@dataclass(frozen=True)
class GroundSet:
    """An ordered, indexed universe of distinct element labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise GroundSetTooLarge("ground set must contain at least one element")
        if len(self.labels) > gate_limit(MAX_N):
            raise GroundSetTooLarge(f"ground set of size {len(self.labels)} exceeds the cap")
        if any(not lab for lab in self.labels):
            raise ValueError("element labels must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("element labels must be unique")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown element label {label!r}") from None

    def mask_of(self, labels) -> int:
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return mask

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in range(self.n) if mask >> i & 1)

    def subset_key(self, mask: int) -> str:
        """Comma-joined labels in ground-set order; empty string for the empty set."""
        return ",".join(self.labels_of(mask))

    def mask_from_key(self, key: str) -> int:
        if key == "":
            return 0
        return self.mask_of(key.split(","))


def edge_cut_values(labels_count: int, vertices: int, edges: list[tuple[int, int]]) -> list[int]:
    """Boundary-vertex function on edge subsets: vertices incident to both sides."""
    incident = [0] * vertices  # incident[v] = mask of edges touching v
    for i, (u, v) in enumerate(edges):
        incident[u] |= 1 << i
        incident[v] |= 1 << i
    full = (1 << labels_count) - 1
    values = [0] * (1 << labels_count)
    for mask in range(1 << labels_count):
        comp = full ^ mask
        values[mask] = sum(1 for inc in incident if inc & mask and inc & comp)
    return values


def vertex_cut_values(vertices: int, edges: list[tuple[int, int]]) -> list[int]:
    """Cut function on vertex subsets: edges crossing the bipartition."""
    values = [0] * (1 << vertices)
    for mask in range(1 << vertices):
        values[mask] = sum(1 for (u, v) in edges if (mask >> u & 1) != (mask >> v & 1))
    return values


def complete_table(ground: GroundSet, table: dict[int, int]) -> list[int]:
    """Fill missing subset values by symmetry from complements; require totality after."""
    full = ground.full_mask
    values = [None] * (1 << ground.n)
    for mask, val in table.items():
        if mask < 0 or mask > full:
            raise TableIncomplete(f"subset mask {mask:#x} outside the ground set")
        if val < 0:
            raise NormalizationViolation(f"negative value {val} for subset {ground.subset_key(mask)!r}")
        values[mask] = int(val)
    for mask in range(1 << ground.n):
        if values[mask] is None:
            comp = full ^ mask
            if values[comp] is None:
                raise TableIncomplete(
                    f"no value for subset {ground.subset_key(mask)!r} or its complement"
                )
            values[mask] = values[comp]
    return values


def _check_symmetry(ground: GroundSet, values: list[int]) -> None:
    full = ground.full_mask
    for mask in range(1 << ground.n):
        comp = full ^ mask
        if mask < comp and values[mask] != values[comp]:
            raise SymmetryViolation(
                mask,
                f"f({ground.subset_key(mask)!r}) = {values[mask]} but "
                f"f({ground.subset_key(comp)!r}) = {values[comp]}",
            )


def _check_submodularity(ground: GroundSet, values: list[int], seed: int) -> dict:
    """Full O(4^n) check for small n, seeded uniform pair sampling beyond."""
    n = ground.n
    arr = np.asarray(values, dtype=np.int64)
    if n <= FULL_VALIDATION_MAX_N:
        size = 1 << n
        idx = np.arange(size, dtype=np.int64)
        # row-major scan so the first reported witness is the lowest (A, B) pair
        for a in range(size):
            lhs = values[a] + arr
            rhs = arr[np.bitwise_and(a, idx)] + arr[np.bitwise_or(a, idx)]
            bad = np.nonzero(lhs < rhs)[0]
            if bad.size:
                b = int(bad[0])
                raise SubmodularityViolation(
                    a,
                    b,
                    f"f({ground.subset_key(a)!r}) + f({ground.subset_key(b)!r}) = "
                    f"{values[a] + values[b]} < {values[a & b] + values[a | b]}",
                )
        return {"mode": "exhaustive", "pairs": size * size, "seed": None}
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 1 << n, size=SAMPLED_VALIDATION_PAIRS, dtype=np.int64)
    b = rng.integers(0, 1 << n, size=SAMPLED_VALIDATION_PAIRS, dtype=np.int64)
    lhs = arr[a] + arr[b]
    rhs = arr[a & b] + arr[a | b]
    bad = np.nonzero(lhs < rhs)[0]
    if bad.size:
        i = int(bad[0])
        raise SubmodularityViolation(int(a[i]), int(b[i]), "sampled pair violates the inequality")
    return {"mode": "sampled", "pairs": SAMPLED_VALIDATION_PAIRS, "seed": seed}


@dataclass(frozen=True)
class ConnectivitySystem:
    """A ground set with a total, validated symmetric submodular function.

    Immutable after construction; safe for concurrent reads.
    """

    ground: GroundSet
    values: tuple[int, ...]
    spec_kind: str
    spec_payload: dict = field(default_factory=dict, compare=False)
    validation: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def full_mask(self) -> int:
        return self.ground.full_mask

    def f(self, mask: int) -> int:
        return self.values[mask]

    @property
    def max_value(self) -> int:
        return max(self.values)

    @classmethod
    def _build(cls, ground, values, spec_kind, spec_payload, seed):
        if values[0] != 0:
            raise NormalizationViolation(f"f(empty set) = {values[0]} but must be 0")
        if values[ground.full_mask] != 0:
            raise NormalizationViolation(f"f(X) = {values[ground.full_mask]} but must be 0")
        _check_symmetry(ground, values)
        info = _check_submodularity(ground, values, seed)
        return cls(ground, tuple(values), spec_kind, spec_payload, info)

    @classmethod
    def from_table(cls, labels, table: dict, seed: int = 0) -> "ConnectivitySystem":
        """table maps subset masks (or label iterables) to natural values."""
        ground = GroundSet(tuple(labels))
        by_mask = {}
        for key, val in table.items():
            mask = key if isinstance(key, int) else ground.mask_of(key)
            if mask in by_mask and by_mask[mask] != val:
                raise TableIncomplete(f"conflicting values for subset {ground.subset_key(mask)!r}")
            by_mask[mask] = val
        values = complete_table(ground, by_mask)
        return cls._build(ground, values, "table", {"values": dict(by_mask)}, seed)

    @classmethod
    def from_edge_cut(cls, labels, vertices: int, edges, seed: int = 0) -> "ConnectivitySystem":
        ground = GroundSet(tuple(labels))
        edges = [tuple(e) for e in edges]
        if len(edges) != ground.n:
            raise TableIncomplete("one ground-set label per edge is required")
        _check_simple_graph(vertices, edges)
        values = edge_cut_values(ground.n, vertices, edges)
        return cls._build(ground, values, "graph_edge_cut", {"vertices": vertices, "edges": edges}, seed)

    @classmethod
    def from_vertex_cut(cls, labels, vertices: int, edges, seed: int = 0) -> "ConnectivitySystem":
        ground = GroundSet(tuple(labels))
        edges = [tuple(e) for e in edges]
        if vertices != ground.n:
            raise TableIncomplete("one ground-set label per vertex is required")
        _check_simple_graph(vertices, edges)
        values = vertex_cut_values(vertices, edges)
        return cls._build(ground, values, "graph_vertex_cut", {"vertices": vertices, "edges": edges}, seed)


def _check_simple_graph(vertices: int, edges) -> None:
    seen = set()
    for (u, v) in edges:
        if not (0 <= u < vertices and 0 <= v < vertices):
            raise TableIncomplete(f"edge ({u}, {v}) references a vertex outside range")
        if u == v:
            raise TableIncomplete(f"loop edge ({u}, {v}) not allowed in a simple graph")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise TableIncomplete(f"duplicate edge ({u}, {v})")
        seen.add(key)


def enumerate_k_efficient(sys: ConnectivitySystem, k: int) -> list[int]:
    """All subsets with f(A) <= k, in increasing bitmask order."""
    return [mask for mask in range(1 << sys.n) if sys.values[mask] <= k]
