"""Explicit set families and axiom checks for every supported family kind.

A family is checked against the fixed axiom list of its kind. Axioms that
quantify over members are evaluated over the members; axioms that quantify
over all subsets (Q4, T2, SB4, MA1, ...) are evaluated over all k-efficient
subsets of the system. Verdicts report the first violated axiom in the
kind's fixed order, with the lowest-bitmask witness.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .core import ConnectivitySystem, enumerate_k_efficient, gate_limit, popcount
from .errors import (
    BoundIncrease,
    FipCrossCheckWarning,
    GroundSetMismatch,
    GroundSetTooLargeForEnumeration,
    InvalidParameter,
    NotAFilter,
)

MAJORITY_MAX_N = 8
DERIVED_TRIPLE_MAX_MEMBERS = 64

KINDS = (
    "filter",
    "ultrafilter",
    "weak_filter",
    "quasi_filter",
    "single_filter",
    "single_ultrafilter",
    "tangle",
    "prefilter",
    "ultra_prefilter",
    "filter_subbase",
    "ultrafilter_subbase",
    "pi_system",
    "lambda_system",
    "superfilter",
    "sigma_filter",
    "closure_system",
    "union_closed_system",
    "independence_system",
    "majority_system",
)

# Kinds whose definitions require a non-empty family outright.
NONEMPTY_KINDS = {
    "filter",
    "ultrafilter",
    "weak_filter",
    "quasi_filter",
    "single_filter",
    "single_ultrafilter",
    "tangle",
    "prefilter",
    "ultra_prefilter",
    "superfilter",
}


@dataclass(frozen=True)
class SetFamily:
    """A finite collection of subsets over an n-element ground set, with bound k."""

    members: frozenset[int]
    k: int
    n: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        for m in self.members:
            if m < 0 or m > full:
                raise GroundSetMismatch(f"member mask {m:#x} outside an {self.n}-element ground set")

    @classmethod
    def of(cls, members, k: int, n: int) -> "SetFamily":
        return cls(frozenset(members), k, n)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    violated_axiom: str | None = None
    witnesses: tuple[int, ...] = ()
    derived: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class FamilyFlags:
    principal: str  # yes / no / vacuous
    non_principal: str  # yes / no
    uniform: bool


class _Ctx:
    def __init__(self, sys: ConnectivitySystem, fam: SetFamily):
        self.sys = sys
        self.fam = fam
        self.k = fam.k
        self.full = sys.full_mask
        self.members = fam.members
        self.sorted = fam.sorted_members()
        self.keff = enumerate_k_efficient(sys, fam.k)

    def eff(self, mask: int) -> bool:
        return self.sys.values[mask] <= self.k


def _ax_nonempty(c: _Ctx):
    if not c.members:
        return ()
    return None


def _ax_q0(c: _Ctx):
    for a in c.sorted:
        if not c.eff(a):
            return (a,)
    return None


def _ax_q1(c: _Ctx):
    for i, a in enumerate(c.sorted):
        for b in c.sorted[i:]:
            u = a & b
            if c.eff(u) and u not in c.members:
                return (a, b, u)
    return None


def _ax_q2(c: _Ctx):
    for a in c.sorted:
        for b in c.keff:
            if b & a == a and b not in c.members:
                return (a, b)
    return None


def _ax_q3(c: _Ctx):
    if 0 in c.members:
        return (0,)
    return None


def _ax_q4(c: _Ctx):
    for a in c.keff:
        if a not in c.members and (c.full ^ a) not in c.members:
            return (a, c.full ^ a)
    return None


def _ax_qw1(c: _Ctx):
    for i, a in enumerate(c.sorted):
        for b in c.sorted[i:]:
            if c.eff(a & b) and a & b == 0:
                return (a, b)
    return None


def _ax_qq1(c: _Ctx):
    # quantified over all pairs of subsets, not only efficient ones
    size = 1 << c.sys.n
    for a in range(size):
        if a in c.members:
            continue
        for b in range(size):
            if b in c.members:
                continue
            if (a | b) in c.members:
                return (a, b, a | b)
    return None


def _single_deletion_witness(c: _Ctx, require_singleton_eff: bool):
    for a in c.sorted:
        for i in range(c.sys.n):
            e = 1 << i
            if require_singleton_eff and not c.eff(e):
                continue
            rest = a & ~e
            if c.eff(rest) and rest not in c.members:
                return (a, e)
    return None


def _ax_qs1(c: _Ctx):
    return _single_deletion_witness(c, require_singleton_eff=True)


def _ax_qsd1(c: _Ctx):
    return _single_deletion_witness(c, require_singleton_eff=False)


def _ax_t3(c: _Ctx):
    for a, b, d in combinations_with_replacement(c.sorted, 3):
        if a | b | d == c.full:
            return (a, b, d)
    return None


def _ax_t4(c: _Ctx):
    for i in range(c.sys.n):
        co = c.full ^ (1 << i)
        if co in c.members:
            return (co,)
    return None


def _ax_p3(c: _Ctx):
    for i, b in enumerate(c.sorted):
        for d in c.sorted[i:]:
            meet = b & d
            if not any(a & ~meet == 0 and c.eff(a) for a in c.members):
                return (b, d)
    return None


def _decided_below(c: _Ctx, a: int) -> bool:
    comp = c.full ^ a
    return any((b & ~a == 0 or b & ~comp == 0) and c.eff(b) for b in c.members)


def _ax_p4(c: _Ctx):
    for a in c.keff:
        if not _decided_below(c, a):
            return (a,)
    return None


def _ax_sb2(c: _Ctx):
    return _ax_q3(c)


def _ax_pi2(c: _Ctx):
    return _ax_q1(c)


def _ax_l1(c: _Ctx):
    if c.full not in c.members or not c.eff(c.full):
        return (c.full,)
    return None


def _ax_l2(c: _Ctx):
    for a in c.sorted:
        comp = c.full ^ a
        if c.eff(comp) and comp not in c.members:
            return (a, comp)
    return None


def _disjoint_union_values(members: list[int]) -> dict[int, tuple[int, int]]:
    """All unions of pairwise-disjoint sub-collections, with one generating pair each."""
    values = {m: (m, m) for m in members}
    frontier = list(members)
    while frontier:
        nxt = []
        for u in frontier:
            for v in list(values):
                if u & v == 0:
                    w = u | v
                    if w not in values:
                        values[w] = (u, v)
                        nxt.append(w)
        frontier = nxt
    return values


def _ax_l3(c: _Ctx):
    values = _disjoint_union_values(c.sorted)
    for w in sorted(values):
        if c.eff(w) and w not in c.members:
            u, v = values[w]
            return (u, v, w)
    return None


def _ax_suf3(c: _Ctx):
    for a in c.keff:
        for b in c.keff:
            if (a | b) in c.members and a not in c.members and b not in c.members:
                return (a, b, a | b)
    return None


def _ax_sif1(c: _Ctx):
    if c.full not in c.members:
        return (c.full,)
    return None


def _intersection_values(members: list[int]) -> dict[int, tuple[int, int]]:
    """All intersections of non-empty sub-collections, with one generating pair each."""
    values = {m: (m, m) for m in members}
    frontier = list(members)
    while frontier:
        nxt = []
        for u in frontier:
            for v in list(values):
                w = u & v
                if w not in values:
                    values[w] = (u, v)
                    nxt.append(w)
        frontier = nxt
    return values


def _ax_sif3(c: _Ctx):
    values = _intersection_values(c.sorted)
    for w in sorted(values):
        if c.eff(w) and w not in c.members:
            u, v = values[w]
            return (u, v, w)
    return None


def _ax_cl2(c: _Ctx):
    if c.full not in c.members:
        return (c.full,)
    return None


def _ax_uc1(c: _Ctx):
    for i, a in enumerate(c.sorted):
        for b in c.sorted[i:]:
            u = a | b
            if c.eff(u) and u not in c.members:
                return (a, b, u)
    return None


def _ax_uc2(c: _Ctx):
    if 0 not in c.members:
        return (0,)
    if c.full not in c.members:
        return (c.full,)
    return None


def _ax_in1(c: _Ctx):
    if 0 not in c.members:
        return (0,)
    return None


def _ax_in2(c: _Ctx):
    for a in c.sorted:
        # iterate submasks of a, ascending
        sub = 0
        while True:
            if c.eff(sub) and sub not in c.members:
                return (a, sub)
            if sub == a:
                break
            sub = (sub - a) & a
    return None


def _ax_ma2(c: _Ctx):
    for i, a in enumerate(c.sorted):
        for b in c.sorted[i:]:
            if a & b == 0 and b != c.full ^ a:
                return (a, b)
    return None


def _submasks(mask: int):
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def _ax_ma3(c: _Ctx):
    for a in c.sorted:
        outside = c.full ^ a
        for f_set in _submasks(a):
            fc = popcount(f_set)
            for g_set in _submasks(outside):
                if fc > popcount(g_set):
                    continue
                moved = (a & ~f_set) | g_set
                if c.eff(moved) and moved not in c.members:
                    return (a, f_set, g_set)
    return None


_AXIOMS = {
    "filter": [("Q0", _ax_q0), ("Q1", _ax_q1), ("Q2", _ax_q2), ("Q3", _ax_q3)],
    "ultrafilter": [("Q0", _ax_q0), ("Q1", _ax_q1), ("Q2", _ax_q2), ("Q3", _ax_q3), ("Q4", _ax_q4)],
    "weak_filter": [("Q0", _ax_q0), ("QW1'", _ax_qw1), ("Q2", _ax_q2), ("Q3", _ax_q3)],
    "quasi_filter": [("Q0", _ax_q0), ("QQ1'", _ax_qq1), ("Q2", _ax_q2), ("Q3", _ax_q3)],
    "single_filter": [("Q0", _ax_q0), ("QS1", _ax_qs1), ("Q2", _ax_q2), ("Q3", _ax_q3)],
    "single_ultrafilter": [
        ("Q0", _ax_q0),
        ("QS1", _ax_qs1),
        ("Q2", _ax_q2),
        ("Q3", _ax_q3),
        ("Q4", _ax_q4),
    ],
    "tangle": [("T1", _ax_q0), ("T2", _ax_q4), ("T3", _ax_t3), ("T4", _ax_t4)],
    "prefilter": [("P1", _ax_q3), ("P2", _ax_q0), ("P3", _ax_p3)],
    "ultra_prefilter": [("P1", _ax_q3), ("P2", _ax_q0), ("P3", _ax_p3), ("P4", _ax_p4)],
    "filter_subbase": [("SB1", _ax_nonempty), ("SB2", _ax_sb2), ("SB3", _ax_q0)],
    "ultrafilter_subbase": [
        ("SB1", _ax_nonempty),
        ("SB2", _ax_sb2),
        ("SB3", _ax_q0),
        ("SB4", _ax_p4),
    ],
    "pi_system": [("PI1", _ax_nonempty), ("PI2", _ax_pi2)],
    "lambda_system": [("L1", _ax_l1), ("L2", _ax_l2), ("L3", _ax_l3)],
    "superfilter": [("SUF1", _ax_q0), ("SUF2", _ax_q2), ("SUF3", _ax_suf3)],
    "sigma_filter": [("SIF1", _ax_sif1), ("SIF2", _ax_q2), ("SIF3", _ax_sif3)],
    "closure_system": [("CL1", _ax_q1), ("CL2", _ax_cl2)],
    "union_closed_system": [("UC1", _ax_uc1), ("UC2", _ax_uc2)],
    "independence_system": [("IN1", _ax_in1), ("IN2", _ax_in2)],
    "majority_system": [("MA1", _ax_q4), ("MA2", _ax_ma2), ("MA3", _ax_ma3)],
}


def _derived_flags(kind: str, c: _Ctx) -> dict:
    derived = {}
    if kind in ("filter", "ultrafilter") and len(c.members) <= DERIVED_TRIPLE_MAX_MEMBERS:
        ft1 = all(a & b & d for a, b, d in combinations_with_replacement(c.sorted, 3))
        derived["FT1"] = ft1
    if kind in ("single_filter", "single_ultrafilter"):
        derived["QS1"] = _ax_qs1(c) is None
        derived["QSD1"] = _ax_qsd1(c) is None
    return derived


def check_family(
    sys: ConnectivitySystem,
    fam: SetFamily,
    kind: str,
    single_mode: str = "QS1",
) -> Verdict:
    """Decide whether fam satisfies the axioms of the given family kind.

    single_mode selects which deletion axiom gates single_filter verdicts;
    both variants are always reported in Verdict.derived for that kind.
    """
    if kind not in _AXIOMS:
        raise InvalidParameter(f"unknown family kind {kind!r}")
    if fam.n != sys.n:
        raise GroundSetMismatch(f"family over {fam.n} elements, system over {sys.n}")
    if kind == "majority_system" and sys.n > gate_limit(MAJORITY_MAX_N):
        raise GroundSetTooLargeForEnumeration(
            f"majority_system axiom MA3 is gated to n <= {MAJORITY_MAX_N}"
        )
    c = _Ctx(sys, fam)
    axioms = _AXIOMS[kind]
    if kind in ("single_filter", "single_ultrafilter") and single_mode == "QSD1":
        axioms = [(lab, fn) if lab != "QS1" else ("QSD1", _ax_qsd1) for lab, fn in axioms]
    if kind in NONEMPTY_KINDS:
        axioms = [("nonempty", _ax_nonempty)] + axioms
    for label, fn in axioms:
        witness = fn(c)
        if witness is not None:
            return Verdict(False, label, tuple(witness[:3]), _derived_flags(kind, c))
    return Verdict(True, None, (), _derived_flags(kind, c))


def classify_family(sys: ConnectivitySystem, fam: SetFamily) -> FamilyFlags:
    """Principality and uniformity flags for a family over sys."""
    if fam.n != sys.n:
        raise GroundSetMismatch(f"family over {fam.n} elements, system over {sys.n}")
    eff_singletons = [1 << i for i in range(sys.n) if sys.values[1 << i] <= fam.k]
    if not eff_singletons:
        principal = "vacuous"
    elif all(s in fam.members for s in eff_singletons):
        principal = "yes"
    else:
        principal = "no"
    has_singleton_member = any(popcount(m) == 1 for m in fam.members)
    non_principal = "no" if has_singleton_member else "yes"
    uniform = all(popcount(m) == sys.n for m in fam.members)
    return FamilyFlags(principal, non_principal, uniform)


def complement_family(fam: SetFamily) -> SetFamily:
    """The family of complements; involutive."""
    full = (1 << fam.n) - 1
    return SetFamily(frozenset(full ^ m for m in fam.members), fam.k, fam.n)


def fip_check(sys: ConnectivitySystem, fam: SetFamily, a_mask: int) -> bool:
    """Whether every finite intersection over the members plus a_mask is non-empty.

    The literal answer is cross-checked against the complement-membership
    route; a disagreement emits a FipCrossCheckWarning.
    """
    verdict = check_family(sys, fam, "filter")
    if not verdict.holds:
        raise NotAFilter(verdict)
    values = _intersection_values(sorted(fam.members | {a_mask}))
    literal = 0 not in values
    via_complement = (sys.full_mask ^ a_mask) not in fam.members
    if literal != via_complement:
        warnings.warn(
            f"finite-intersection routes disagree for subset {a_mask:#x}: "
            f"literal={literal}, complement-membership={via_complement}",
            FipCrossCheckWarning,
        )
    return literal


def truncate_order(sys: ConnectivitySystem, fam: SetFamily, k_new: int) -> SetFamily:
    """Restrict a family to the members efficient at a smaller bound."""
    if k_new > fam.k:
        raise BoundIncrease(f"new bound {k_new} exceeds current bound {fam.k}")
    members = frozenset(m for m in fam.members if sys.values[m] <= k_new)
    return SetFamily(members, k_new, fam.n)
