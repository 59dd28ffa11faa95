"""Folner boundary ratios, the epsilon-search over set families, and the
doubling-set construction from Folner failure.

All cardinalities are exact integers and all ratios exact rationals. Families
are explicit ordered lists; the order-theoretic net formalism is replaced by
the finite-E/epsilon criterion it is equivalent to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ConstructionError
from .spaces import CellSpace, Coset, Window


@dataclass(frozen=True)
class RatioRecord:
    """Outward and inward boundary ratios of F under one coset map.

    ratio_out = |F \\ pre(F)| / |F|; ratio_in = |pre(F) \\ F| / |F|, where
    pre is the preimage under ``. |> coset``. When the window cannot certify
    the preimage, ratio_in is only a lower bound.
    """

    set_id: str
    coset_key: tuple
    size: int
    ratio_out: Fraction
    ratio_in: Fraction
    certified: bool


@dataclass(frozen=True)
class ExpansionSet:
    """A finite set of cosets, tracked with its identity-coset membership."""

    cosets: tuple

    @property
    def contains_identity(self) -> bool:
        return any(c.is_identity for c in self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    def __len__(self) -> int:
        return len(self.cosets)

    @staticmethod
    def of(cosets: Sequence[Coset]) -> "ExpansionSet":
        out: dict = {}
        for c in cosets:
            out.setdefault(c.key, c)
        return ExpansionSet(tuple(out[k] for k in sorted(out)))


def ratios(
    space: CellSpace, F: Sequence, coset: Coset, universe: Window, set_id: str = "F"
) -> RatioRecord:
    if not F:
        raise ConstructionError("F must be non-empty")
    pre = space.preimage(coset, list(F), universe)
    f_set = set(F)
    pre_set = set(pre.points)
    n = len(F)
    return RatioRecord(
        set_id=set_id,
        coset_key=coset.key,
        size=n,
        ratio_out=Fraction(len(f_set - pre_set), n),
        ratio_in=Fraction(len(pre_set - f_set), n),
        certified=pre.certified,
    )


@dataclass
class FolnerSearchResult:
    found: Optional[Sequence]
    found_id: Optional[str]
    records: list = field(default_factory=list)
    # on exhaustion: the min-max candidate and its witness coset
    best_id: Optional[str] = None
    best_max_ratio: Optional[Fraction] = None
    best_witness_coset: Optional[tuple] = None

    @property
    def exhausted(self) -> bool:
        return self.found is None


def folner_search(
    space: CellSpace,
    E: ExpansionSet,
    epsilon: Fraction,
    family: Sequence[tuple[str, Sequence]],
    universe: Window,
) -> FolnerSearchResult:
    """First family member with all outward ratios < epsilon, else the best
    (min-max) candidate together with its witness coset."""
    if epsilon <= 0:
        raise ConstructionError("epsilon must be positive")
    result = FolnerSearchResult(found=None, found_id=None)
    for set_id, F in family:
        recs = [ratios(space, F, e, universe, set_id) for e in E]
        result.records.extend(recs)
        worst = max(recs, key=lambda r: (r.ratio_out, r.coset_key))
        if worst.ratio_out < epsilon:
            result.found = F
            result.found_id = set_id
            return result
        if result.best_max_ratio is None or worst.ratio_out < result.best_max_ratio:
            result.best_max_ratio = worst.ratio_out
            result.best_id = set_id
            result.best_witness_coset = worst.coset_key
    return result


@dataclass(frozen=True)
class DoublingConstruction:
    E2: ExpansionSet
    xi: Fraction
    n: int
    E: ExpansionSet


def doubling_from_failure(
    space: CellSpace,
    E1: ExpansionSet,
    epsilon: Fraction,
    evidence: FolnerSearchResult,
) -> DoublingConstruction:
    """Constructive step from Folner failure to a doubling set.

    Requires evidence (an exhausted search) that every family member has an
    outward ratio >= epsilon for some coset in E1. Builds E2 = {G0} u E1,
    xi = 1 + epsilon/|G0|, n minimal with xi^n >= 2, and E as the n-fold
    composition of E2 with itself.
    """
    if epsilon <= 0:
        raise ConstructionError("epsilon must be positive")
    if not evidence.exhausted:
        raise ConstructionError(
            "evidence does not show Folner failure: the search found "
            f"{evidence.found_id!r}"
        )
    identity = space.coset(space.group.identity())
    E2 = ExpansionSet.of([identity, *E1.cosets])
    xi = 1 + Fraction(epsilon) / len(space.stabilizer)
    n = 1
    power = xi
    while power < 2:
        power *= xi
        n += 1
    E = E2
    for _ in range(n - 1):
        E = _compose_sets(space, E, E2)
    if not E.contains_identity:
        raise ConstructionError("identity coset lost while composing expansion sets")
    return DoublingConstruction(E2=E2, xi=xi, n=n, E=E)


def _compose_sets(space: CellSpace, E: ExpansionSet, E2: ExpansionSet) -> ExpansionSet:
    # point-independent form: all representatives, so the result dominates the
    # per-point composed set of every m
    out: dict = {}
    for e in E:
        for g in e.representatives():
            for ep in E2:
                c = space.coset(g * ep.rep)
                out.setdefault(c.key, c)
    return ExpansionSet(tuple(out[k] for k in sorted(out)))


@dataclass(frozen=True)
class DoublingVerdict:
    set_id: str
    size: int
    image_size: int

    @property
    def passed(self) -> bool:
        return self.image_size >= 2 * self.size


@dataclass
class DoublingReport:
    verdicts: list

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def check_doubling(
    space: CellSpace,
    E: ExpansionSet,
    family: Sequence[tuple[str, Sequence]],
    universe: Optional[Window] = None,
) -> DoublingReport:
    """Per-set verdict |F |> E| >= 2|F| with exact cardinalities."""
    verdicts = []
    for set_id, F in family:
        image = space.semi_action_set(F, E)
        verdicts.append(DoublingVerdict(set_id, len(set(F)), len(image)))
    return DoublingReport(verdicts)
