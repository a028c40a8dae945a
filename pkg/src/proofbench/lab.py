"""Certificate-store labs: induced orderings, their types, and reflection checks.

A theory at desk scale is a named store of claims, each pairing an ordering
with either a checked TI certificate or a bare assertion of
well-foundedness.  The induced relation restricts a well-founded base: a
pair holds when some linear store claim admits an embedding of the base
restricted below the pair's upper element.  Checked-only stores have a
computable order type (the certified supremum capped by the base); stores
with false assertions are caught by hunting constructive descent inside the
claimed orderings themselves, since the induced relation, being a
subrelation of the base, never descends unboundedly on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Union

from . import sexpr
from .derivations import Code, check_local, parse_code, root_label
from .formulas import ti_sequent
from .orderings import (
    OrderingSpec,
    check_lo,
    embed_search,
    field_elements,
    less,
    otyp,
    rankable,
    search_descending,
    spec_from_sexp,
)
from .ordinals import ZERO, Cmp, Ordinal, compare, max_ord
from .sexpr import Str
from .verdict import Verdict


class LabError(ValueError):
    pass


class Evidence(Enum):
    CHECKED = "checked"
    ASSERTED = "asserted"


@dataclass(frozen=True)
class Claim:
    ordering: OrderingSpec
    evidence: Evidence
    certificate: Code | None = None


@dataclass(frozen=True)
class TheoryStore:
    name: str
    claims: tuple[Claim, ...]


@dataclass(frozen=True)
class WellFoundedUpToBudget:
    budget: int
    claims_checked: int


@dataclass(frozen=True)
class CulpritReport:
    claim_index: int
    ordering: OrderingSpec
    evidence: Evidence
    chain: tuple[int, ...]


@dataclass(frozen=True)
class ChainEntry:
    name: str
    order_type: Ordinal
    witnessed: bool | None  # next store's type covered by a claim here


@dataclass(frozen=True)
class ChainReport:
    entries: tuple[ChainEntry, ...]
    descent_ok: bool
    first_violation: int | None


@dataclass
class PrecT:
    """The induced relation: below the base, bounded by embeddable claims."""

    base: OrderingSpec
    store: TheoryStore
    embed_budget: int
    usable: tuple[int, ...]  # indices of claims that passed the linearity check
    _embed_memo: dict = field(default_factory=dict, repr=False)

    def less(self, a: int, b: int) -> bool:
        return less(self.base, a, b) and self.bounded(b)

    def bounded(self, b: int) -> bool:
        """Some usable claim embeds the base restricted below b."""
        return any(self._embeds(i, b) for i in self.usable)

    def _embeds(self, claim_index: int, b: int) -> bool:
        key = (claim_index, b)
        got = self._embed_memo.get(key)
        if got is None:
            target = self.store.claims[claim_index].ordering
            got = embed_search(self.base, b, target, self.embed_budget).ok
            self._embed_memo[key] = got
        return got


def build_precT(
    store: TheoryStore,
    base: OrderingSpec,
    embed_budget: int = 200,
    lo_budget: int = 200,
    depth_budget: int = 64,
    width_budget: int = 8,
) -> PrecT:
    """Validate the store and assemble the induced relation."""
    if not rankable(base):
        raise LabError("the base presentation must be a well-founded combinator")
    usable = []
    for i, claim in enumerate(store.claims):
        if claim.evidence is Evidence.CHECKED:
            if claim.certificate is None:
                raise LabError(f"claim {i}: checked evidence needs a certificate")
            if root_label(claim.certificate).sequent != ti_sequent(claim.ordering):
                raise LabError(f"claim {i}: certificate proves the wrong sequent")
            report = check_local(
                claim.certificate, depth_budget, width_budget, require_cut_free=True
            )
            if not report.passed:
                raise LabError(f"claim {i}: certificate fails local checks: {report.fail_reason}")
        if check_lo(claim.ordering, lo_budget).verdict is Verdict.TRUE:
            usable.append(i)
    return PrecT(base, store, embed_budget, tuple(usable))


def retype(prec: PrecT) -> Ordinal:
    """Order type of the induced relation (checked-only stores)."""
    for i, claim in enumerate(prec.store.claims):
        if claim.evidence is not Evidence.CHECKED:
            raise LabError(f"claim {i} is only asserted; the order type is undefined")
    certified = ZERO
    for i in prec.usable:
        certified = max_ord(certified, otyp(prec.store.claims[i].ordering))
    base_type = otyp(prec.base)
    return certified if compare(certified, base_type) is Cmp.LT else base_type


def reflect_check(prec: PrecT, chain_budget: int = 50) -> Union[WellFoundedUpToBudget, CulpritReport]:
    """Hunt for a false well-foundedness claim among the usable store claims.

    The induced relation is a subrelation of the well-founded base, so the
    lemma's contrapositive is realized directly on the claims: any usable
    claim whose ordering admits a budget-length constructive descent is the
    culprit.  A checked culprit would be a soundness bug and raises.
    """
    checked = 0
    for i in prec.usable:
        claim = prec.store.claims[i]
        checked += 1
        if rankable(claim.ordering):
            continue
        starts = field_elements(claim.ordering, 1)
        if not starts:
            continue
        chain = search_descending(claim.ordering, starts[0], chain_budget)
        if chain is not None:
            if claim.evidence is Evidence.CHECKED:
                raise LabError(
                    f"soundness violation: checked claim {i} guards an ill-founded ordering"
                )
            return CulpritReport(i, claim.ordering, claim.evidence, tuple(chain))
    return WellFoundedUpToBudget(chain_budget, checked)


def chain_check(
    stores: list[TheoryStore] | tuple[TheoryStore, ...],
    base: OrderingSpec,
    embed_budget: int = 200,
    chain_budget: int = 50,
) -> ChainReport:
    """Order types along a store sequence must strictly descend.

    Each store must also witness its successor's type by a checked claim of
    at least that order type (the store-level reading of proving the next
    theory's induced ordering well-founded).
    """
    types = []
    for store in stores:
        prec = build_precT(store, base, embed_budget)
        types.append(retype(prec))
    entries = []
    for n, store in enumerate(stores):
        witnessed = None
        if n + 1 < len(stores):
            witnessed = any(
                claim.evidence is Evidence.CHECKED
                and compare(otyp(claim.ordering), types[n + 1]) is not Cmp.LT
                for claim in store.claims
            )
        entries.append(ChainEntry(store.name, types[n], witnessed))
    first_violation = None
    for n in range(len(types) - 1):
        if compare(types[n], types[n + 1]) is not Cmp.GT:
            first_violation = n
            break
    return ChainReport(tuple(entries), first_violation is None, first_violation)


# --- store file format ------------------------------------------------------------


def store_from_sexp(x, cert_loader: Callable[[str], str]) -> TheoryStore:
    """Parse `(theory "name" (claim SPEC (cert "file") | asserted) ...)`."""
    if not isinstance(x, list) or len(x) < 2 or x[0] != "theory" or not isinstance(x[1], Str):
        raise LabError('a store file starts with (theory "name" ...)')
    claims = []
    for item in x[2:]:
        if not (isinstance(item, list) and len(item) == 3 and item[0] == "claim"):
            raise LabError(f"bad claim: {item!r}")
        spec = spec_from_sexp(item[1])
        ev = item[2]
        if ev == "asserted":
            claims.append(Claim(spec, Evidence.ASSERTED))
        elif isinstance(ev, list) and len(ev) == 2 and ev[0] == "cert" and isinstance(ev[1], Str):
            code = parse_code(cert_loader(ev[1].value))
            claims.append(Claim(spec, Evidence.CHECKED, code))
        else:
            raise LabError(f"bad evidence: {ev!r}")
    return TheoryStore(x[1].value, tuple(claims))


def parse_store(text: str, cert_loader: Callable[[str], str]) -> TheoryStore:
    return store_from_sexp(sexpr.parse(text), cert_loader)
