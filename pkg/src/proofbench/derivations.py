"""Finitary codes for omega-branching derivations, checked locally.

A code is a closed term denoting a (possibly infinitely branching) one-sided
derivation tree.  step() is total: it yields the root label (sequent, rule,
ordinal tag), the premise index set, and a function computing the i-th child
code on demand.  Explicit nodes embed their children; All nodes branch over
all naturals through a child family; builder terms produce canonical
transfinite-induction derivations; transformer terms relabel (Mono) or
invert a conjunction (Inv) lazily.

Ordinal tags are bounds, not depths: local checking only requires strict
descent from parent to child.  The checker explores to a depth budget,
samples an initial window of every All node's children, and flags
truncation rather than silently passing unverified branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Union

from . import sexpr
from .formulas import (
    Conj,
    Disj,
    Exists,
    ForAll,
    Formula,
    FormulaError,
    Member,
    NotMember,
    Num,
    Sequent,
    atom_true,
    eval_term,
    field_statement,
    negate,
    prog_formula,
    prog_witness_instance,
    seq,
    sequent_from_sexp,
    sequent_to_sexp,
    formula_from_sexp,
    formula_to_sexp,
    subst_num,
    term_vars,
    ti_sequent,
)
from .orderings import (
    OrderingSpec,
    UnsupportedRankError,
    finite_field,
    finite_predecessors,
    in_field,
    less,
    otyp,
    rank,
    rankable,
    spec_from_sexp,
    spec_to_sexp,
)
from .ordinals import EPSILON, OMEGA, ONE, ZERO, Cmp, NotationError, Ordinal, add, compare, from_int, le, lt, mul, succ
from .ordinals import parse as ord_parse
from .ordinals import text as ord_text
from .sexpr import Str


class DerivationError(ValueError):
    pass


class RuleTag(Enum):
    AXM = "AxM"
    AXL = "AxL"
    AND = "And"
    OR = "Or"
    ALL = "All"
    EX = "Ex"
    CUT = "Cut"
    REP = "Rep"


@dataclass(frozen=True)
class NodeLabel:
    sequent: Sequent
    rule: RuleTag
    tag: Ordinal


class _Nat:
    """Index set of an All node: all naturals."""

    def __repr__(self):
        return "NAT"


NAT = _Nat()


@dataclass(frozen=True)
class Step:
    label: NodeLabel
    indices: Union[tuple[int, ...], _Nat]
    child: Callable[[int], "Code"]


# --- code terms -----------------------------------------------------------------


@dataclass(frozen=True)
class AxMNode:
    sequent: Sequent
    tag: Ordinal


@dataclass(frozen=True)
class AxLNode:
    sequent: Sequent
    tag: Ordinal


@dataclass(frozen=True)
class AndNode:
    sequent: Sequent
    tag: Ordinal
    left: "Code"
    right: "Code"


@dataclass(frozen=True)
class OrNode:
    sequent: Sequent
    tag: Ordinal
    branch: int
    child: "Code"


@dataclass(frozen=True)
class ExNode:
    sequent: Sequent
    tag: Ordinal
    witness: int
    child: "Code"


@dataclass(frozen=True)
class CutNode:
    sequent: Sequent
    tag: Ordinal
    left: "Code"
    right: "Code"


@dataclass(frozen=True)
class RepNode:
    sequent: Sequent
    tag: Ordinal
    child: "Code"


@dataclass(frozen=True)
class TiKids:
    """Children of the TI root: one sub-derivation per natural."""

    spec: OrderingSpec

    def child(self, i: int) -> "Code":
        return _root_child(self.spec, i)


@dataclass(frozen=True)
class PredKids:
    """Children of the predecessor quantifier inside a TI sub-derivation."""

    spec: OrderingSpec
    element: int

    def child(self, i: int) -> "Code":
        return _pred_child(self.spec, self.element, i)


@dataclass(frozen=True)
class TiVac:
    """Default child family: vacuous field-membership axioms."""

    spec: OrderingSpec

    def child(self, i: int) -> "Code":
        return _vacuous_root_child(self.spec, i)


@dataclass(frozen=True)
class PredVac:
    """Default child family: vacuous non-predecessor axioms."""

    spec: OrderingSpec
    element: int

    def child(self, i: int) -> "Code":
        return _vacuous_pred_child(self.spec, self.element, i)


@dataclass(frozen=True)
class FiniteSupport:
    """Explicit children at finitely many indices, a default family elsewhere."""

    entries: tuple[tuple[int, "Code"], ...]
    default: Union[TiVac, PredVac]

    def child(self, i: int) -> "Code":
        for j, c in self.entries:
            if j == i:
                return c
        return self.default.child(i)


Family = Union[TiKids, PredKids, FiniteSupport]


@dataclass(frozen=True)
class AllNode:
    sequent: Sequent
    tag: Ordinal
    family: Family


@dataclass(frozen=True)
class TiProg:
    """Canonical derivation of {not-Prog(spec,X), n in X}, tag w*(rank(n)+1)."""

    spec: OrderingSpec
    element: int


@dataclass(frozen=True)
class TiRoot:
    """Canonical derivation of the TI sequent, tag w*otyp(spec)+1."""

    spec: OrderingSpec


@dataclass(frozen=True)
class Mono:
    """Weakening by relabelling: same tree, root label (sequent, tag) replaced."""

    child: "Code"
    sequent: Sequent
    tag: Ordinal


@dataclass(frozen=True)
class Inv:
    """Conjunction inversion: derive (root - conj) + chosen conjunct."""

    child: "Code"
    conj: Formula
    which: int


Code = Union[
    AxMNode, AxLNode, AndNode, OrNode, ExNode, CutNode, RepNode, AllNode,
    TiProg, TiRoot, Mono, Inv,
]


# --- canonical TI builders ---------------------------------------------------------


@lru_cache(maxsize=None)
def _negprog(spec: OrderingSpec) -> Formula:
    return negate(prog_formula(spec))


def _delta_n(spec: OrderingSpec, n: int) -> Sequent:
    return seq(_negprog(spec), Member(Num(n)))


def _instance_parts(spec: OrderingSpec, n: int):
    inst = prog_witness_instance(spec, n)
    guard = inst.left  # (n in field) and (all predecessors in X)
    return inst, guard, guard.left, guard.right, inst.right


def _ti_body(spec: OrderingSpec, n: int) -> Code:
    """The witness-introduction body under the existential at element n."""
    rho = rank(spec, n)
    base = mul(OMEGA, rho)
    inst, guard, field_atom, allpred, not_in_x = _instance_parts(spec, n)
    delta = _delta_n(spec, n)
    n3a = AxMNode(delta | {field_atom}, ZERO)
    n3b = AllNode(delta | {allpred}, add(base, from_int(2)), PredKids(spec, n))
    n2a = AndNode(delta | {guard}, add(base, from_int(3)), n3a, n3b)
    n2b = AxLNode(delta | {not_in_x}, ZERO)
    return AndNode(delta | {inst}, add(base, from_int(4)), n2a, n2b)


def _pred_child(spec: OrderingSpec, n: int, i: int) -> Code:
    if less(spec, i, n):
        rho = rank(spec, n)
        _, _, _, allpred, _ = _instance_parts(spec, n)
        inst_i = subst_num(allpred.body, allpred.var, i)
        or_seq = _delta_n(spec, n) | {inst_i}
        return OrNode(or_seq, add(mul(OMEGA, rho), ONE), 2, TiProg(spec, i))
    return _vacuous_pred_child(spec, n, i)


def _vacuous_pred_child(spec: OrderingSpec, n: int, i: int) -> Code:
    rho = rank(spec, n)
    _, _, _, allpred, _ = _instance_parts(spec, n)
    inst_i = subst_num(allpred.body, allpred.var, i)
    not_less = inst_i.left
    or_seq = _delta_n(spec, n) | {inst_i}
    leaf = AxMNode(_delta_n(spec, n) | {not_less}, ZERO)
    return OrNode(or_seq, add(mul(OMEGA, rho), ONE), 1, leaf)


def _field_instance(spec: OrderingSpec, i: int) -> Formula:
    fld = field_statement(spec)
    return subst_num(fld.body, fld.var, i)


def _root_child(spec: OrderingSpec, i: int) -> Code:
    if not in_field(spec, i):
        return _vacuous_root_child(spec, i)
    rho = rank(spec, i)
    or_seq = seq(_negprog(spec), _field_instance(spec, i))
    core = ExNode(_delta_n(spec, i), add(mul(OMEGA, rho), from_int(5)), i, _ti_body(spec, i))
    return OrNode(or_seq, mul(OMEGA, succ(rho)), 2, core)


def _vacuous_root_child(spec: OrderingSpec, i: int) -> Code:
    inst = _field_instance(spec, i)
    leaf = AxMNode(seq(_negprog(spec), inst.left), ZERO)
    return OrNode(seq(_negprog(spec), inst), ONE, 1, leaf)


def derive_ti(spec: OrderingSpec) -> Code:
    """Cut-free canonical derivation of the TI sequent for a well-founded spec."""
    if not rankable(spec):
        raise DerivationError("derive_ti needs a well-founded combinator spec")
    if compare(otyp(spec), EPSILON) is not Cmp.LT:
        raise DerivationError("order type too large for the tag discipline")
    return TiRoot(spec)


# --- step ---------------------------------------------------------------------------


def _no_children(_: int) -> Code:
    raise DerivationError("axioms have no premises")


def step(code: Code) -> Step:
    """Decode one node: label, premise index set, and child-code function."""
    if isinstance(code, AxMNode):
        return Step(NodeLabel(code.sequent, RuleTag.AXM, code.tag), (), _no_children)
    if isinstance(code, AxLNode):
        return Step(NodeLabel(code.sequent, RuleTag.AXL, code.tag), (), _no_children)
    if isinstance(code, AndNode):
        return Step(
            NodeLabel(code.sequent, RuleTag.AND, code.tag),
            (1, 2),
            lambda i: code.left if i == 1 else code.right,
        )
    if isinstance(code, OrNode):
        if code.branch not in (1, 2):
            raise DerivationError("Or branch index must be 1 or 2")
        return Step(NodeLabel(code.sequent, RuleTag.OR, code.tag), (code.branch,), lambda i: code.child)
    if isinstance(code, ExNode):
        if code.witness < 0:
            raise DerivationError("Ex witness must be a natural")
        return Step(NodeLabel(code.sequent, RuleTag.EX, code.tag), (code.witness,), lambda i: code.child)
    if isinstance(code, CutNode):
        return Step(
            NodeLabel(code.sequent, RuleTag.CUT, code.tag),
            (1, 2),
            lambda i: code.left if i == 1 else code.right,
        )
    if isinstance(code, RepNode):
        return Step(NodeLabel(code.sequent, RuleTag.REP, code.tag), (1,), lambda i: code.child)
    if isinstance(code, AllNode):
        return Step(NodeLabel(code.sequent, RuleTag.ALL, code.tag), NAT, code.family.child)
    if isinstance(code, TiProg):
        spec, n = code.spec, code.element
        rho = rank(spec, n)
        return Step(
            NodeLabel(_delta_n(spec, n), RuleTag.EX, mul(OMEGA, succ(rho))),
            (n,),
            lambda i: _ti_body(spec, n),
        )
    if isinstance(code, TiRoot):
        spec = code.spec
        tag = add(mul(OMEGA, otyp(spec)), ONE)
        return Step(NodeLabel(ti_sequent(spec), RuleTag.ALL, tag), NAT, TiKids(spec).child)
    if isinstance(code, Mono):
        inner = step(code.child)
        if inner.label.rule is RuleTag.REP:
            # a repetition premise must equal its conclusion, so the
            # weakening is pushed through to the child (at its own tag)
            child = inner.child(1)
            child_tag = step(child).label.tag
            return Step(
                NodeLabel(code.sequent, RuleTag.REP, code.tag),
                (1,),
                lambda i: Mono(child, code.sequent, child_tag),
            )
        return Step(NodeLabel(code.sequent, inner.label.rule, code.tag), inner.indices, inner.child)
    if isinstance(code, Inv):
        return _step_inv(code)
    raise DerivationError(f"not a derivation code: {code!r}")


def _step_inv(code: Inv) -> Step:
    inner = step(code.child)
    delta = inner.label.sequent
    conj, which = code.conj, code.which
    if not isinstance(conj, Conj) or which not in (1, 2):
        raise DerivationError("inversion needs a conjunction and a branch in {1,2}")
    if conj not in delta:
        raise DerivationError("inversion target missing from the sequent")
    picked = conj.left if which == 1 else conj.right
    new_seq = (delta - {conj}) | {picked}
    rule = inner.label.rule
    if rule is RuleTag.CUT:
        raise DerivationError("inversion requires a cut-free code")
    if rule is RuleTag.AND:
        left, right = inner.child(1), inner.child(2)
        l1, l2 = step(left).label, step(right).label
        if l1.sequent <= delta | {conj.left} and l2.sequent <= delta | {conj.right}:
            # this node introduces the conjunction: splice the chosen premise
            chosen = left if which == 1 else right
            if conj in step(chosen).label.sequent:
                chosen = Inv(chosen, conj, which)
            return step(Mono(chosen, new_seq, inner.label.tag))

    def kid(i: int) -> Code:
        c = inner.child(i)
        if conj in step(c).label.sequent:
            return Inv(c, conj, which)
        return c

    return Step(NodeLabel(new_seq, rule, inner.label.tag), inner.indices, kid)


def root_label(code: Code) -> NodeLabel:
    return step(code).label


# --- transformations ------------------------------------------------------------------


def weaken(code: Code, gamma: Sequent, beta: Ordinal) -> Code:
    """Monotonicity: bigger sequent, bigger tag, same tree."""
    root = root_label(code)
    if not root.sequent <= gamma:
        raise DerivationError("weakening target must contain the root sequent")
    if not le(root.tag, beta):
        raise DerivationError("weakening tag must not decrease")
    return Mono(code, gamma, beta)


def and_invert(code: Code, which: int, conj: Formula | None = None) -> Code:
    """Inversion: from a proof of Delta + (A1 and A2) to Delta + A_which."""
    if which not in (1, 2):
        raise DerivationError("conjunct index must be 1 or 2")
    root = root_label(code)
    if conj is None:
        candidates = [f for f in root.sequent if isinstance(f, Conj)]
        if len(candidates) != 1:
            raise DerivationError(
                f"root holds {len(candidates)} conjunctions; pass the target explicitly"
            )
        conj = candidates[0]
    if conj not in root.sequent or not isinstance(conj, Conj):
        raise DerivationError("inversion target must be a conjunction in the root sequent")
    return Inv(code, conj, which)


def make_rep(code: Code, tag: Ordinal) -> Code:
    """Repetition node on top of a code, at a strictly larger tag."""
    root = root_label(code)
    if not lt(root.tag, tag):
        raise DerivationError("repetition tag must strictly increase")
    return RepNode(root.sequent, tag, code)


# --- local-correctness checking ----------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    fail_path: tuple[int, ...] | None
    fail_reason: str | None
    nodes_visited: int
    max_depth: int
    cut_free: bool
    truncated: bool


def _axl_holds(delta: Sequent) -> bool:
    ins = [f for f in delta if isinstance(f, Member) and not term_vars(f.term)]
    outs = [f for f in delta if isinstance(f, NotMember) and not term_vars(f.term)]
    for fin in ins:
        for fout in outs:
            if fin.var == fout.var and eval_term(fin.term) == eval_term(fout.term):
                return True
    return False


def _clause_ok(label: NodeLabel, kids: dict[int, NodeLabel], indices) -> str | None:
    """None when the node's local condition holds, else a reason."""
    delta, rule = label.sequent, label.rule
    if rule is RuleTag.AXM:
        if indices != ():
            return "axiom with premises"
        if not any(atom_true(f) for f in delta):
            return "no true closed atom for AxM"
        return None
    if rule is RuleTag.AXL:
        if indices != ():
            return "axiom with premises"
        if not _axl_holds(delta):
            return "no matching membership pair for AxL"
        return None
    if rule is RuleTag.AND:
        if indices != (1, 2):
            return "And wants premise indices {1,2}"
        for f in delta:
            if isinstance(f, Conj):
                if kids[1].sequent <= delta | {f.left} and kids[2].sequent <= delta | {f.right}:
                    return None
        return "no conjunction in the sequent matches the premises"
    if rule is RuleTag.OR:
        if len(indices) != 1 or indices[0] not in (1, 2):
            return "Or wants a single premise indexed 1 or 2"
        i = indices[0]
        for f in delta:
            if isinstance(f, Disj):
                side = f.left if i == 1 else f.right
                if kids[i].sequent <= delta | {side}:
                    return None
        return "no disjunction in the sequent matches the premise"
    if rule is RuleTag.ALL:
        if indices is not NAT:
            return "All wants premises for every natural"
        for f in delta:
            if isinstance(f, ForAll):
                if all(
                    kid.sequent <= delta | {subst_num(f.body, f.var, i)}
                    for i, kid in kids.items()
                ):
                    return None
        return "no universal formula matches the sampled premises"
    if rule is RuleTag.EX:
        if len(indices) != 1 or indices[0] < 0:
            return "Ex wants a single premise indexed by its witness"
        n = indices[0]
        for f in delta:
            if isinstance(f, Exists):
                if kids[n].sequent <= delta | {subst_num(f.body, f.var, n)}:
                    return None
        return "no existential formula matches the premise"
    if rule is RuleTag.CUT:
        if indices != (1, 2):
            return "Cut wants premise indices {1,2}"
        candidates = list(kids[1].sequent - delta) + [negate(g) for g in kids[2].sequent - delta]
        if not candidates:
            candidates = [next(iter(kids[1].sequent), None)]
        for a in candidates:
            if a is None:
                return None
            if kids[1].sequent <= delta | {a} and kids[2].sequent <= delta | {negate(a)}:
                return None
        return "no cut formula matches the premises"
    if rule is RuleTag.REP:
        if indices != (1,):
            return "Rep wants exactly one premise"
        if kids[1].sequent != delta:
            return "repetition premise must repeat the sequent"
        return None
    return f"unknown rule {rule}"


_DECODE_ERRORS = (DerivationError, FormulaError, NotationError, UnsupportedRankError)


def check_local(
    code: Code,
    depth_budget: int = 64,
    width_budget: int = 8,
    require_cut_free: bool = False,
) -> CheckReport:
    """Verify local correctness along a budgeted exploration.

    Each visited node's rule clause is checked against its (sampled)
    children, tags must strictly descend, and Cut nodes trip the cut_free
    flag (a failure when require_cut_free).  All nodes contribute children
    0..width_budget-1; skipped branches set `truncated`, never a silent pass.
    """
    nodes = 0
    max_depth = 0
    cut_free = True
    truncated = False
    stack: list[tuple[Code, int, tuple[int, ...]]] = [(code, 0, ())]

    def fail(path, reason):
        return CheckReport(False, path, reason, nodes, max_depth, cut_free, truncated)

    while stack:
        node, depth, path = stack.pop()
        nodes += 1
        max_depth = max(max_depth, depth)
        try:
            s = step(node)
        except _DECODE_ERRORS as e:
            return fail(path, f"decode error: {e}")
        if s.label.rule is RuleTag.CUT:
            cut_free = False
            if require_cut_free:
                return fail(path, "cut rule used in a cut-free check")
        if s.indices is NAT:
            idxs = list(range(width_budget))
            truncated = True
        else:
            idxs = list(s.indices)
        kids: dict[int, NodeLabel] = {}
        children: list[tuple[int, Code]] = []
        try:
            for i in idxs:
                c = s.child(i)
                kids[i] = step(c).label
                children.append((i, c))
        except _DECODE_ERRORS as e:
            return fail(path, f"decode error in a premise: {e}")
        reason = _clause_ok(s.label, kids, s.indices if s.indices is NAT else tuple(idxs))
        if reason is not None:
            return fail(path, reason)
        for i, lab in kids.items():
            if compare(lab.tag, s.label.tag) is not Cmp.LT:
                return fail(path + (i,), "ordinal tag fails to descend")
        if depth + 1 <= depth_budget:
            for i, c in reversed(children):
                stack.append((c, depth + 1, path + (i,)))
        elif children:
            truncated = True
    return CheckReport(True, None, None, nodes, max_depth, cut_free, truncated)


# --- full expansion (finite builders only) ----------------------------------------------


def expand(code: Code) -> Code:
    """Rewrite builder terms into explicit nodes (finite-support All nodes).

    Only possible when every All family has finite support: finite fields
    for the TI root, finite-rank elements for predecessor quantifiers.
    Transformed codes (Mono over such a tree) expand by relabelling.
    """
    if isinstance(code, (AxMNode, AxLNode)):
        return code
    if isinstance(code, AndNode):
        return AndNode(code.sequent, code.tag, expand(code.left), expand(code.right))
    if isinstance(code, OrNode):
        return OrNode(code.sequent, code.tag, code.branch, expand(code.child))
    if isinstance(code, ExNode):
        return ExNode(code.sequent, code.tag, code.witness, expand(code.child))
    if isinstance(code, CutNode):
        return CutNode(code.sequent, code.tag, expand(code.left), expand(code.right))
    if isinstance(code, RepNode):
        return RepNode(code.sequent, code.tag, expand(code.child))
    if isinstance(code, AllNode):
        fam = code.family
        if isinstance(fam, FiniteSupport):
            entries = tuple((i, expand(c)) for i, c in fam.entries)
            return AllNode(code.sequent, code.tag, FiniteSupport(entries, fam.default))
        if isinstance(fam, TiKids):
            support = finite_field(fam.spec)
            if support is None:
                raise DerivationError("cannot expand: infinite field")
            entries = tuple((i, expand(fam.child(i))) for i in sorted(support))
            return AllNode(code.sequent, code.tag, FiniteSupport(entries, TiVac(fam.spec)))
        if isinstance(fam, PredKids):
            support = finite_predecessors(fam.spec, fam.element)
            if support is None:
                raise DerivationError("cannot expand: infinitely many predecessors")
            entries = tuple((i, expand(fam.child(i))) for i in sorted(support))
            return AllNode(
                code.sequent, code.tag, FiniteSupport(entries, PredVac(fam.spec, fam.element))
            )
        raise DerivationError(f"unknown family {fam!r}")
    if isinstance(code, TiRoot):
        tag = add(mul(OMEGA, otyp(code.spec)), ONE)
        return expand(AllNode(ti_sequent(code.spec), tag, TiKids(code.spec)))
    if isinstance(code, TiProg):
        s = step(code)
        return ExNode(s.label.sequent, s.label.tag, code.element, expand(_ti_body(code.spec, code.element)))
    if isinstance(code, Mono):
        inner = expand(code.child)
        return _relabel(inner, code.sequent, code.tag)
    raise DerivationError(f"cannot expand {type(code).__name__} terms")


def _relabel(code: Code, sequent: Sequent, tag: Ordinal) -> Code:
    import dataclasses

    return dataclasses.replace(code, sequent=sequent, tag=tag)


# --- S-expression certificate format ----------------------------------------------------


def _tag_sexp(tag: Ordinal):
    return Str(ord_text(tag))


def code_to_sexp(code: Code):
    if isinstance(code, AxMNode):
        return ["axm", sequent_to_sexp(code.sequent), _tag_sexp(code.tag)]
    if isinstance(code, AxLNode):
        return ["axl", sequent_to_sexp(code.sequent), _tag_sexp(code.tag)]
    if isinstance(code, AndNode):
        return ["and", sequent_to_sexp(code.sequent), _tag_sexp(code.tag),
                code_to_sexp(code.left), code_to_sexp(code.right)]
    if isinstance(code, OrNode):
        return ["or", sequent_to_sexp(code.sequent), _tag_sexp(code.tag),
                code.branch, code_to_sexp(code.child)]
    if isinstance(code, ExNode):
        return ["ex", sequent_to_sexp(code.sequent), _tag_sexp(code.tag),
                code.witness, code_to_sexp(code.child)]
    if isinstance(code, CutNode):
        return ["cut", sequent_to_sexp(code.sequent), _tag_sexp(code.tag),
                code_to_sexp(code.left), code_to_sexp(code.right)]
    if isinstance(code, RepNode):
        return ["rep", sequent_to_sexp(code.sequent), _tag_sexp(code.tag),
                code_to_sexp(code.child)]
    if isinstance(code, AllNode):
        return ["all", sequent_to_sexp(code.sequent), _tag_sexp(code.tag),
                _family_to_sexp(code.family)]
    if isinstance(code, TiProg):
        return ["tiprog", spec_to_sexp(code.spec), code.element]
    if isinstance(code, TiRoot):
        return ["tiroot", spec_to_sexp(code.spec)]
    if isinstance(code, Mono):
        return ["mono", code_to_sexp(code.child), sequent_to_sexp(code.sequent), _tag_sexp(code.tag)]
    if isinstance(code, Inv):
        return ["inv", code_to_sexp(code.child), formula_to_sexp(code.conj), code.which]
    raise DerivationError(f"not a derivation code: {code!r}")


def _family_to_sexp(fam: Family):
    if isinstance(fam, TiKids):
        return ["tikids", spec_to_sexp(fam.spec)]
    if isinstance(fam, PredKids):
        return ["predkids", spec_to_sexp(fam.spec), fam.element]
    if isinstance(fam, FiniteSupport):
        entries = [[i, code_to_sexp(c)] for i, c in fam.entries]
        return ["fs", entries, _default_to_sexp(fam.default)]
    raise DerivationError(f"unknown family {fam!r}")


def _default_to_sexp(d):
    if isinstance(d, TiVac):
        return ["tivac", spec_to_sexp(d.spec)]
    if isinstance(d, PredVac):
        return ["predvac", spec_to_sexp(d.spec), d.element]
    raise DerivationError(f"unknown default family {d!r}")


def _parse_tag(x) -> Ordinal:
    if not isinstance(x, Str):
        raise DerivationError(f"ordinal tag must be a quoted notation: {x!r}")
    return ord_parse(x.value)


def code_from_sexp(x) -> Code:
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise DerivationError(f"not a derivation code: {x!r}")
    head, rest = x[0], x[1:]
    if head == "axm" and len(rest) == 2:
        return AxMNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]))
    if head == "axl" and len(rest) == 2:
        return AxLNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]))
    if head == "and" and len(rest) == 4:
        return AndNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]),
                       code_from_sexp(rest[2]), code_from_sexp(rest[3]))
    if head == "or" and len(rest) == 4 and isinstance(rest[2], int):
        return OrNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]), rest[2],
                      code_from_sexp(rest[3]))
    if head == "ex" and len(rest) == 4 and isinstance(rest[2], int):
        return ExNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]), rest[2],
                      code_from_sexp(rest[3]))
    if head == "cut" and len(rest) == 4:
        return CutNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]),
                       code_from_sexp(rest[2]), code_from_sexp(rest[3]))
    if head == "rep" and len(rest) == 3:
        return RepNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]), code_from_sexp(rest[2]))
    if head == "all" and len(rest) == 3:
        return AllNode(sequent_from_sexp(rest[0]), _parse_tag(rest[1]), _family_from_sexp(rest[2]))
    if head == "tiprog" and len(rest) == 2 and isinstance(rest[1], int):
        return TiProg(spec_from_sexp(rest[0]), rest[1])
    if head == "tiroot" and len(rest) == 1:
        return TiRoot(spec_from_sexp(rest[0]))
    if head == "mono" and len(rest) == 3:
        return Mono(code_from_sexp(rest[0]), sequent_from_sexp(rest[1]), _parse_tag(rest[2]))
    if head == "inv" and len(rest) == 3 and isinstance(rest[2], int):
        return Inv(code_from_sexp(rest[0]), formula_from_sexp(rest[1]), rest[2])
    raise DerivationError(f"not a derivation code: {x!r}")


def _family_from_sexp(x) -> Family:
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise DerivationError(f"not a child family: {x!r}")
    head, rest = x[0], x[1:]
    if head == "tikids" and len(rest) == 1:
        return TiKids(spec_from_sexp(rest[0]))
    if head == "predkids" and len(rest) == 2 and isinstance(rest[1], int):
        return PredKids(spec_from_sexp(rest[0]), rest[1])
    if head == "fs" and len(rest) == 2:
        entries = []
        if not isinstance(rest[0], list):
            raise DerivationError("fs entries must be a list")
        for e in rest[0]:
            if not (isinstance(e, list) and len(e) == 2 and isinstance(e[0], int)):
                raise DerivationError(f"bad fs entry: {e!r}")
            entries.append((e[0], code_from_sexp(e[1])))
        return FiniteSupport(tuple(entries), _default_from_sexp(rest[1]))
    raise DerivationError(f"not a child family: {x!r}")


def _default_from_sexp(x):
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise DerivationError(f"not a default family: {x!r}")
    head, rest = x[0], x[1:]
    if head == "tivac" and len(rest) == 1:
        return TiVac(spec_from_sexp(rest[0]))
    if head == "predvac" and len(rest) == 2 and isinstance(rest[1], int):
        return PredVac(spec_from_sexp(rest[0]), rest[1])
    raise DerivationError(f"not a default family: {x!r}")


def code_text(code: Code) -> str:
    return sexpr.dump(code_to_sexp(code))


def parse_code(s: str) -> Code:
    return code_from_sexp(sexpr.parse(s))
