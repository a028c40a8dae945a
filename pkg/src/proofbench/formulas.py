"""Tait-normal-form formulas over (0,1,+,x) with one set-variable alphabet.

Negation lives on atoms only; `negate` is the De Morgan dual and an
involution.  Atoms come in dual pairs: term equations, set-variable
membership, and decidable relation atoms referring to an ordering spec
(strict comparison, field membership, and membership in the initial segment
of ranks below a notation).  The relation atoms are what lets Prog/TI
matrices over combinator orderings stay quantifier-checkable at desk scale;
the atomic diagram used by axiom checks is the set of true closed atoms over
this enlarged signature.

Sequents are plain frozensets of formulas, read disjunctively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from . import sexpr
from .orderings import (
    OrderingSpec,
    UnsupportedRankError,
    elements_up_to_rank,
    in_field,
    less,
    otyp,
    rank,
    segment_member,
    spec_from_sexp,
    spec_to_sexp,
)
from .ordinals import Ordinal
from .ordinals import parse as ord_parse
from .ordinals import text as ord_text
from .sexpr import Str
from .verdict import Verdict, v_and, v_or


class FormulaError(ValueError):
    pass


# --- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"


Term = Union[Num, Var, Plus, Times]


def eval_term(t: Term, env: dict[str, int] | None = None) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        if env and t.name in env:
            return env[t.name]
        raise FormulaError(f"open term: variable {t.name}")
    if isinstance(t, Plus):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Times):
        return eval_term(t.left, env) * eval_term(t.right, env)
    raise FormulaError(f"not a term: {t!r}")


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Num):
        return frozenset()
    if isinstance(t, Var):
        return frozenset({t.name})
    return term_vars(t.left) | term_vars(t.right)


def subst_term(t: Term, var: str, value: int) -> Term:
    if isinstance(t, Num):
        return t
    if isinstance(t, Var):
        return Num(value) if t.name == var else t
    if isinstance(t, Plus):
        return Plus(subst_term(t.left, var, value), subst_term(t.right, var, value))
    return Times(subst_term(t.left, var, value), subst_term(t.right, var, value))


# --- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Member:
    term: Term
    var: str = "X"


@dataclass(frozen=True)
class NotMember:
    term: Term
    var: str = "X"


@dataclass(frozen=True)
class OrdLess:
    spec: OrderingSpec
    left: Term
    right: Term


@dataclass(frozen=True)
class NotOrdLess:
    spec: OrderingSpec
    left: Term
    right: Term


@dataclass(frozen=True)
class FieldMember:
    spec: OrderingSpec
    term: Term


@dataclass(frozen=True)
class NotFieldMember:
    spec: OrderingSpec
    term: Term


@dataclass(frozen=True)
class SegMember:
    spec: OrderingSpec
    term: Term
    bound: Ordinal


@dataclass(frozen=True)
class NotSegMember:
    spec: OrderingSpec
    term: Term
    bound: Ordinal


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[
    Eq, Neq, Member, NotMember, OrdLess, NotOrdLess, FieldMember, NotFieldMember,
    SegMember, NotSegMember, Conj, Disj, ForAll, Exists,
]

ATOMS = (Eq, Neq, Member, NotMember, OrdLess, NotOrdLess, FieldMember,
         NotFieldMember, SegMember, NotSegMember)

Sequent = frozenset


def seq(*formulas: Formula) -> Sequent:
    return frozenset(formulas)


def negate(f: Formula) -> Formula:
    if isinstance(f, Eq):
        return Neq(f.left, f.right)
    if isinstance(f, Neq):
        return Eq(f.left, f.right)
    if isinstance(f, Member):
        return NotMember(f.term, f.var)
    if isinstance(f, NotMember):
        return Member(f.term, f.var)
    if isinstance(f, OrdLess):
        return NotOrdLess(f.spec, f.left, f.right)
    if isinstance(f, NotOrdLess):
        return OrdLess(f.spec, f.left, f.right)
    if isinstance(f, FieldMember):
        return NotFieldMember(f.spec, f.term)
    if isinstance(f, NotFieldMember):
        return FieldMember(f.spec, f.term)
    if isinstance(f, SegMember):
        return NotSegMember(f.spec, f.term, f.bound)
    if isinstance(f, NotSegMember):
        return SegMember(f.spec, f.term, f.bound)
    if isinstance(f, Conj):
        return Disj(negate(f.left), negate(f.right))
    if isinstance(f, Disj):
        return Conj(negate(f.left), negate(f.right))
    if isinstance(f, ForAll):
        return Exists(f.var, negate(f.body))
    if isinstance(f, Exists):
        return ForAll(f.var, negate(f.body))
    raise FormulaError(f"not a formula: {f!r}")


def subformulas(f: Formula):
    yield f
    if isinstance(f, (Conj, Disj)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (ForAll, Exists)):
        yield from subformulas(f.body)


def is_x_positive(f: Formula, var: str = "X") -> bool:
    """No occurrence of the form t not-in var."""
    return not any(isinstance(g, NotMember) and g.var == var for g in subformulas(f))


def set_vars(f: Formula) -> frozenset[str]:
    return frozenset(g.var for g in subformulas(f) if isinstance(g, (Member, NotMember)))


def is_atom(f: Formula) -> bool:
    return isinstance(f, ATOMS)


def free_num_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Eq, Neq, OrdLess, NotOrdLess)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, (Member, NotMember, FieldMember, NotFieldMember, SegMember, NotSegMember)):
        return term_vars(f.term)
    if isinstance(f, (Conj, Disj)):
        return free_num_vars(f.left) | free_num_vars(f.right)
    if isinstance(f, (ForAll, Exists)):
        return free_num_vars(f.body) - {f.var}
    raise FormulaError(f"not a formula: {f!r}")


def subst_num(f: Formula, var: str, value: int) -> Formula:
    """Instantiate a number variable with a numeral (capture-free: numerals)."""
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, var, value), subst_term(f.right, var, value))
    if isinstance(f, Neq):
        return Neq(subst_term(f.left, var, value), subst_term(f.right, var, value))
    if isinstance(f, Member):
        return Member(subst_term(f.term, var, value), f.var)
    if isinstance(f, NotMember):
        return NotMember(subst_term(f.term, var, value), f.var)
    if isinstance(f, OrdLess):
        return OrdLess(f.spec, subst_term(f.left, var, value), subst_term(f.right, var, value))
    if isinstance(f, NotOrdLess):
        return NotOrdLess(f.spec, subst_term(f.left, var, value), subst_term(f.right, var, value))
    if isinstance(f, FieldMember):
        return FieldMember(f.spec, subst_term(f.term, var, value))
    if isinstance(f, NotFieldMember):
        return NotFieldMember(f.spec, subst_term(f.term, var, value))
    if isinstance(f, SegMember):
        return SegMember(f.spec, subst_term(f.term, var, value), f.bound)
    if isinstance(f, NotSegMember):
        return NotSegMember(f.spec, subst_term(f.term, var, value), f.bound)
    if isinstance(f, Conj):
        return Conj(subst_num(f.left, var, value), subst_num(f.right, var, value))
    if isinstance(f, Disj):
        return Disj(subst_num(f.left, var, value), subst_num(f.right, var, value))
    if isinstance(f, ForAll):
        return f if f.var == var else ForAll(f.var, subst_num(f.body, var, value))
    if isinstance(f, Exists):
        return f if f.var == var else Exists(f.var, subst_num(f.body, var, value))
    raise FormulaError(f"not a formula: {f!r}")


def substitute(f: Formula, var: str, template: Callable[[Term], Formula]) -> Formula:
    """Replace each occurrence of (t in var) by template(t).

    Only defined on formulas positive in var, mirroring how the bound
    machinery applies it.
    """
    if not is_x_positive(f, var):
        raise FormulaError(f"substitution target is not positive in {var}")

    def walk(g: Formula) -> Formula:
        if isinstance(g, Member) and g.var == var:
            return template(g.term)
        if isinstance(g, Conj):
            return Conj(walk(g.left), walk(g.right))
        if isinstance(g, Disj):
            return Disj(walk(g.left), walk(g.right))
        if isinstance(g, ForAll):
            return ForAll(g.var, walk(g.body))
        if isinstance(g, Exists):
            return Exists(g.var, walk(g.body))
        return g

    return walk(f)


def substitute_sequent(delta: Sequent, var: str, template: Callable[[Term], Formula]) -> Sequent:
    return frozenset(substitute(f, var, template) for f in delta)


def segment_template(spec: OrderingSpec, bound: Ordinal) -> Callable[[Term], Formula]:
    """The substitution X |-> (rank below `bound`); (t in X) becomes a segment atom."""
    return lambda t: SegMember(spec, t, bound)


# --- budgeted evaluation ---------------------------------------------------------


def _conjuncts(f: Formula):
    if isinstance(f, Conj):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


def _disjuncts(f: Formula):
    if isinstance(f, Disj):
        yield from _disjuncts(f.left)
        yield from _disjuncts(f.right)
    else:
        yield f


def _critical_domain(var: str, body: Formula, existential: bool) -> list[int] | None:
    """A finite set outside which an existential matrix is surely false
    (resp. a universal matrix surely true), when one is detectable.

    The detectable shapes are guards on the quantified variable: a strict
    predecessor guard below an element of finite rank, or field membership
    in an order of finite type.
    """
    guards = _conjuncts(body) if existential else _disjuncts(body)
    want_less, want_field = (OrdLess, FieldMember) if existential else (NotOrdLess, NotFieldMember)
    for g in guards:
        if isinstance(g, want_less) and g.left == Var(var) and not term_vars(g.right):
            spec, n = g.spec, eval_term(g.right)
            if not in_field(spec, n):
                return []
            try:
                rho = rank(spec, n)
            except UnsupportedRankError:
                continue
            if rho.is_finite():
                return elements_up_to_rank(spec, rho.nat_value())
        if isinstance(g, want_field) and g.term == Var(var):
            try:
                size = otyp(g.spec)
            except UnsupportedRankError:
                continue
            if size.is_finite():
                return elements_up_to_rank(g.spec, size.nat_value())
    return None


def eval_closed(f: Formula, budget: int) -> Verdict:
    """Three-valued evaluation; quantifiers search numerals below `budget`.

    TRUE/FALSE are definitive; UNKNOWN signals budget exhaustion.  A
    quantifier whose matrix carries a decidable guard on the bound variable
    (predecessors of a finite-rank element, or a finite field) is decided
    exactly over that finite domain.  Set variables are not allowed
    (evaluate after substitution).
    """
    if isinstance(f, (Member, NotMember)):
        raise FormulaError("eval_closed needs a set-variable-free formula")
    if isinstance(f, Eq):
        return Verdict.TRUE if eval_term(f.left) == eval_term(f.right) else Verdict.FALSE
    if isinstance(f, Neq):
        return Verdict.TRUE if eval_term(f.left) != eval_term(f.right) else Verdict.FALSE
    if isinstance(f, OrdLess):
        return Verdict.TRUE if less(f.spec, eval_term(f.left), eval_term(f.right)) else Verdict.FALSE
    if isinstance(f, NotOrdLess):
        return Verdict.TRUE if not less(f.spec, eval_term(f.left), eval_term(f.right)) else Verdict.FALSE
    if isinstance(f, FieldMember):
        return Verdict.TRUE if in_field(f.spec, eval_term(f.term)) else Verdict.FALSE
    if isinstance(f, NotFieldMember):
        return Verdict.TRUE if not in_field(f.spec, eval_term(f.term)) else Verdict.FALSE
    if isinstance(f, (SegMember, NotSegMember)):
        n = eval_term(f.term)
        if not in_field(f.spec, n):
            inside = False
        else:
            try:
                inside = segment_member(f.spec, n, f.bound)
            except UnsupportedRankError:
                return Verdict.UNKNOWN
        if isinstance(f, SegMember):
            return Verdict.TRUE if inside else Verdict.FALSE
        return Verdict.FALSE if inside else Verdict.TRUE
    if isinstance(f, Conj):
        return v_and(eval_closed(f.left, budget), eval_closed(f.right, budget))
    if isinstance(f, Disj):
        return v_or(eval_closed(f.left, budget), eval_closed(f.right, budget))
    if isinstance(f, ForAll):
        if f.var not in free_num_vars(f.body):
            return eval_closed(f.body, budget)
        domain = _critical_domain(f.var, f.body, existential=False)
        if domain is not None:
            acc = Verdict.TRUE
            for i in domain:
                acc = v_and(acc, eval_closed(subst_num(f.body, f.var, i), budget))
                if acc is Verdict.FALSE:
                    return acc
            return acc
        for i in range(budget):
            if eval_closed(subst_num(f.body, f.var, i), budget) is Verdict.FALSE:
                return Verdict.FALSE
        return Verdict.UNKNOWN
    if isinstance(f, Exists):
        if f.var not in free_num_vars(f.body):
            return eval_closed(f.body, budget)
        domain = _critical_domain(f.var, f.body, existential=True)
        if domain is not None:
            acc = Verdict.FALSE
            for i in domain:
                acc = v_or(acc, eval_closed(subst_num(f.body, f.var, i), budget))
                if acc is Verdict.TRUE:
                    return acc
            return acc
        for i in range(budget):
            if eval_closed(subst_num(f.body, f.var, i), budget) is Verdict.TRUE:
                return Verdict.TRUE
        return Verdict.UNKNOWN
    raise FormulaError(f"not a formula: {f!r}")


def atom_true(f: Formula) -> bool:
    """Membership of a closed, set-variable-free atom in the atomic diagram."""
    if not is_atom(f) or isinstance(f, (Member, NotMember)) or free_num_vars(f):
        return False
    verdict = eval_closed(f, 1)
    return verdict is Verdict.TRUE


# --- progressiveness and transfinite induction ------------------------------------


def prog_formula(spec: OrderingSpec, var: str = "X") -> Formula:
    """Tait normal form of: X is progressive along the ordering."""
    x, y = Var("x"), Var("y")
    hyp_fails = Disj(
        NotFieldMember(spec, x),
        Exists("y", Conj(OrdLess(spec, y, x), NotMember(y, var))),
    )
    return ForAll("x", Disj(hyp_fails, Member(x, var)))


def field_statement(spec: OrderingSpec, var: str = "X") -> Formula:
    y = Var("y")
    return ForAll("y", Disj(NotFieldMember(spec, y), Member(y, var)))


def ti_sequent(spec: OrderingSpec, var: str = "X") -> Sequent:
    return seq(negate(prog_formula(spec, var)), field_statement(spec, var))


def prog_witness_instance(spec: OrderingSpec, n: int, var: str = "X") -> Formula:
    """The instance picked when refuting progressiveness at element n."""
    body = negate(prog_formula(spec, var)).body
    return subst_num(body, "x", n)


# --- S-expression format -------------------------------------------------------------


def term_to_sexp(t: Term):
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Plus):
        return ["+", term_to_sexp(t.left), term_to_sexp(t.right)]
    if isinstance(t, Times):
        return ["*", term_to_sexp(t.left), term_to_sexp(t.right)]
    raise FormulaError(f"not a term: {t!r}")


def term_from_sexp(x) -> Term:
    if isinstance(x, int):
        if x < 0:
            raise FormulaError("numerals are non-negative")
        return Num(x)
    if isinstance(x, str):
        return Var(x)
    if isinstance(x, list) and len(x) == 3 and x[0] in ("+", "*"):
        ctor = Plus if x[0] == "+" else Times
        return ctor(term_from_sexp(x[1]), term_from_sexp(x[2]))
    raise FormulaError(f"not a term: {x!r}")


def formula_to_sexp(f: Formula):
    if isinstance(f, Eq):
        return ["=", term_to_sexp(f.left), term_to_sexp(f.right)]
    if isinstance(f, Neq):
        return ["!=", term_to_sexp(f.left), term_to_sexp(f.right)]
    if isinstance(f, Member):
        return ["in", term_to_sexp(f.term), f.var]
    if isinstance(f, NotMember):
        return ["nin", term_to_sexp(f.term), f.var]
    if isinstance(f, OrdLess):
        return ["lt", spec_to_sexp(f.spec), term_to_sexp(f.left), term_to_sexp(f.right)]
    if isinstance(f, NotOrdLess):
        return ["nlt", spec_to_sexp(f.spec), term_to_sexp(f.left), term_to_sexp(f.right)]
    if isinstance(f, FieldMember):
        return ["fld", spec_to_sexp(f.spec), term_to_sexp(f.term)]
    if isinstance(f, NotFieldMember):
        return ["nfld", spec_to_sexp(f.spec), term_to_sexp(f.term)]
    if isinstance(f, SegMember):
        return ["seg", spec_to_sexp(f.spec), term_to_sexp(f.term), Str(ord_text(f.bound))]
    if isinstance(f, NotSegMember):
        return ["nseg", spec_to_sexp(f.spec), term_to_sexp(f.term), Str(ord_text(f.bound))]
    if isinstance(f, Conj):
        return ["and", formula_to_sexp(f.left), formula_to_sexp(f.right)]
    if isinstance(f, Disj):
        return ["or", formula_to_sexp(f.left), formula_to_sexp(f.right)]
    if isinstance(f, ForAll):
        return ["forall", f.var, formula_to_sexp(f.body)]
    if isinstance(f, Exists):
        return ["exists", f.var, formula_to_sexp(f.body)]
    raise FormulaError(f"not a formula: {f!r}")


def formula_from_sexp(x) -> Formula:
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise FormulaError(f"not a formula: {x!r}")
    head, rest = x[0], x[1:]
    if head in ("=", "!=") and len(rest) == 2:
        ctor = Eq if head == "=" else Neq
        return ctor(term_from_sexp(rest[0]), term_from_sexp(rest[1]))
    if head in ("in", "nin") and len(rest) == 2 and isinstance(rest[1], str):
        ctor = Member if head == "in" else NotMember
        return ctor(term_from_sexp(rest[0]), rest[1])
    if head in ("lt", "nlt") and len(rest) == 3:
        ctor = OrdLess if head == "lt" else NotOrdLess
        return ctor(spec_from_sexp(rest[0]), term_from_sexp(rest[1]), term_from_sexp(rest[2]))
    if head in ("fld", "nfld") and len(rest) == 2:
        ctor = FieldMember if head == "fld" else NotFieldMember
        return ctor(spec_from_sexp(rest[0]), term_from_sexp(rest[1]))
    if head in ("seg", "nseg") and len(rest) == 3 and isinstance(rest[2], Str):
        ctor = SegMember if head == "seg" else NotSegMember
        return ctor(spec_from_sexp(rest[0]), term_from_sexp(rest[1]), ord_parse(rest[2].value))
    if head in ("and", "or") and len(rest) == 2:
        ctor = Conj if head == "and" else Disj
        return ctor(formula_from_sexp(rest[0]), formula_from_sexp(rest[1]))
    if head in ("forall", "exists") and len(rest) == 2 and isinstance(rest[0], str):
        ctor = ForAll if head == "forall" else Exists
        return ctor(rest[0], formula_from_sexp(rest[1]))
    raise FormulaError(f"not a formula: {x!r}")


def sequent_to_sexp(delta: Sequent):
    parts = sorted((formula_to_sexp(f) for f in delta), key=sexpr.dump)
    return ["seq"] + parts


def sequent_from_sexp(x) -> Sequent:
    if not isinstance(x, list) or not x or x[0] != "seq":
        raise FormulaError(f"not a sequent: {x!r}")
    return frozenset(formula_from_sexp(f) for f in x[1:])


def formula_text(f: Formula) -> str:
    return sexpr.dump(formula_to_sexp(f))


def parse_formula(s: str) -> Formula:
    return formula_from_sexp(sexpr.parse(s))


def sequent_text(delta: Sequent) -> str:
    return sexpr.dump(sequent_to_sexp(delta))


def parse_sequent(s: str) -> Sequent:
    return sequent_from_sexp(sexpr.parse(s))
