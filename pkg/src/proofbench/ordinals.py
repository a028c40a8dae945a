"""Ordinal notations below epsilon_0 * omega in hereditary Cantor normal form.

A notation is a formal sum  E*k + w^e1*c1 + ... + w^em*cm  where E is a
distinguished atom denoting epsilon_0, the exponents e_i are themselves
notations that are hereditarily E-free (so canonicity is purely structural),
exponents strictly decrease left to right, and all coefficients are >= 1.
The empty sum is 0.  Every representable value is below epsilon_0 * omega,
which leaves room for values such as E+1 produced by the bound machinery.

Text grammar (round-trips exactly on canonical forms):

    notation  = "0" | term ("+" term)*
    term      = nat | eterm | wterm
    eterm     = "E" ["*" coeff]
    wterm     = "w" ["^" exp] ["*" coeff]
    exp       = nat | "w" | "(" notation ")"     -- nat >= 2 bare
    coeff     = nat >= 2                          -- coefficient 1 is implicit

Examples: ``w^2*3+w+5``, ``E+1``, ``w^(w+1)*2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class NotationError(ValueError):
    """Malformed or non-canonical notation."""


class CapExceededError(ArithmeticError):
    """Operation result would reach or exceed epsilon_0 * omega."""


class Cmp(Enum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Ordinal:
    """Canonical notation: E-coefficient plus descending w-power terms.

    ``wterms`` is a tuple of (exponent, coefficient) pairs; the finite part,
    if any, is the trailing pair with exponent ZERO.
    """

    eterm: int
    wterms: tuple[tuple["Ordinal", int], ...]

    def __post_init__(self):
        if self.eterm < 0:
            raise NotationError("negative E coefficient")
        prev = None
        for exp, coeff in self.wterms:
            if coeff < 1:
                raise NotationError("coefficient below 1")
            if exp.eterm != 0:
                raise NotationError("E may not appear in an exponent")
            if prev is not None and compare(prev, exp) is not Cmp.GT:
                raise NotationError("exponents must strictly decrease")
            prev = exp

    def is_zero(self) -> bool:
        return self.eterm == 0 and not self.wterms

    def is_finite(self) -> bool:
        if self.eterm:
            return False
        return not self.wterms or (len(self.wterms) == 1 and self.wterms[0][0].is_zero())

    def nat_value(self) -> int:
        if not self.is_finite():
            raise NotationError("not a finite notation")
        return self.wterms[0][1] if self.wterms else 0

    def __str__(self) -> str:
        return text(self)

    def __repr__(self) -> str:
        return f"Ordinal({text(self)!r})"


ZERO = Ordinal(0, ())
ONE = Ordinal(0, ((ZERO, 1),))
TWO = Ordinal(0, ((ZERO, 2),))
OMEGA = Ordinal(0, ((ONE, 1),))
EPSILON = Ordinal(1, ())


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise NotationError("ordinals are non-negative")
    return ZERO if n == 0 else Ordinal(0, ((ZERO, n),))


def compare(a: Ordinal, b: Ordinal) -> Cmp:
    """Order of the denoted ordinals; total on canonical notations."""
    if a.eterm != b.eterm:
        return Cmp.LT if a.eterm < b.eterm else Cmp.GT
    for (ea, ca), (eb, cb) in zip(a.wterms, b.wterms):
        c = compare(ea, eb)
        if c is not Cmp.EQ:
            return c
        if ca != cb:
            return Cmp.LT if ca < cb else Cmp.GT
    if len(a.wterms) != len(b.wterms):
        return Cmp.LT if len(a.wterms) < len(b.wterms) else Cmp.GT
    return Cmp.EQ


def lt(a: Ordinal, b: Ordinal) -> bool:
    return compare(a, b) is Cmp.LT


def le(a: Ordinal, b: Ordinal) -> bool:
    return compare(a, b) is not Cmp.GT


def max_ord(a: Ordinal, b: Ordinal) -> Ordinal:
    return b if lt(a, b) else a


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal addition (left summand partially absorbed at limits)."""
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    if b.eterm:
        return Ordinal(a.eterm + b.eterm, b.wterms)
    lead, lead_coeff = b.wterms[0]
    kept = []
    merged = False
    for exp, coeff in a.wterms:
        c = compare(exp, lead)
        if c is Cmp.GT:
            kept.append((exp, coeff))
        elif c is Cmp.EQ:
            kept.append((exp, coeff + lead_coeff))
            merged = True
            break
        else:
            break
    rest = b.wterms[1:] if merged else b.wterms
    return Ordinal(a.eterm, tuple(kept) + rest)


def succ(a: Ordinal) -> Ordinal:
    return add(a, ONE)


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal multiplication a*b (b copies of a), left-distributed over b."""
    if a.is_zero() or b.is_zero():
        return ZERO
    acc = ZERO
    if b.eterm:
        if a.eterm:
            raise CapExceededError("E * E exceeds the notation cap")
        acc = Ordinal(b.eterm, ())
    for exp, coeff in b.wterms:
        if exp.is_zero():
            if a.eterm:
                part = Ordinal(a.eterm * coeff, a.wterms)
            else:
                lead, lead_coeff = a.wterms[0]
                part = Ordinal(0, ((lead, lead_coeff * coeff),) + a.wterms[1:])
        else:
            if a.eterm:
                raise CapExceededError("E * w^e exceeds the notation cap")
            lead = a.wterms[0][0]
            part = Ordinal(0, ((add(lead, exp), coeff),))
        acc = add(acc, part)
    return acc


def _left_pred(e: Ordinal) -> Ordinal:
    # the f with 1 + f = e, defined for e >= 1
    if e.is_finite():
        return from_int(e.nat_value() - 1)
    return e


def pow2(a: Ordinal) -> Ordinal:
    """2^a for a <= epsilon_0, via a = w*q + n  ==>  2^a = w^q * 2^n."""
    if a.eterm:
        if a == EPSILON:
            return EPSILON
        raise CapExceededError("pow2 argument above epsilon_0")
    n = 0
    limit_terms = []
    for exp, coeff in a.wterms:
        if exp.is_zero():
            n = coeff
        else:
            limit_terms.append((_left_pred(exp), coeff))
    if not limit_terms:
        return from_int(2**n)
    q = Ordinal(0, tuple(limit_terms))
    return Ordinal(0, ((q, 2**n),))


# --- text form -------------------------------------------------------------


def _exp_text(e: Ordinal) -> str:
    if e.is_finite():
        return str(e.nat_value())
    if e == OMEGA:
        return "w"
    return f"({text(e)})"


def text(a: Ordinal) -> str:
    """Canonical text; parse(text(a)) == a."""
    if a.is_zero():
        return "0"
    parts = []
    if a.eterm:
        parts.append("E" if a.eterm == 1 else f"E*{a.eterm}")
    for exp, coeff in a.wterms:
        if exp.is_zero():
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        else:
            base = f"w^{_exp_text(exp)}"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)


class _Reader:
    def __init__(self, s: str):
        self.s = s
        self.i = 0

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self) -> str:
        c = self.peek()
        self.i += 1
        return c

    def expect(self, c: str):
        if self.take() != c:
            raise NotationError(f"expected {c!r} at position {self.i} in {self.s!r}")

    def nat(self) -> int:
        start = self.i
        while self.peek().isdigit():
            self.i += 1
        if start == self.i:
            raise NotationError(f"expected a number at position {start} in {self.s!r}")
        word = self.s[start : self.i]
        if word[0] == "0" and len(word) > 1:
            raise NotationError(f"leading zero in {word!r}")
        return int(word)

    def coeff(self) -> int:
        if self.peek() != "*":
            return 1
        self.take()
        c = self.nat()
        if c < 2:
            raise NotationError("explicit coefficient must be >= 2")
        return c

    def exponent(self) -> Ordinal:
        c = self.peek()
        if c == "(":
            self.take()
            e = self.sum()
            self.expect(")")
            if e.is_finite() or e == OMEGA:
                raise NotationError("redundant parentheses in exponent")
            return e
        if c == "w":
            self.take()
            return OMEGA
        n = self.nat()
        if n < 2:
            raise NotationError("exponent 0/1 must be written implicitly")
        return from_int(n)

    def term(self):
        c = self.peek()
        if c == "E":
            self.take()
            return ("E", None, self.coeff())
        if c == "w":
            self.take()
            if self.peek() == "^":
                self.take()
                exp = self.exponent()
            else:
                exp = ONE
            return ("w", exp, self.coeff())
        n = self.nat()
        return ("n", None, n)

    def sum(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.take()
            terms.append(self.term())
        if len(terms) == 1 and terms[0] == ("n", None, 0):
            return ZERO
        eterm = 0
        wterms: list[tuple[Ordinal, int]] = []
        for pos, (kind, exp, coeff) in enumerate(terms):
            if kind == "E":
                if pos != 0:
                    raise NotationError("E term must come first")
                eterm = coeff
            elif kind == "w":
                wterms.append((exp, coeff))
            else:
                if coeff == 0:
                    raise NotationError("zero term in a sum")
                wterms.append((ZERO, coeff))
        return Ordinal(eterm, tuple(wterms))


@lru_cache(maxsize=65536)
def parse(s: str) -> Ordinal:
    """Strict parse; rejects anything print would not emit."""
    r = _Reader(s)
    value = r.sum()
    if r.i != len(s):
        raise NotationError(f"trailing input at position {r.i} in {s!r}")
    return value
