"""Brute-force reference arithmetic for notations below w^3.

Everything here works on plain integer-exponent term lists (or coefficient
vectors) and never touches the production notation type, so it can serve as
an independent oracle: results are rendered to text and only then compared
against what the main system produces.

pow2 is computed by the defining transfinite recursion (successor: double,
limit: supremum along the canonical fundamental sequence) rather than by any
closed form.
"""

from __future__ import annotations

from functools import lru_cache

# a term list is a tuple of (exponent, coefficient), exponents descending,
# coefficients >= 1; () is zero.  Exponents are plain ints (degree < 5 here).

Terms = tuple[tuple[int, int], ...]


def vec_terms(c2: int, c1: int, c0: int) -> Terms:
    out = []
    for e, c in ((2, c2), (1, c1), (0, c0)):
        if c:
            out.append((e, c))
    return tuple(out)


def enumerate_below_w3(max_coeff: int):
    """All CNF vectors below w^3 with coefficients <= max_coeff."""
    rng = range(max_coeff + 1)
    return [(c2, c1, c0) for c2 in rng for c1 in rng for c0 in rng]


def cmp_terms(a: Terms, b: Terms) -> int:
    for (ea, ca), (eb, cb) in zip(a, b):
        if ea != eb:
            return -1 if ea < eb else 1
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    return 0


def add_terms(a: Terms, b: Terms) -> Terms:
    """Concatenate then normalize."""
    if not b:
        return a
    lead, lead_coeff = b[0]
    kept = []
    merged = False
    for e, c in a:
        if e > lead:
            kept.append((e, c))
        elif e == lead:
            kept.append((e, c + lead_coeff))
            merged = True
            break
        else:
            break
    rest = b[1:] if merged else b
    return tuple(kept) + rest


def mul_terms(a: Terms, b: Terms) -> Terms:
    if not a or not b:
        return ()
    acc: Terms = ()
    lead, lead_coeff = a[0]
    for e, c in b:
        if e == 0:
            part = ((lead, lead_coeff * c),) + a[1:]
        else:
            part = ((lead + e, c),)
        acc = add_terms(acc, part)
    return acc


def terms_text(ts: Terms) -> str:
    """Canonical grammar text for an integer-exponent term list."""
    if not ts:
        return "0"
    parts = []
    for e, c in ts:
        if e == 0:
            parts.append(str(c))
        else:
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


@lru_cache(maxsize=None)
def pow2_vec(a: int, b: int, c: int) -> tuple[int, int, int]:
    """2^(w^2*a + w*b + c) as (A, B, C) meaning w^(w*A+B) * 2^C.

    successor: double (bump C); limit: supremum along the fundamental
    sequence, using sup_n w^e*2^n = w^(e+1) and sup_n w^(e+n) = w^(e+w).
    """
    if a == 0 and b == 0 and c == 0:
        return (0, 0, 0)
    if c > 0:
        A, B, C = pow2_vec(a, b, c - 1)
        return (A, B, C + 1)
    if b > 0:
        # sup_n 2^(w^2*a + w*(b-1) + n) = sup_n w^(w*a+b-1) * 2^n
        A, B, _ = pow2_vec(a, b - 1, 0)
        return (A, B + 1, 0)
    # sup_n 2^(w^2*(a-1) + w*n) = sup_n w^(w*(a-1)+n) = w^(w*(a-1)+w) = w^(w*a)
    return (a, 0, 0)


def pow2_vec_text(a: int, b: int, c: int) -> str:
    """Canonical text of 2^(w^2*a + w*b + c)."""
    A, B, C = pow2_vec(a, b, c)
    coeff = 2**C
    if A == 0 and B == 0:
        return str(coeff)
    if A == 0:
        base = "w" if B == 1 else f"w^{B}"
    else:
        inner_parts = []
        inner_parts.append("w" if A == 1 else f"w*{A}")
        if B:
            inner_parts.append(str(B))
        inner = "+".join(inner_parts)
        base = "w^w" if inner == "w" else f"w^({inner})"
    return base if coeff == 1 else f"{base}*{coeff}"
