"""Exact sparse multivariate polynomials over Q or F_p.

A polynomial is a canonical term map: dict from exponent tuple to nonzero
coefficient. Exponent tuples are dense (one slot per ring variable), which
keeps monomial arithmetic at tuple speed for the ring sizes that occur here
(up to a few dozen variables). The zero polynomial is the empty map.

Printing and parsing share one text grammar:

  poly   := ['+'|'-'] term (('+'|'-') term)*
  term   := coeff | coeff '*' powers | powers
  powers := name ['^' int] ('*' name ['^' int])*
  coeff  := int | int '/' int
  name   := [A-Za-z][A-Za-z0-9_]*

Whitespace is insignificant. parse(format(f)) == f for every polynomial.
Terms print in descending graded reverse lexicographic order, so output is
deterministic.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import (
    DuplicateVariable,
    ParseError,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)
from .fields import QQ, field_from_name, field_name

Monomial = tuple  # dense exponent vector, one entry per ring variable


def m_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def m_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b entrywise."""
    return all(x <= y for x, y in zip(a, b))


def m_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def m_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def m_deg(a: Monomial) -> int:
    return sum(a)


def grevlex_key(a: Monomial):
    """Sort key realizing graded reverse lex: higher key = larger monomial."""
    return (sum(a),) + tuple(-e for e in reversed(a))


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|([-+*/^()]))")


class Ring:
    """A polynomial ring: a coefficient field plus an ordered variable list.

    Rings compare by value (same field, same names in the same order), so
    independently constructed rings interoperate.
    """

    __slots__ = ("field", "names", "index", "_zero_mono")

    def __init__(self, names: Iterable[str], field=QQ):
        names = tuple(names)
        seen = set()
        for n in names:
            if not _NAME_RE.match(n):
                raise ParseError(f"bad variable name {n!r}")
            if n in seen:
                raise DuplicateVariable(f"variable {n!r} declared twice")
            seen.add(n)
        self.field = field
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self._zero_mono = (0,) * len(names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value) -> "Polynomial":
        c = self.field.of(value)
        if c == self.field.zero:
            return Polynomial(self, {})
        return Polynomial(self, {self._zero_mono: c})

    def var(self, name: str) -> "Polynomial":
        i = self.index.get(name)
        if i is None:
            raise UnknownVariable(f"{name!r} is not a variable of {self!r}")
        mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return Polynomial(self, {mono: self.field.one})

    def vars(self) -> tuple:
        return tuple(self.var(n) for n in self.names)

    def monomial(self, exps: Monomial, coeff=1) -> "Polynomial":
        if len(exps) != len(self.names):
            raise RingMismatch("exponent vector has wrong length")
        c = self.field.of(coeff)
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, {tuple(exps): c})

    def extend(self, extra_names: Iterable[str], front: bool = False) -> "Ring":
        """A ring with extra variables appended (or prepended with front=True)."""
        extra = tuple(extra_names)
        names = extra + self.names if front else self.names + extra
        return Ring(names, self.field)

    def parse(self, text: str) -> "Polynomial":
        return _parse(self, text)

    def to_json(self) -> dict:
        return {"field": field_name(self.field), "vars": list(self.names)}

    @classmethod
    def from_json(cls, data: dict) -> "Ring":
        return cls(data["vars"], field_from_name(data["field"]))

    def __eq__(self, other):
        return (
            self is other
            or (isinstance(other, Ring) and self.field == other.field and self.names == other.names)
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        shown = ",".join(self.names[:6]) + (",..." if len(self.names) > 6 else "")
        return f"Ring({self.field!r}; {shown})"


def ring(names: Iterable[str], field=QQ) -> Ring:
    """Build a polynomial ring. Accepts a list of names or one spaced string."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return Ring(names, field)


class Polynomial:
    """Immutable-by-convention sparse polynomial attached to a Ring."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        # Invariant: no zero coefficients stored. Constructors that cannot
        # guarantee it must pass through _normalized.
        self.ring = ring
        self.terms = terms
        self._hash = None

    @staticmethod
    def _normalized(ring: Ring, terms: dict) -> "Polynomial":
        zero = ring.field.zero
        return Polynomial(ring, {m: c for m, c in terms.items() if c != zero})

    # -- predicates and views -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_mono in self.terms)

    def is_one(self) -> bool:
        return self.terms.get(self.ring._zero_mono) == self.ring.field.one and len(self.terms) == 1

    def constant_coefficient(self):
        return self.terms.get(self.ring._zero_mono, self.ring.field.zero)

    def num_terms(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        i = self._var_index(name)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def variables(self) -> tuple:
        """Names actually occurring, in ring order."""
        used = [False] * self.ring.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(n for i, n in enumerate(self.ring.names) if used[i])

    def is_homogeneous(self, in_vars=None) -> bool:
        """Homogeneous in total degree, or in the degree restricted to
        in_vars (an iterable of names) when given. Zero counts as homogeneous."""
        if not self.terms:
            return True
        if in_vars is None:
            degs = {sum(m) for m in self.terms}
        else:
            idx = [self._var_index(n) for n in in_vars]
            degs = {sum(m[i] for i in idx) for m in self.terms}
        return len(degs) == 1

    def order_at(self, in_vars) -> int:
        """Vanishing order along the subspace {v = 0 for v in in_vars}:
        the minimum over terms of the degree in those variables."""
        if not self.terms:
            raise ZeroPolynomial("order_at is undefined for 0")
        if isinstance(in_vars, str):
            in_vars = (in_vars,)
        idx = [self._var_index(n) for n in in_vars]
        return min(sum(m[i] for i in idx) for m in self.terms)

    def factor_out(self, name: str):
        """Write self = v^k * g with k maximal; returns (k, g)."""
        if not self.terms:
            raise ZeroPolynomial("factor_out is undefined for 0")
        i = self._var_index(name)
        k = min(m[i] for m in self.terms)
        if k == 0:
            return 0, self
        terms = {m[:i] + (m[i] - k,) + m[i + 1:]: c for m, c in self.terms.items()}
        return k, Polynomial(self.ring, terms)

    def _var_index(self, name: str) -> int:
        i = self.ring.index.get(name)
        if i is None:
            raise UnknownVariable(f"{name!r} is not a variable of {self.ring!r}")
        return i

    # -- arithmetic -----------------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check_ring(other)
            return other
        try:
            return self.ring.const(other)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        zero = self.ring.field.zero
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, zero) + c if self.ring.field.char == 0 else (terms.get(m, 0) + c) % self.ring.field.char
            if s == zero:
                terms.pop(m, None)
            else:
                terms[m] = s
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        field = self.ring.field
        zero = field.zero
        terms: dict = {}
        small, large = (self.terms, other.terms) if len(self.terms) <= len(other.terms) else (other.terms, self.terms)
        large_items = list(large.items())
        char = field.char
        for m1, c1 in small.items():
            for m2, c2 in large_items:
                m = tuple(x + y for x, y in zip(m1, m2))
                prod = c1 * c2 if char == 0 else (c1 * c2) % char
                s = terms.get(m, zero) + prod if char == 0 else (terms.get(m, 0) + prod) % char
                if s == zero:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring.field.of(c)
        if c == self.ring.field.zero:
            return self.ring.zero()
        mul = self.ring.field.mul
        return Polynomial(self.ring, {m: mul(coeff, c) for m, coeff in self.terms.items()})

    def substitute(self, sub: "Substitution") -> "Polynomial":
        return sub(self)

    # -- ordering-aware views -------------------------------------------------

    def sorted_terms(self, key=grevlex_key) -> list:
        """Terms as (monomial, coeff), descending under the given order key."""
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def leading(self, key=grevlex_key):
        """(monomial, coeff) of the leading term under the given order key."""
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no leading term")
        m = max(self.terms, key=key)
        return m, self.terms[m]

    # -- text -----------------------------------------------------------------

    def format(self) -> str:
        if not self.terms:
            return "0"
        field = self.ring.field
        names = self.ring.names
        pieces = []
        for mono, coeff in self.sorted_terms():
            if field.char == 0:
                negative = coeff < 0
                mag = -coeff if negative else coeff
                coeff_text = str(mag)
            else:
                negative = False
                coeff_text = str(coeff)
            factors = [
                (f"{names[i]}^{e}" if e > 1 else names[i])
                for i, e in enumerate(mono)
                if e
            ]
            if not factors:
                body = coeff_text
            elif coeff_text == "1":
                body = "*".join(factors)
            else:
                body = coeff_text + "*" + "*".join(factors)
            if not pieces:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append(("- " if negative else "+ ") + body)
        return " ".join(pieces)

    __str__ = format

    def __repr__(self):
        return f"<poly {self.format()}>"

    # -- identity -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if self.ring is not other.ring and self.ring != other.ring:
                return False
            return self.terms == other.terms
        if isinstance(other, (int,)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)


class Substitution:
    """A ring homomorphism given by images of the source variables.

    Every source variable needs an image in the target ring; names omitted
    from `images` default to the same-named target variable when one exists.
    """

    __slots__ = ("source", "target", "images", "_image_list")

    def __init__(self, source: Ring, target: Ring, images: dict):
        self.source = source
        self.target = target
        resolved = {}
        for name, img in images.items():
            if name not in source.index:
                raise UnknownVariable(f"{name!r} is not a variable of the source ring")
            if isinstance(img, str):
                img = target.parse(img)
            if img.ring != target:
                raise RingMismatch(f"image of {name!r} lives in the wrong ring")
            resolved[name] = img
        for name in source.names:
            if name not in resolved:
                if name not in target.index:
                    raise UnknownVariable(
                        f"no image for {name!r} and the target ring has no variable of that name"
                    )
                resolved[name] = target.var(name)
        self.images = resolved
        self._image_list = [resolved[n] for n in source.names]

    def __call__(self, f: Polynomial) -> Polynomial:
        if f.ring != self.source:
            raise RingMismatch("polynomial is not in the source ring")
        target = self.target
        result = target.zero()
        power_cache: dict = {}
        for mono, coeff in f.terms.items():
            term = target.const(coeff)
            for i, e in enumerate(mono):
                if not e:
                    continue
                key = (i, e)
                powed = power_cache.get(key)
                if powed is None:
                    powed = self._image_list[i] ** e
                    power_cache[key] = powed
                term = term * powed
            result = result + term
        return result

    def then(self, later: "Substitution") -> "Substitution":
        """Composition: first self, then later."""
        if self.target != later.source:
            raise RingMismatch("substitutions do not compose")
        images = {n: later(self.images[n]) for n in self.source.names}
        return Substitution(self.source, later.target, images)

    def to_json(self) -> dict:
        return {n: self.images[n].format() for n in self.source.names}

    def __repr__(self):
        return f"<substitution {len(self.source.names)} vars -> {self.target!r}>"


def embed(f: Polynomial, target: Ring) -> Polynomial:
    """Reinterpret f in a ring containing all its variables (by name)."""
    if f.ring == target:
        return f
    positions = []
    for n in f.ring.names:
        j = target.index.get(n)
        if j is None:
            # Only names actually used by f matter.
            positions.append(None)
        else:
            positions.append(j)
    width = target.nvars
    terms = {}
    for mono, coeff in f.terms.items():
        out = [0] * width
        for i, e in enumerate(mono):
            if not e:
                continue
            j = positions[i]
            if j is None:
                raise UnknownVariable(
                    f"{f.ring.names[i]!r} does not exist in the target ring"
                )
            out[j] = e
        terms[tuple(out)] = target.field.of(coeff)
    return Polynomial._normalized(target, terms)


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient f/g when g divides f exactly; ValueError otherwise.

    Single-divisor reduction decides divisibility: if f = q*g then the
    leading term of g divides the leading term of f under any monomial
    order, and peeling it preserves divisibility.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f._check_ring(g)
    ring_ = f.ring
    field = ring_.field
    glm, glc = g.leading()
    g_items = list(g.terms.items())
    quotient: dict = {}
    rest = dict(f.terms)
    zero = field.zero
    while rest:
        m = max(rest, key=grevlex_key)
        c = rest[m]
        if not m_divides(glm, m):
            raise ValueError("not an exact multiple")
        qm = m_div(m, glm)
        qc = field.div(c, glc)
        quotient[qm] = qc
        for gm, gc in g_items:
            tm = m_mul(gm, qm)
            s = field.sub(rest.get(tm, zero), field.mul(gc, qc))
            if s == zero:
                rest.pop(tm, None)
            else:
                rest[tm] = s
    return Polynomial(ring_, quotient)


# -- parsing ------------------------------------------------------------------


def _tokenize(text: str):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r} at offset {pos}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", op))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


def _parse(ring_: Ring, text: str) -> Polynomial:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind, value=None):
        nonlocal pos
        tk, tv = tokens[pos]
        if tk != kind or (value is not None and tv != value):
            raise ParseError(f"expected {value or kind} near token {pos} in {text!r}")
        pos += 1
        return tv

    def parse_factor():
        """name['^'int] or a bare number; returns a Polynomial."""
        tk, tv = peek()
        if tk == "num":
            take("num")
            value = tv
            if peek() == ("op", "/"):
                take("op", "/")
                den = take("num")
                if den == 0:
                    raise ParseError("zero denominator")
                if ring_.field.char == 0:
                    return ring_.const(ring_.field.of(value) / den)
                return ring_.const(ring_.field.div(ring_.field.of(value), ring_.field.of(den)))
            if peek() == ("op", "^"):
                take("op", "^")
                e = take("num")
                return ring_.const(value ** e)
            return ring_.const(value)
        if tk == "name":
            take("name")
            if tv not in ring_.index:
                raise UnknownVariable(f"{tv!r} is not a variable of {ring_!r}")
            v = ring_.var(tv)
            if peek() == ("op", "^"):
                take("op", "^")
                e = take("num")
                return v ** e
            return v
        raise ParseError(f"expected a coefficient or variable near token {pos} in {text!r}")

    def parse_term():
        f = parse_factor()
        while peek() == ("op", "*"):
            take("op", "*")
            f = f * parse_factor()
        return f

    result = ring_.zero()
    sign = 1
    tk, tv = peek()
    if tk == "op" and tv in "+-":
        sign = -1 if tv == "-" else 1
        take("op")
    while True:
        term = parse_term()
        result = result + (term if sign == 1 else -term)
        tk, tv = peek()
        if tk == "end":
            break
        if tk == "op" and tv in "+-":
            sign = -1 if tv == "-" else 1
            take("op")
        else:
            raise ParseError(f"expected + or - near token {pos} in {text!r}")
    return result
