"""Buchberger engine: monomial orders, normal forms, reduced bases.

The engine is deterministic end to end: generators are seeded in a sorted
order, pair selection breaks ties by insertion age, and the returned basis
is reduced, monic, and sorted. Resource caps (basis size, working term
count) raise ResourceLimit; they never produce a wrong answer.

Pair bookkeeping follows the classic Gebauer-Moeller update (chain and
coprimality criteria, plus pruning of old pairs whose lcm strictly contains
the new leading monomial). Selection is the sugar strategy by default, with
the plain normal strategy (smallest lcm) available.
"""

from __future__ import annotations

import heapq
import os
from typing import Iterable

from .errors import ResourceLimit, RingMismatch
from .rings import Polynomial, Ring, m_div, m_divides, m_lcm, m_mul

DEFAULT_MAX_BASIS = 2000
DEFAULT_MAX_TERMS = int(os.environ.get("DETSING_MAX_TERMS", 200_000))


def _term_cap(max_terms):
    """Resolve the effective term cap: explicit argument, else the module
    default (which honors the DETSING_MAX_TERMS environment override)."""
    return DEFAULT_MAX_TERMS if max_terms is None else max_terms


class MonomialOrder:
    """A total order on exponent tuples given by a flat integer sort key.

    key(m) ascends with the order; heap_key is its negation (for min-heaps
    that must pop the largest monomial first).
    """

    __slots__ = ("spec", "key")

    def __init__(self, spec: tuple, key):
        self.spec = spec
        self.key = key

    def heap_key(self, m):
        return tuple(-x for x in self.key(m))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"MonomialOrder{self.spec!r}"


def grevlex_order(ring_: Ring) -> MonomialOrder:
    def key(m):
        return (sum(m),) + tuple(-e for e in reversed(m))

    return MonomialOrder(("grevlex", ring_.nvars), key)


def lex_order(ring_: Ring) -> MonomialOrder:
    return MonomialOrder(("lex", ring_.nvars), tuple)


def elimination_order(ring_: Ring, front_names: Iterable[str]) -> MonomialOrder:
    """Block order eliminating front_names: grevlex on the front block,
    ties broken by grevlex on the rest. Any basis element free of the front
    block then generates the elimination ideal."""
    front = tuple(ring_.index[n] for n in front_names)
    front_set = set(front)
    back = tuple(i for i in range(ring_.nvars) if i not in front_set)

    def key(m):
        head = (sum(m[i] for i in front),) + tuple(-m[i] for i in reversed(front))
        tail = (sum(m[i] for i in back),) + tuple(-m[i] for i in reversed(back))
        return head + tail

    return MonomialOrder(("elim", ring_.nvars, front), key)


class _Gen:
    """A basis element: term dict plus cached leading data and sugar."""

    __slots__ = ("terms", "lm", "lc", "sugar", "age")

    def __init__(self, terms: dict, order: MonomialOrder, sugar: int, age: int):
        self.terms = terms
        self.lm = max(terms, key=order.key)
        self.lc = terms[self.lm]
        self.sugar = sugar
        self.age = age


def _reduce_terms(terms: dict, basis: list, order: MonomialOrder, field, max_terms: int) -> dict:
    """Full normal form of a term dict against the live basis elements.

    Lazy max-heap over candidate monomials; every monomial introduced by a
    reduction step is strictly smaller than the one just cancelled, so each
    monomial is settled exactly once.
    """
    if not terms:
        return {}
    work = dict(terms)
    heap = [(order.heap_key(m), m) for m in work]
    heapq.heapify(heap)
    remainder: dict = {}
    zero = field.zero
    sub, mul, div = field.sub, field.mul, field.div
    while heap:
        _, m = heapq.heappop(heap)
        c = work.get(m)
        if c is None:
            continue
        reducer = None
        for g in basis:
            if g is not None and m_divides(g.lm, m):
                reducer = g
                break
        if reducer is None:
            remainder[m] = c
            del work[m]
            continue
        shift = m_div(m, reducer.lm)
        coef = div(c, reducer.lc)
        for gm, gc in reducer.terms.items():
            tm = m_mul(gm, shift)
            cur = work.get(tm)
            if cur is None:
                val = field.neg(mul(gc, coef))
                if val != zero:
                    work[tm] = val
                    heapq.heappush(heap, (order.heap_key(tm), tm))
            else:
                val = sub(cur, mul(gc, coef))
                if val == zero:
                    del work[tm]
                else:
                    work[tm] = val
        if len(work) + len(remainder) > max_terms:
            raise ResourceLimit(
                f"normal form exceeded the term cap ({max_terms}); "
                "raise max_terms (DETSING_MAX_TERMS) to continue",
                term_count=len(work) + len(remainder),
            )
    return remainder


def _spoly_terms(g1: _Gen, g2: _Gen, field) -> tuple:
    """Term dict of the S-polynomial, and its sugar degree."""
    lcm = m_lcm(g1.lm, g2.lm)
    s1 = m_div(lcm, g1.lm)
    s2 = m_div(lcm, g2.lm)
    mul, div, sub = field.mul, field.div, field.sub
    zero = field.zero
    inv1 = field.inv(g1.lc)
    inv2 = field.inv(g2.lc)
    terms: dict = {}
    for m, c in g1.terms.items():
        terms[m_mul(m, s1)] = mul(c, inv1)
    for m, c in g2.terms.items():
        tm = m_mul(m, s2)
        val = sub(terms.get(tm, zero), mul(c, inv2))
        if val == zero:
            terms.pop(tm, None)
        else:
            terms[tm] = val
    sugar = max(g1.sugar + sum(s1), g2.sugar + sum(s2))
    return terms, sugar


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _PairQueue:
    """Pending S-pairs with sugar or normal selection, deterministic ties."""

    def __init__(self, order: MonomialOrder, select: str):
        if select not in ("sugar", "normal"):
            raise ValueError(f"unknown selection strategy {select!r}")
        self.order = order
        self.select = select
        self.heap: list = []

    def priority(self, lcm, sugar, g1: _Gen, g2: _Gen):
        if self.select == "sugar":
            return (sugar,) + self.order.key(lcm) + (g1.age, g2.age)
        return self.order.key(lcm) + (g1.age, g2.age)

    def push(self, g1: _Gen, g2: _Gen):
        lcm = m_lcm(g1.lm, g2.lm)
        sugar = max(g1.sugar + sum(m_div(lcm, g1.lm)), g2.sugar + sum(m_div(lcm, g2.lm)))
        heapq.heappush(self.heap, (self.priority(lcm, sugar, g1, g2), lcm, g1, g2))

    def pop(self):
        _, lcm, g1, g2 = heapq.heappop(self.heap)
        return lcm, g1, g2

    def __len__(self):
        return len(self.heap)

    def items(self):
        return [(lcm, g1, g2) for _, lcm, g1, g2 in self.heap]


def _update(G: list, queue: _PairQueue, h: _Gen):
    """Gebauer-Moeller installation of a new basis element h.

    Builds the filtered pair set (h, g), prunes old pairs whose lcm is a
    proper multiple of lm(h), and drops live basis elements whose leading
    monomial became divisible by lm(h).
    """
    live = [g for g in G if g is not None]
    # candidate new pairs, processed smallest lcm first for determinism
    cands = sorted(live, key=lambda g: (queue.order.key(m_lcm(g.lm, h.lm)), g.age))
    lcms = {g.age: m_lcm(g.lm, h.lm) for g in cands}
    kept: list = []
    # ascending lcm order: any proper divisor of the current lcm was seen
    # already, so filtering against `kept` realizes the chain criterion
    for g in cands:
        lg = lcms[g.age]
        redundant = any(
            lcms[other.age] != lg and m_divides(lcms[other.age], lg)
            for other, _ in kept
        )
        if redundant:
            continue
        # Buchberger's coprimality criterion: the S-pair reduces to zero,
        # but the pair still participates in the filter above
        kept.append((g, _coprime(g.lm, h.lm)))
    # prune old pairs: drop (g1, g2) when lm(h) properly divides their lcm
    surviving = []
    for lcm, g1, g2 in queue.items():
        if (
            m_divides(h.lm, lcm)
            and m_lcm(g1.lm, h.lm) != lcm
            and m_lcm(g2.lm, h.lm) != lcm
        ):
            continue
        surviving.append((lcm, g1, g2))
    queue.heap = []
    for lcm, g1, g2 in surviving:
        sugar = max(g1.sugar + sum(m_div(lcm, g1.lm)), g2.sugar + sum(m_div(lcm, g2.lm)))
        heapq.heappush(queue.heap, (queue.priority(lcm, sugar, g1, g2), lcm, g1, g2))
    for g, skip in kept:
        if not skip:
            queue.push(g, h)
    # retire basis elements made redundant by h
    for i, g in enumerate(G):
        if g is not None and m_divides(h.lm, g.lm) and g.lm != h.lm:
            G[i] = None
    G.append(h)


class GroebnerBasis:
    """A reduced, monic Groebner basis bound to a ring and an order."""

    __slots__ = ("ring", "order", "polys", "_gens")

    def __init__(self, ring_: Ring, order: MonomialOrder, polys: tuple):
        self.ring = ring_
        self.order = order
        self.polys = polys
        self._gens = [
            _Gen(dict(p.terms), order, p.total_degree(), i) for i, p in enumerate(polys)
        ]

    def reduce(self, f: Polynomial, max_terms: int = None) -> Polynomial:
        """Full normal form of f against the basis."""
        if f.ring != self.ring:
            raise RingMismatch("polynomial is not in the basis ring")
        terms = _reduce_terms(
            f.terms, self._gens, self.order, self.ring.field, _term_cap(max_terms)
        )
        return Polynomial(self.ring, terms)

    def contains(self, f: Polynomial, max_terms: int = None) -> bool:
        return self.reduce(f, max_terms=max_terms).is_zero()

    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_one()

    def leading_monomials(self) -> list:
        return [g.lm for g in self._gens]

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return f"<groebner basis, {len(self.polys)} elements, {self.order!r}>"


def groebner(
    gens,
    order: MonomialOrder = None,
    *,
    select: str = "sugar",
    max_basis: int = None,
    max_terms: int = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the given generators (list or Ideal).

    Raises ResourceLimit when the basis or any working polynomial outgrows
    its cap. The result is independent of generator order (tested).
    """
    max_basis = DEFAULT_MAX_BASIS if max_basis is None else max_basis
    max_terms = _term_cap(max_terms)
    gen_list = list(gens.gens) if hasattr(gens, "gens") else list(gens)
    if not gen_list:
        raise ValueError("need at least one generator (possibly zero)")
    ring_ = gen_list[0].ring
    for g in gen_list:
        if g.ring != ring_:
            raise RingMismatch("generators live in different rings")
    if order is None:
        order = grevlex_order(ring_)
    field = ring_.field

    # deterministic seed order: by leading monomial, then term count, then text
    nonzero = [g for g in gen_list if not g.is_zero()]
    if not nonzero:
        # the zero ideal: empty basis, reduce() is the identity
        return GroebnerBasis(ring_, order, ())
    nonzero.sort(key=lambda g: (order.key(g.leading(order.key)[0]), g.num_terms(), g.format()))

    G: list = []
    queue = _PairQueue(order, select)
    age = 0
    for g in nonzero:
        reduced = _reduce_terms(g.terms, G, order, field, max_terms)
        if not reduced:
            continue
        h = _Gen(reduced, order, max(sum(m) for m in reduced), age)
        age += 1
        _update(G, queue, h)

    while queue:
        if sum(1 for g in G if g is not None) > max_basis:
            raise ResourceLimit(
                f"basis exceeded the size cap ({max_basis})",
                basis_size=sum(1 for g in G if g is not None),
            )
        lcm, g1, g2 = queue.pop()
        s_terms, sugar = _spoly_terms(g1, g2, field)
        reduced = _reduce_terms(s_terms, G, order, field, max_terms)
        if not reduced:
            continue
        h = _Gen(reduced, order, sugar, age)
        age += 1
        _update(G, queue, h)

    # inter-reduce the survivors into the unique reduced basis
    live = [g for g in G if g is not None]
    live.sort(key=lambda g: order.key(g.lm))
    final = []
    for i, g in enumerate(live):
        others = [x for j, x in enumerate(live) if j != i]
        reduced = _reduce_terms(g.terms, others, order, field, max_terms)
        if reduced:
            final.append(reduced)
    polys = []
    for terms in final:
        lm = max(terms, key=order.key)
        lc = terms[lm]
        inv = field.inv(lc)
        polys.append(Polynomial(ring_, {m: field.mul(c, inv) for m, c in terms.items()}))
    polys.sort(key=lambda p: order.key(p.leading(order.key)[0]))
    return GroebnerBasis(ring_, order, tuple(polys))


def normal_form(f: Polynomial, basis: GroebnerBasis, max_terms: int = None) -> Polynomial:
    return basis.reduce(f, max_terms=max_terms)
