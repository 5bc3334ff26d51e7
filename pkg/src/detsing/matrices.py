"""Generic matrices over polynomial rings: determinants, pfaffians, minors.

Two independent determinant routes are kept on purpose. The cofactor route
shares sub-minors through a cache (which also powers bulk minor extraction);
Bareiss is fraction-free elimination with exact polynomial division. They
cross-check each other in the test suite and must never be merged.

Conventions, all pinned by tests:
  * generic_skew(m) uses variables x_i_j for 1 <= i < j <= m, zero diagonal,
    and the explicit negative below the diagonal.
  * generic_sym(m) uses x_i_j for 1 <= i <= j <= m.
  * pfaffian([[0, x], [-x, 0]]) = +x, with the first-row recursion
    pf(M) = sum_{j>1} (-1)^j m_{1j} pf(M without rows/cols 1, j).
  * minors are indexed by strictly increasing 0-based row/column tuples and
    enumerated in lexicographic (I, J) order.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable

from .errors import BadIndex, CharTwoForbidden, NotSkew, OddSize, RingMismatch
from .fields import QQ
from .rings import Polynomial, Ring, Substitution, exact_div, ring


class GenericMatrix:
    """A square matrix of polynomials tagged with a shape kind.

    kind is one of "skew", "sym", "general"; the tagged symmetry is
    validated at construction so downstream shape shortcuts stay sound.
    """

    __slots__ = ("ring", "rows", "kind")

    def __init__(self, ring_: Ring, rows, kind: str = "general"):
        rows = tuple(tuple(row) for row in rows)
        m = len(rows)
        for row in rows:
            if len(row) != m:
                raise BadIndex("matrix is not square")
            for e in row:
                if not isinstance(e, Polynomial) or e.ring != ring_:
                    raise RingMismatch("entry not a polynomial of the given ring")
        if kind == "skew":
            _require_skew(rows)
        elif kind == "sym":
            for i in range(m):
                for j in range(i + 1, m):
                    if rows[i][j] != rows[j][i]:
                        raise BadIndex("matrix is not symmetric")
        elif kind != "general":
            raise BadIndex(f"unknown matrix kind {kind!r}")
        self.ring = ring_
        self.rows = rows
        self.kind = kind

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.rows[i][j]

    def map_entries(self, fn: Callable[[Polynomial], Polynomial], ring_: Ring = None,
                    kind: str = None) -> "GenericMatrix":
        return GenericMatrix(
            ring_ or self.ring,
            [[fn(e) for e in row] for row in self.rows],
            kind if kind is not None else self.kind,
        )

    def apply(self, sub: Substitution) -> "GenericMatrix":
        """Entrywise substitution; symmetry survives a ring map."""
        return self.map_entries(sub, ring_=sub.target)

    def variables(self) -> tuple:
        """Names occurring anywhere in the matrix, in ring order."""
        used = set()
        for row in self.rows:
            for e in row:
                used.update(e.variables())
        return tuple(n for n in self.ring.names if n in used)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.size,
            "ring": self.ring.to_json(),
            "entries": [[e.format() for e in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GenericMatrix":
        ring_ = Ring.from_json(data["ring"])
        rows = [[ring_.parse(s) for s in row] for row in data["entries"]]
        return cls(ring_, rows, data["kind"])

    def __eq__(self, other):
        return (
            isinstance(other, GenericMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"<{self.kind} {self.size}x{self.size} matrix over {self.ring!r}>"


def _require_skew(rows):
    m = len(rows)
    for i in range(m):
        if not rows[i][i].is_zero():
            raise NotSkew("nonzero diagonal entry")
        for j in range(i + 1, m):
            if rows[j][i] != -rows[i][j]:
                raise NotSkew(f"entry ({j},{i}) is not the negative of ({i},{j})")


def skew_variable_names(m: int, prefix: str = "x") -> list:
    return [f"{prefix}_{i}_{j}" for i in range(1, m + 1) for j in range(i + 1, m + 1)]


def sym_variable_names(m: int, prefix: str = "x") -> list:
    return [f"{prefix}_{i}_{j}" for i in range(1, m + 1) for j in range(i, m + 1)]


def generic_skew(m: int, field=QQ, prefix: str = "x", ring_: Ring = None) -> GenericMatrix:
    """The generic skew-symmetric m x m matrix in variables prefix_i_j (i < j).

    An optional ambient ring may be supplied as long as it contains all the
    needed variable names (used by the resolution driver, whose rings carry
    extra bookkeeping coordinates).
    """
    if field.char == 2:
        raise CharTwoForbidden("generic skew matrices need characteristic != 2")
    names = skew_variable_names(m, prefix)
    if ring_ is None:
        ring_ = ring(names, field)
    rows = [[ring_.zero() for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            v = ring_.var(f"{prefix}_{i + 1}_{j + 1}")
            rows[i][j] = v
            rows[j][i] = -v
    return GenericMatrix(ring_, rows, "skew")


def generic_sym(m: int, field=QQ, prefix: str = "x", ring_: Ring = None) -> GenericMatrix:
    """The generic symmetric m x m matrix in variables prefix_i_j (i <= j)."""
    names = sym_variable_names(m, prefix)
    if ring_ is None:
        ring_ = ring(names, field)
    rows = [[ring_.zero() for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            v = ring_.var(f"{prefix}_{i + 1}_{j + 1}")
            rows[i][j] = v
            rows[j][i] = v
    return GenericMatrix(ring_, rows, "sym")


def _check_index_set(idx, m: int) -> tuple:
    idx = tuple(idx)
    if any(not isinstance(i, int) or i < 0 or i >= m for i in idx):
        raise BadIndex(f"index out of range for size {m}: {idx}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise BadIndex(f"index set must be strictly increasing: {idx}")
    return idx


def submatrix(M: GenericMatrix, rows: Iterable[int], cols: Iterable[int]) -> GenericMatrix:
    rows = _check_index_set(rows, M.size)
    cols = _check_index_set(cols, M.size)
    if len(rows) != len(cols):
        raise BadIndex("row and column sets must have equal size")
    kind = M.kind if rows == cols else "general"
    return GenericMatrix(M.ring, [[M.rows[i][j] for j in cols] for i in rows], kind)


class MinorCache:
    """Shared cofactor expansion over one matrix.

    minor(I, J) is the determinant of the submatrix on strictly increasing
    index tuples I, J. All minors of all sizes share sub-results, so bulk
    extraction (minors_ideal, cofactor determinants) costs one pass over
    the subset lattice instead of one expansion per minor.
    """

    def __init__(self, M: GenericMatrix):
        self.M = M
        self._cache = {((), ()): M.ring.one()}

    def minor(self, I: tuple, J: tuple) -> Polynomial:
        key = (I, J)
        got = self._cache.get(key)
        if got is not None:
            return got
        # expand along the last row of I
        i = I[-1]
        I_rest = I[:-1]
        k = len(I)
        acc = self.M.ring.zero()
        row = self.M.rows[i]
        for t, j in enumerate(J):
            e = row[j]
            if e.is_zero():
                continue
            sub = self.minor(I_rest, J[:t] + J[t + 1:])
            if sub.is_zero():
                continue
            term = e * sub
            # sign (-1)^(k + t + 1) for 1-based positions (k, t+1)
            acc = acc + term if (k + t) % 2 else acc - term
        self._cache[(I, J)] = acc
        return acc


def determinant(M: GenericMatrix, method: str = "cofactor") -> Polynomial:
    """Exact determinant. method is "cofactor" or "bareiss"; the two are
    independent implementations and agree (enforced by tests)."""
    if method == "cofactor":
        full = tuple(range(M.size))
        return MinorCache(M).minor(full, full)
    if method == "bareiss":
        return _det_bareiss(M)
    raise BadIndex(f"unknown determinant method {method!r}")


def _det_bareiss(M: GenericMatrix) -> Polynomial:
    """Fraction-free Bareiss elimination with exact polynomial division."""
    n = M.size
    R = M.ring
    if n == 0:
        return R.one()
    rows = [list(row) for row in M.rows]
    sign = 1
    prev = R.one()
    for k in range(n - 1):
        if rows[k][k].is_zero():
            for i in range(k + 1, n):
                if not rows[i][k].is_zero():
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return R.zero()
        piv = rows[k][k]
        for i in range(k + 1, n):
            r_ik = rows[i][k]
            for j in range(k + 1, n):
                num = rows[i][j] * piv - r_ik * rows[k][j]
                rows[i][j] = exact_div(num, prev) if not num.is_zero() else R.zero()
            rows[i][k] = R.zero()
        prev = piv
    det = rows[n - 1][n - 1]
    return -det if sign < 0 else det


def pfaffian(M: GenericMatrix) -> Polynomial:
    """Pfaffian of a skew-symmetric matrix of even size.

    Skew-symmetry is re-validated on the entries (NotSkew otherwise);
    OddSize for odd matrices. pf(M)^2 = det(M) is a test invariant.
    """
    _require_skew(M.rows)
    if M.size % 2:
        raise OddSize("the pfaffian needs an even-sized matrix")
    R = M.ring
    memo: dict = {(): R.one()}

    def pf(idx: tuple) -> Polynomial:
        got = memo.get(idx)
        if got is not None:
            return got
        i0 = idx[0]
        rest = idx[1:]
        acc = R.zero()
        for t, j in enumerate(rest):
            e = M.rows[i0][j]
            if e.is_zero():
                continue
            term = e * pf(rest[:t] + rest[t + 1:])
            acc = acc + term if t % 2 == 0 else acc - term
        memo[idx] = acc
        return acc

    return pf(tuple(range(M.size)))


def minors(M: GenericMatrix, r: int, cache: MinorCache = None) -> list:
    """All (I, J, det) for |I| = |J| = r in lexicographic (I, J) order."""
    if r < 0 or r > M.size:
        raise BadIndex(f"minor size {r} out of range for a {M.size}x{M.size} matrix")
    cache = cache or MinorCache(M)
    out = []
    index_sets = list(combinations(range(M.size), r))
    for I in index_sets:
        for J in index_sets:
            out.append((I, J, cache.minor(I, J)))
    return out


class Ideal:
    """A finitely generated ideal: a ring plus an ordered generator tuple."""

    __slots__ = ("ring", "gens")

    def __init__(self, ring_: Ring, gens: Iterable[Polynomial]):
        gens = tuple(gens)
        for g in gens:
            if g.ring != ring_:
                raise RingMismatch("generator not in the ideal's ring")
        self.ring = ring_
        self.gens = gens

    def map(self, sub: Substitution) -> "Ideal":
        return Ideal(sub.target, tuple(sub(g) for g in self.gens))

    def contains_unit_generator(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.gens)

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "generators": [g.format() for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict) -> "Ideal":
        ring_ = Ring.from_json(data["ring"])
        return cls(ring_, tuple(ring_.parse(s) for s in data["generators"]))

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __eq__(self, other):
        return (
            isinstance(other, Ideal)
            and self.ring == other.ring
            and self.gens == other.gens
        )

    def __hash__(self):
        return hash((self.ring, self.gens))

    def __repr__(self):
        shown = ", ".join(g.format() for g in self.gens[:3])
        more = ", ..." if len(self.gens) > 3 else ""
        return f"<ideal ({shown}{more})>"


def _dedup_generators(gens: Iterable[Polynomial]) -> list:
    """Drop zero generators and sign duplicates, keeping first occurrences.

    A minor and its negative generate the same ideal; skew minors come in
    such pairs, and the canonical small examples (like the entry ideal of
    the 2x2 skew matrix) expect one representative per pair.
    """
    out = []
    seen = set()
    for g in gens:
        if g.is_zero():
            continue
        key = frozenset(g.terms.items())
        if key in seen:
            continue
        neg_key = frozenset((-g).terms.items())
        if neg_key in seen:
            continue
        seen.add(key)
        out.append(g)
    return out


def minors_ideal(M: GenericMatrix, r: int, cache: MinorCache = None) -> Ideal:
    """The ideal of r-minors, with zero and sign-duplicate minors dropped."""
    gens = _dedup_generators(det for _, _, det in minors(M, r, cache))
    return Ideal(M.ring, gens)


def principal_minors_ideal(M: GenericMatrix, r: int, cache: MinorCache = None) -> Ideal:
    """Same, restricted to I = J (principal minors)."""
    if r < 0 or r > M.size:
        raise BadIndex(f"minor size {r} out of range for a {M.size}x{M.size} matrix")
    cache = cache or MinorCache(M)
    gens = _dedup_generators(
        cache.minor(I, I) for I in combinations(range(M.size), r)
    )
    return Ideal(M.ring, gens)
