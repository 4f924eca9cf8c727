"""Coxeter systems, the geometric representation, and exact group elements.

Elements carry both their matrix and its inverse (acting on simple-root
coordinates), so left and right descent sets are both column sign tests.
Lengths come from greedy descent stripping and are memoized; equality and
hashing go through the canonical matrix encoding, which is sound because the
scalars are exact.

The label 0 encodes an infinite bond everywhere (matrices, I/O).
"""

import json

from .scalar import make_context

INFINITY = 0


class ValidationError(ValueError):
    """A Coxeter matrix or argument violates its invariants."""


class MismatchError(ValueError):
    """Operands belong to different Coxeter systems."""


class CoxeterMatrix:
    """Symmetric matrix of bond orders; m[s][s] = 1, off-diagonal >= 2 or 0."""

    def __init__(self, entries):
        rows = [tuple(int(x) for x in row) for row in entries]
        rank = len(rows)
        for i, row in enumerate(rows):
            if len(row) != rank:
                raise ValidationError("Coxeter matrix must be square")
            if row[i] != 1:
                raise ValidationError(f"diagonal entry m[{i}][{i}] = {row[i]}, expected 1")
            for j, m in enumerate(row):
                if i != j and m != INFINITY and m < 2:
                    raise ValidationError(f"off-diagonal entry m[{i}][{j}] = {m} < 2")
                if m != rows[j][i]:
                    raise ValidationError("Coxeter matrix must be symmetric")
        self.rank = rank
        self.m = tuple(rows)

    def entry(self, s, t):
        return self.m[s][t]

    def finite_labels(self):
        """Off-diagonal finite labels, one per unordered pair."""
        return [
            self.m[i][j]
            for i in range(self.rank)
            for j in range(i + 1, self.rank)
            if self.m[i][j] != INFINITY
        ]

    def to_json(self):
        return json.dumps({"rank": self.rank, "m": [list(r) for r in self.m]})

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"bad matrix JSON at position {exc.pos}: {exc.msg}") from None
        if not isinstance(data, dict) or "m" not in data:
            raise ValidationError('matrix JSON must be an object with an "m" field')
        mat = cls(data["m"])
        if "rank" in data and data["rank"] != mat.rank:
            raise ValidationError("rank field disagrees with matrix size")
        return mat

    def __eq__(self, other):
        return isinstance(other, CoxeterMatrix) and other.m == self.m

    def __hash__(self):
        return hash(self.m)


def _generator_names(rank):
    if rank <= 8:
        return tuple("stuvwxyz"[:rank])
    return tuple(f"s{i + 1}" for i in range(rank))


class CoxeterSystem:
    """A Coxeter matrix with its exact bilinear form and generator matrices.

    Immutable and shareable; holds a cache dict used by the root / low-element
    pipeline to memoize derived data per system.
    """

    def __init__(self, matrix):
        if not isinstance(matrix, CoxeterMatrix):
            matrix = CoxeterMatrix(matrix)
        self.matrix = matrix
        self.rank = matrix.rank
        self.ctx = make_context(matrix.finite_labels())
        self.gen_names = _generator_names(self.rank)
        ctx = self.ctx
        self.gram = tuple(
            tuple(-ctx.cos_pi_over(matrix.entry(s, t)) for t in range(self.rank))
            for s in range(self.rank)
        )
        one, zero = ctx.one, ctx.zero
        ident = tuple(
            tuple(one if i == j else zero for j in range(self.rank)) for i in range(self.rank)
        )
        self._identity = Element(self, ident, ident, 0)
        self._gens = tuple(self._build_generator(s) for s in range(self.rank))
        self.cache = {}

    def _build_generator(self, s):
        rows = []
        for u in range(self.rank):
            if u == s:
                rows.append(tuple(
                    (1 if v == s else 0) - 2 * self.gram[s][v] for v in range(self.rank)
                ))
            else:
                rows.append(self._identity.fwd[u])
        mat = tuple(rows)
        return Element(self, mat, mat, 1)

    def identity(self):
        return self._identity

    def generator(self, s):
        return self._gens[s]

    def generators(self):
        return self._gens

    def word_to_element(self, word):
        w = self._identity
        for s in word:
            w = multiply(w, self._gens[s])
        return w

    def describe(self):
        labels = [
            f"{self.gen_names[i]}{self.gen_names[j]}={self.matrix.m[i][j] or 'inf'}"
            for i in range(self.rank)
            for j in range(i + 1, self.rank)
        ]
        return f"rank {self.rank}; " + ", ".join(labels)


class Element:
    """Group element as a (matrix, inverse-matrix) pair over exact scalars."""

    __slots__ = ("system", "fwd", "inv", "_length")

    def __init__(self, system, fwd, inv, length=None):
        self.system = system
        self.fwd = fwd
        self.inv = inv
        self._length = length

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and other.system is self.system
            and other.fwd == self.fwd
        )

    def __hash__(self):
        return hash(self.fwd)

    def __repr__(self):
        names = self.system.gen_names
        word = reduced_word(self)
        return "<e>" if not word else "<" + ".".join(names[s] for s in word) + ">"

    def inverse(self):
        return Element(self.system, self.inv, self.fwd, self._length)

    def is_identity(self):
        return self.fwd == self.system._identity.fwd


def _matmul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(n):
            acc = Ai[0] * B[0][j]
            for k in range(1, n):
                acc = acc + Ai[k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def multiply(a, b):
    if a.system is not b.system:
        raise MismatchError("elements from different systems")
    return Element(a.system, _matmul(a.fwd, b.fwd), _matmul(b.inv, a.inv))


def inverse(a):
    return a.inverse()


def _lmul_gen(s, w):
    """s * w for a generator s, with length bookkeeping left to the caller."""
    sys = w.system
    gram_s = sys.gram[s]
    n = sys.rank
    fwd = list(w.fwd)
    acc = [gram_s[0] * fwd[0][j] for j in range(n)]
    for k in range(1, n):
        gk = gram_s[k]
        if not gk.is_zero():
            row = fwd[k]
            for j in range(n):
                acc[j] = acc[j] + gk * row[j]
    fwd[s] = tuple(fwd[s][j] - 2 * acc[j] for j in range(n))
    inv = tuple(
        tuple(row[t] - 2 * gram_s[t] * row[s] for t in range(n)) for row in w.inv
    )
    return Element(sys, tuple(fwd), inv)


def _rmul_gen(w, s):
    """w * s for a generator s."""
    sys = w.system
    gram_s = sys.gram[s]
    n = sys.rank
    fwd = tuple(
        tuple(row[t] - 2 * gram_s[t] * row[s] for t in range(n)) for row in w.fwd
    )
    inv = list(w.inv)
    acc = [gram_s[0] * inv[0][j] for j in range(n)]
    for k in range(1, n):
        gk = gram_s[k]
        if not gk.is_zero():
            row = inv[k]
            for j in range(n):
                acc[j] = acc[j] + gk * row[j]
    inv[s] = tuple(inv[s][j] - 2 * acc[j] for j in range(n))
    return Element(sys, fwd, tuple(inv))


def _column_is_negative(mat, col):
    """Sign of the root in column col: roots are sign-coherent, so the first
    nonzero coordinate decides."""
    for row in mat:
        sg = row[col].sign()
        if sg:
            return sg < 0
    raise ArithmeticError("zero column in an invertible matrix")


def left_descents(w):
    """Generators s with l(sw) < l(w), i.e. w^-1 alpha_s < 0."""
    return [s for s in range(w.system.rank) if _column_is_negative(w.inv, s)]


def right_descents(w):
    """Generators s with l(ws) < l(w), i.e. w alpha_s < 0."""
    return [s for s in range(w.system.rank) if _column_is_negative(w.fwd, s)]


def length(w):
    if w._length is None:
        w._length = len(reduced_word(w))
    return w._length


def reduced_word(w):
    """ShortLex-canonical reduced word: strip the smallest left descent."""
    word = []
    cur = w
    while True:
        ds = left_descents(cur)
        if not ds:
            break
        s = ds[0]
        word.append(s)
        cur = _lmul_gen(s, cur)
    if w._length is None:
        w._length = len(word)
    return tuple(word)


def is_prefix(v, w):
    """Weak-order test: l(w) = l(v) + l(v^-1 w)."""
    if v.system is not w.system:
        raise MismatchError("elements from different systems")
    return length(w) == length(v) + length(multiply(v.inverse(), w))


def is_suffix(u, w):
    """l(w) = l(u) + l(w u^-1)."""
    if u.system is not w.system:
        raise MismatchError("elements from different systems")
    return length(w) == length(u) + length(multiply(w, u.inverse()))


def _det_submatrix(entries, k):
    """Determinant of the leading k x k block, by subset expansion (no division)."""
    if k == 0:
        return None
    memo = {}

    def minor(row, cols):
        if row == k:
            return 1
        key = cols
        val = memo.get(key)
        if val is not None:
            return val
        acc = None
        sign_flip = False
        for j in range(k):
            bit = 1 << j
            if cols & bit:
                continue
            term = entries[row][j] * minor(row + 1, cols | bit)
            if sign_flip:
                term = -term
            acc = term if acc is None else acc + term
            sign_flip = not sign_flip
        memo[key] = acc
        return acc

    return minor(0, 0)


def is_spherical(system, J):
    """True iff W_J is finite: the Gram block on J is positive definite."""
    J = tuple(sorted(set(J)))
    cache = system.cache.setdefault("spherical", {})
    if J in cache:
        return cache[J]
    result = True
    for i in J:
        for j in J:
            if system.matrix.entry(i, j) == INFINITY:
                result = False
    if result:
        sub = [[system.gram[a][b] for b in J] for a in J]
        for k in range(1, len(J) + 1):
            det = _det_submatrix(sub, k)
            if det.sign() <= 0:
                result = False
                break
    cache[J] = result
    return result


def longest_element(system, J):
    """Longest element of the finite parabolic W_J, by greedy ascent."""
    J = sorted(set(J))
    if not is_spherical(system, J):
        raise ValidationError(f"subset {J} is not spherical")
    w = system.identity()
    n = 0
    while True:
        ds = right_descents(w)
        nxt = next((j for j in J if j not in ds), None)
        if nxt is None:
            w._length = n
            return w
        w = _rmul_gen(w, nxt)
        n += 1
