"""Exact arithmetic in the cyclotomic field holding every cos(pi/m) of a system.

Scalars are elements of Q(zeta_n) stored as integer coefficient vectors over a
single positive denominator, reduced modulo the n-th cyclotomic polynomial.
The canonical form makes equality and hashing exact, which the root interner
and all fixpoint computations depend on.

Contexts whose conductor lies in {1, 2, 3, 4, 6} collapse to plain rational
arithmetic (degree one): there cos(pi/m) is rational for every representable
label, which covers all crystallographic systems built from labels 2 and 3.

Only the arithmetic actually needed downstream is provided: ring operations,
rational embedding, and an exact sign (the scalars produced by this library
all lie in the real subfield, where the embedding zeta_n = exp(2*pi*i/n) is
real-valued).
"""

import math
from fractions import Fraction


class FieldError(Exception):
    """A value is not representable in, or mixes, field contexts."""


def _cyclotomic(n, _memo={}):
    """Coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n in _memo:
        return _memo[n]
    # divide x^n - 1 by Phi_d for every proper divisor d of n
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            div = _cyclotomic(d)
            poly = _polydiv_exact(poly, div)
    _memo[n] = poly
    return poly


def _polydiv_exact(num, den):
    """Exact division of integer polynomials, den monic. Low degree first."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        out[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("non-exact polynomial division")
    return out


class FieldContext:
    """The field Q(zeta_n) with n chosen so every needed cos(pi/m) exists.

    Use make_context() to build one.  Immutable after construction; safe to
    share across threads.
    """

    def __init__(self, conductor):
        self.conductor = n = conductor
        self.rational_mode = n in (1, 2, 3, 4, 6)
        if self.rational_mode:
            self.degree = d = 1
            self._phi = (-1, 1)
        else:
            phi = _cyclotomic(n)
            self.degree = d = len(phi) - 1
            self._phi = tuple(phi)
        # x^k mod Phi_n for k = 0 .. n-1 (unused in rational mode)
        rows = []
        cur = [0] * d
        for k in range(max(n, 2 * d - 1)):
            if k < d:
                cur = [0] * d
                cur[k] = 1
            else:
                top = cur[d - 1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [cur[i] - top * self._phi[i] for i in range(d)]
            rows.append(tuple(cur))
        self._pow = tuple(rows)
        # float embedding of the basis powers under zeta = exp(2*pi*i/n)
        if self.rational_mode:
            self._cos = (1.0,)
        else:
            self._cos = tuple(math.cos(2.0 * math.pi * k / n) for k in range(d))
        self.zero = Scalar(self, (0,) * d, 1)
        self.one = self.rational(1)

    def __repr__(self):
        return f"FieldContext(conductor={self.conductor})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.conductor == self.conductor

    def __hash__(self):
        return hash(("FieldContext", self.conductor))

    def scalar(self, num, den=1):
        """Canonicalize an integer coefficient vector / denominator pair."""
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = den
        for c in num:
            g = math.gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return Scalar(self, tuple(num), den)

    def rational(self, p, q=1):
        """Embed the rational p/q."""
        if isinstance(p, Fraction):
            p, q = p.numerator * q, p.denominator
        num = [p] + [0] * (self.degree - 1)
        return self.scalar(tuple(num), q)

    def cos_pi_over(self, m):
        """Exact cos(pi/m); m = 0 encodes infinity and yields 1.

        Raises FieldError when cos(pi/m) does not lie in this field.
        """
        if m == 0:
            return self.one
        if m == 1:
            return self.rational(-1)
        if m == 2:
            return self.zero
        if m == 3 and self.conductor % 6 == 0:
            return self.rational(1, 2)
        n = self.conductor
        if self.rational_mode or n % (2 * m) != 0:
            raise FieldError(f"cos(pi/{m}) not representable with conductor {n}")
        k = n // (2 * m)
        # cos(pi/m) = (zeta^k + zeta^(n-k)) / 2
        a = self._pow[k]
        b = self._pow[n - k]
        return self.scalar(tuple(a[i] + b[i] for i in range(self.degree)), 2)


class Scalar:
    """Immutable field element in canonical form. Supports +, -, *, ==, hash.

    Integers mix freely on either side of the arithmetic operators.
    """

    __slots__ = ("ctx", "num", "den", "_sign")

    def __init__(self, ctx, num, den):
        self.ctx = ctx
        self.num = num
        self.den = den
        self._sign = None

    def __repr__(self):
        return f"Scalar({list(self.num)}/{self.den} @ n={self.ctx.conductor})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.rational(other)
        elif not isinstance(other, Scalar):
            return NotImplemented
        return (
            self.num == other.num
            and self.den == other.den
            and self.ctx.conductor == other.ctx.conductor
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ctx.rational(other)
        if isinstance(other, Scalar):
            if other.ctx.conductor != self.ctx.conductor:
                raise FieldError("scalars from different field contexts")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        da, db = self.den, o.den
        g = math.gcd(da, db)
        ma, mb = db // g, da // g
        num = tuple(a * ma + b * mb for a, b in zip(self.num, o.num))
        return self.ctx.scalar(num, da * ma)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ctx, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.ctx.scalar(tuple(c * other for c in self.num), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        d = ctx.degree
        if d == 1:
            return ctx.scalar((self.num[0] * o.num[0],), self.den * o.den)
        a, b = self.num, o.num
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:d])
        pow_rows = ctx._pow
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck:
                row = pow_rows[k]
                for i in range(d):
                    out[i] += ck * row[i]
        return ctx.scalar(tuple(out), self.den * o.den)

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.num)

    def sign(self):
        """Exact trichotomy of the real embedding: -1, 0 or +1.

        Zero is decided from the canonical form, so interval refinement only
        runs on provably nonzero values and always terminates for elements of
        the real subfield (the only elements this library constructs).
        """
        if self._sign is not None:
            return self._sign
        s = self._sign_compute()
        self._sign = s
        return s

    def _sign_compute(self):
        if not any(self.num):
            return 0
        if self.ctx.degree == 1:
            return 1 if self.num[0] > 0 else -1
        cos = self.ctx._cos
        v = 0.0
        scale = 0.0
        for c, w in zip(self.num, cos):
            v += c * w
            scale += abs(c)
        if abs(v) > scale * 1e-12 + 1e-300:
            return 1 if v > 0 else -1
        return self._sign_refine(scale)

    def _sign_refine(self, scale):
        from mpmath import mp, mpf

        n = self.ctx.conductor
        prec = 128
        while prec <= 1 << 16:
            with mp.workprec(prec):
                step = 2 * mp.pi / n
                v = mpf(0)
                for k, c in enumerate(self.num):
                    if c:
                        v += c * mp.cos(step * k)
                bound = mpf(scale) * mpf(2) ** (8 - prec)
                if abs(v) > bound:
                    return 1 if v > 0 else -1
            prec *= 2
        raise ArithmeticError("sign refinement failed: element not in the real subfield?")


def make_context(labels):
    """Field context for a multiset of finite Coxeter matrix labels.

    The conductor is 2 * lcm of the labels exceeding 2 (a label of 2
    contributes cos(pi/2) = 0, which needs no field extension), and 1 when no
    label requires an extension.
    """
    lcm = 1
    for m in labels:
        if m < 2:
            raise ValueError(f"label {m} out of range (finite labels must be >= 2)")
        if m > 2:
            lcm = lcm * m // math.gcd(lcm, m)
    return FieldContext(1 if lcm == 1 else 2 * lcm)


def cos_pi_over(ctx, m):
    return ctx.cos_pi_over(m)


def sign(a):
    return a.sign()
