"""Exact arithmetic in finite extensions of Q_p.

Every field is the tower

    Q_p  --(unramified, degree f, generator g)-->  W  --(X^e - p, uniformizer pi)-->  K

so an element of K is a vector over Z_p in the basis ``g^j pi^i`` (``i < e``,
``j < f``).  Vectors are stored flat, index ``i*f + j``, as Python ints.

Precision is absolute and pi-adic: an :class:`Element` is known modulo
``pi^prec`` where ``prec <= field.pi_precision = e * precision``.  Operations
propagate precision honestly (division by a non-unit loses digits), and any
question whose answer would need digits that are not known raises
:class:`~emptyfatou.errors.PrecisionExhausted` instead of guessing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from emptyfatou.errors import (
    BadParameters,
    DegreeTooLarge,
    FieldMismatch,
    LiteralError,
    NoIrreducibleFound,
    NotIntegral,
    NotPrime,
    PrecisionExhausted,
)

MAX_DEGREE = 8
MIN_PRECISION = 8
INFINITY = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def vp_int(n: int, p: int) -> int | float:
    """p-adic valuation of an integer, ``INFINITY`` for 0."""
    if n == 0:
        return INFINITY
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Q_p scalars


@dataclass(frozen=True)
class PadicScalar:
    """An element ``p^valuation * unit`` of Q_p with ``precision`` base-p digits of unit.

    Zero is ``valuation=INFINITY, unit=0``.
    """

    p: int
    valuation: int | float
    unit: int
    precision: int

    def __post_init__(self):
        if self.unit == 0:
            if self.valuation != INFINITY:
                raise ValueError("zero unit requires the infinite valuation")
        elif self.unit % self.p == 0 or not 0 < self.unit < self.p**self.precision:
            raise ValueError("unit must be reduced mod p^precision and prime to p")

    @classmethod
    def from_rational(cls, value: int | Fraction, p: int, precision: int) -> PadicScalar:
        value = Fraction(value)
        if value == 0:
            return cls(p, INFINITY, 0, precision)
        num, den = value.numerator, value.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        mod = p**precision
        return cls(p, v, num * pow(den, -1, mod) % mod, precision)

    def is_zero(self) -> bool:
        return self.unit == 0

    def to_fraction(self) -> Fraction:
        """The rational ``p^v * unit`` (the stored representative)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def _check(self, other: PadicScalar | int) -> PadicScalar:
        if isinstance(other, int):
            return PadicScalar.from_rational(other, self.p, self.precision)
        if other.p != self.p:
            raise FieldMismatch(f"Q_{self.p} vs Q_{other.p}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        prec = min(self.precision, other.precision)
        v = min(self.valuation, other.valuation)
        # absolute precision of the sum; the smaller one dominates
        cap = min(self.valuation + self.precision, other.valuation + other.precision)
        total = self.unit * self.p ** (self.valuation - v) + other.unit * self.p ** (other.valuation - v)
        total %= self.p ** (cap - v)
        if total == 0:
            return PadicScalar(self.p, INFINITY, 0, prec)
        w = vp_int(total, self.p)
        rel = min(prec, cap - v - w)
        return PadicScalar(self.p, v + w, (total // self.p**w) % self.p**rel, rel)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicScalar(self.p, self.valuation, -self.unit % self.p**self.precision, self.precision)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        prec = min(self.precision, other.precision)
        if self.is_zero() or other.is_zero():
            return PadicScalar(self.p, INFINITY, 0, prec)
        mod = self.p**prec
        return PadicScalar(self.p, self.valuation + other.valuation, self.unit * other.unit % mod, prec)

    __rmul__ = __mul__

    def inverse(self) -> PadicScalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of p-adic zero")
        mod = self.p**self.precision
        return PadicScalar(self.p, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __repr__(self):
        if self.is_zero():
            return f"PadicScalar(0 in Q_{self.p})"
        return f"PadicScalar({self.p}^{self.valuation} * {self.unit} + O({self.p}^{self.valuation + self.precision}))"


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, low degree first)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by the nonzero polynomial ``b`` over F_p."""
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[shift + k] = (a[shift + k] - coef * c) % p
        _poly_trim(a)
    return a


def _monic_polys(degree: int, p: int):
    """All monic polynomials of the given degree, ordered by their base-p code."""
    for code in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def is_irreducible_mod_p(poly: list[int] | tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree at most deg/2."""
    poly = list(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for divisor in _monic_polys(k, p):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree f over F_p.

    Candidates are compared on (c_{f-1}, ..., c_0), i.e. by the integer
    ``sum c_i p^i``.  For f = 1 this is X itself.
    """
    for candidate in _monic_polys(f, p):
        if is_irreducible_mod_p(candidate, p):
            return tuple(candidate)
    raise NoIrreducibleFound(f"no irreducible of degree {f} over F_{p}")


# ---------------------------------------------------------------------------
# the residue field F_{p^f}


class ResidueField:
    """F_{p^f} = F_p[g]/(unram_poly); elements are ints whose base-p digits are the g-coefficients."""

    def __init__(self, p: int, poly: tuple[int, ...]):
        self.p = p
        self.f = len(poly) - 1
        self.order = p**self.f
        self.poly = poly

    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs) -> int:
        return sum((c % self.p) * self.p**j for j, c in enumerate(coeffs))

    def add(self, a: int, b: int) -> int:
        return self.from_coeffs(x + y for x, y in zip(self.to_coeffs(a), self.to_coeffs(b)))

    def neg(self, a: int) -> int:
        return self.from_coeffs(-x for x in self.to_coeffs(a))

    def mul(self, a: int, b: int) -> int:
        x, y = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.f - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        rem = _poly_mod(prod, list(self.poly), self.p) if self.f > 1 else [prod[0] % self.p]
        return self.from_coeffs(rem + [0] * (self.f - len(rem)))

    def pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in the residue field")
        return self.pow(a, self.order - 2)


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class Field:
    """Immutable description of K = Q_p(g, pi) with pi^e = p and unram_poly(g) = 0."""

    p: int
    e: int
    f: int
    precision: int
    unram_poly: tuple[int, ...]

    @property
    def d(self) -> int:
        return self.e * self.f

    @property
    def q(self) -> int:
        """Size of the residue field, p^f."""
        return self.p**self.f

    @property
    def pi_precision(self) -> int:
        return self.e * self.precision

    @property
    def eis_poly(self) -> tuple[int, ...]:
        return (-self.p,) + (0,) * (self.e - 1) + (1,)

    @cached_property
    def residue_field(self) -> ResidueField:
        return ResidueField(self.p, self.unram_poly)

    @cached_property
    def _gpow(self) -> tuple[tuple[int, ...], ...]:
        # g^k in the basis 1, g, ..., g^{f-1}, exact over Z, for k < 2f - 1
        f = self.f
        rows = []
        cur = [1] + [0] * (f - 1)
        for _ in range(2 * f - 1):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            for j in range(f):
                cur[j] -= top * self.unram_poly[j]
        return tuple(rows)

    def spec_string(self) -> str:
        return f"p={self.p},e={self.e},f={self.f},prec={self.precision}"

    def with_precision(self, precision: int) -> Field:
        return make_field(self.p, self.e, self.f, precision)

    # constructors ---------------------------------------------------------

    def element(self, value: int | Element) -> Element:
        if isinstance(value, Element):
            if value.field != self:
                raise FieldMismatch(f"{value.field.spec_string()} vs {self.spec_string()}")
            return value
        if isinstance(value, (bool, Fraction)) or not isinstance(value, int):
            raise TypeError(f"cannot embed {value!r}")
        vec = [0] * self.d
        vec[0] = value
        return Element._make(self, vec, 0, self.pi_precision)

    @property
    def zero(self) -> Element:
        return self.element(0)

    @property
    def one(self) -> Element:
        return self.element(1)

    @property
    def pi(self) -> Element:
        if self.e == 1:
            return self.element(self.p)
        vec = [0] * self.d
        vec[self.f] = 1
        return Element._make(self, vec, 0, self.pi_precision)

    @property
    def gen(self) -> Element:
        """The unramified generator g (equal to 0 when f = 1)."""
        vec = [0] * self.d
        if self.f > 1:
            vec[1] = 1
        return Element._make(self, vec, 0, self.pi_precision)

    def from_vector(self, vec, shift: int = 0, prec: int | None = None) -> Element:
        """Element ``pi^shift * sum vec[i*f+j] g^j pi^i`` known mod pi^prec."""
        if len(vec) != self.d:
            raise ValueError(f"expected {self.d} coordinates")
        return Element._make(self, list(vec), shift, self.pi_precision if prec is None else prec)

    def pi_power(self, k: int) -> Element:
        return self.from_vector([1] + [0] * (self.d - 1), shift=k)

    def teichmuller(self, c: int) -> Element:
        return teichmuller(c, self)

    def from_digits(self, digits, shift: int = 0) -> Element:
        """``pi^shift * sum teichmuller(a_i) pi^i``."""
        vec = [0] * self.d
        for i, a in enumerate(digits):
            if not 0 <= a < self.q:
                raise LiteralError(f"digit {a} outside [0, {self.q})")
            if a and i < self.pi_precision:
                t = _mul_pi(self, teichmuller(a, self).vec, i)
                vec = [x + y for x, y in zip(vec, t)]
        total = Element._make(self, vec, 0, self.pi_precision)
        return total.pi_shift(shift) if shift else total

    def __repr__(self):
        return f"Field({self.spec_string()})"


def make_field(p: int, e: int = 1, f: int = 1, precision: int = 32) -> Field:
    """Build K with ramification index e and residue degree f over Q_p."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1 or f < 1:
        raise BadParameters(f"need e, f >= 1 (got e={e}, f={f})")
    if e * f > MAX_DEGREE:
        raise DegreeTooLarge(f"e*f = {e * f} exceeds {MAX_DEGREE}")
    if precision < MIN_PRECISION:
        raise BadParameters(f"precision must be >= {MIN_PRECISION}")
    return Field(p, e, f, precision, smallest_irreducible(p, f))


_SPEC_RE = re.compile(r"^\s*p=(\d+),\s*e=(\d+),\s*f=(\d+),\s*prec=(\d+)\s*$")


def parse_field_spec(text: str) -> Field:
    m = _SPEC_RE.match(text)
    if not m:
        raise LiteralError(f"bad field spec {text!r}; expected p=<prime>,e=<int>,f=<int>,prec=<int>")
    p, e, f, prec = map(int, m.groups())
    return make_field(p, e, f, prec)


# ---------------------------------------------------------------------------
# integral vector kernels; vec represents sum vec[i*f+j] g^j pi^i


@lru_cache(maxsize=None)
def _moduli(field: Field, r: int) -> tuple[int, ...]:
    e, f, p = field.e, field.f, field.p
    out = []
    for i in range(e):
        k = -((i - r) // e) if r > i else 0  # ceil((r - i) / e)
        out.extend([p**k] * f)
    return tuple(out)


def _trunc(field: Field, vec, r: int) -> tuple[int, ...]:
    if r <= 0:
        return (0,) * field.d
    return tuple(c % m for c, m in zip(vec, _moduli(field, r)))


def _val(field: Field, vec, r: int) -> int:
    """v_pi of a truncated vector; returns r when it is zero mod pi^r."""
    e, f, p = field.e, field.f, field.p
    best = r
    for i in range(e):
        row = vec[i * f:(i + 1) * f]
        vrow = min(vp_int(c, p) for c in row)
        if vrow != INFINITY:
            best = min(best, e * vrow + i)
    return best


def _mul_pi(field: Field, vec, k: int) -> list[int]:
    """Multiply by pi^k, k >= 0."""
    e, f, p = field.e, field.f, field.p
    a, b = divmod(k, e)
    out = [c * p**a for c in vec] if a else list(vec)
    for _ in range(b):
        top = out[(e - 1) * f:]
        out = [p * c for c in top] + out[:(e - 1) * f]
    return out


def _div_pi(field: Field, vec, k: int) -> list[int]:
    """Exact division by pi^k; the caller guarantees divisibility."""
    e, f, p = field.e, field.f, field.p
    a, b = divmod(k, e)
    pa = p**a
    out = [c // pa for c in vec] if a else list(vec)
    for _ in range(b):
        low = out[:f]
        out = out[f:] + [c // p for c in low]
    return out


def _wmul(field: Field, a, b) -> list[int]:
    f = field.f
    if f == 1:
        return [a[0] * b[0]]
    conv = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    out = [0] * f
    for k, ck in enumerate(conv):
        if ck:
            row = field._gpow[k]
            for j in range(f):
                out[j] += ck * row[j]
    return out


def _vmul(field: Field, a, b) -> list[int]:
    e, f, p = field.e, field.f, field.p
    if e == 1:
        return _wmul(field, a, b)
    acc = [[0] * f for _ in range(e)]
    for i in range(e):
        ai = a[i * f:(i + 1) * f]
        if not any(ai):
            continue
        for j in range(e):
            bj = b[j * f:(j + 1) * f]
            if not any(bj):
                continue
            prod = _wmul(field, ai, bj)
            t = i + j
            if t >= e:
                t -= e
                prod = [p * c for c in prod]
            row = acc[t]
            for k in range(f):
                row[k] += prod[k]
    return [c for row in acc for c in row]


# ---------------------------------------------------------------------------
# elements


class Element:
    """An element ``pi^shift * Y`` of K, known modulo ``pi^prec``.

    ``Y`` is integral (the flat vector ``vec``).  Canonical form: ``shift == 0``
    for integral elements; otherwise ``shift`` is the (negative) valuation and
    ``Y`` is a unit.  Instances are immutable.
    """

    __slots__ = ("field", "vec", "shift", "prec")

    def __init__(self, *args, **kwargs):
        raise TypeError("use Field.element / Field.from_vector / Field.from_digits")

    @classmethod
    def _make(cls, field: Field, vec, shift: int, prec: int) -> Element:
        prec = min(prec, field.pi_precision)
        if shift > 0:
            vec = _mul_pi(field, vec, shift)
            shift = 0
        r = prec - shift
        vec = _trunc(field, vec, r)
        if shift < 0:
            v = _val(field, vec, r)
            if v >= r:
                shift = 0
            elif v > 0:
                t = min(v, -shift)
                vec = _trunc(field, _div_pi(field, vec, t), r - t)
                shift += t
        obj = object.__new__(cls)
        obj.field = field
        obj.vec = vec
        obj.shift = shift
        obj.prec = prec
        return obj

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field.spec_string()} vs {other.field.spec_string()}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field.element(other)
        return NotImplemented

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        """True when the element is indistinguishable from 0 at its precision."""
        return self.shift == 0 and not any(self.vec)

    def valuation(self) -> int:
        """v_pi(x); raises PrecisionExhausted for an element that is zero at precision."""
        if self.is_zero():
            raise PrecisionExhausted(f"element is zero modulo pi^{self.prec}")
        return self.shift + _val(self.field, self.vec, self.prec - self.shift)

    def valuation_or_prec(self) -> int:
        """v_pi(x), or the precision when x is zero at precision (a lower bound)."""
        if self.is_zero():
            return self.prec
        return self.shift + _val(self.field, self.vec, self.prec - self.shift)

    def is_integral(self) -> bool:
        return self.shift >= 0

    def reduction(self) -> int:
        """Image in O_K / P_K = F_{p^f}, encoded in base p."""
        if self.shift < 0:
            raise NotIntegral("reduction of a non-integral element")
        if self.prec < 1:
            raise PrecisionExhausted("no pi-adic digit known")
        p = self.field.p
        return sum((c % p) * p**j for j, c in enumerate(self.vec[:self.field.f]))

    def digits(self, count: int) -> list[int]:
        """The first ``count`` Teichmuller pi-adic digits."""
        if self.shift < 0:
            raise NotIntegral("digits of a non-integral element")
        if count > self.prec:
            raise PrecisionExhausted(f"{count} digits requested, {self.prec} known")
        field = self.field
        vec = list(self.vec)
        out = []
        for k in range(count):
            a = sum((c % field.p) * field.p**j for j, c in enumerate(vec[:field.f]))
            out.append(a)
            if a:
                t = teichmuller(a, field).vec
                vec = [x - y for x, y in zip(vec, t)]
            vec = _div_pi(field, _trunc(field, vec, self.prec - k), 1)
        return out

    @property
    def coords(self) -> list[list[PadicScalar]]:
        """coords[j][i] is the Q_p coefficient of g^j pi^i."""
        field = self.field
        e, f, p = field.e, field.f, field.p
        a = -(self.shift // e) if self.shift < 0 else 0  # pi^shift = p^-a * pi^b
        b = self.shift + a * e
        r = self.prec - self.shift + b
        vec = _mul_pi(field, self.vec, b)
        grid = [[None] * e for _ in range(f)]
        for i in range(e):
            known = -((i - r) // e) if r > i else 0  # coefficient of pi^i known mod p^known
            for j in range(f):
                c = vec[i * f + j]
                if c:
                    grid[j][i] = PadicScalar.from_rational(Fraction(c, p**a), p, known - vp_int(c, p))
                else:
                    grid[j][i] = PadicScalar(p, INFINITY, 0, max(known - a, 1))
        return grid

    def pi_shift(self, k: int) -> Element:
        """Exact multiplication by pi^k (k may be negative)."""
        return Element._make(self.field, self.vec, self.shift + k, self.prec + k)

    def with_precision(self, prec: int) -> Element:
        return Element._make(self.field, self.vec, self.shift, min(prec, self.prec))

    def lift(self, field: Field) -> Element:
        """The same representative viewed in ``field`` (same p, e, f; any precision)."""
        if (field.p, field.e, field.f) != (self.field.p, self.field.e, self.field.f):
            raise FieldMismatch("lift needs the same p, e, f")
        return Element._make(field, self.vec, self.shift, field.pi_precision)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        s = min(self.shift, other.shift)
        prec = min(self.prec, other.prec)
        a = _mul_pi(field, self.vec, self.shift - s) if self.shift != s else self.vec
        b = _mul_pi(field, other.vec, other.shift - s) if other.shift != s else other.vec
        return Element._make(field, [x + y for x, y in zip(a, b)], s, prec)

    __radd__ = __add__

    def __neg__(self):
        return Element._make(self.field, [-c for c in self.vec], self.shift, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        v1, v2 = self.valuation_or_prec(), other.valuation_or_prec()
        prec = min(self.prec + v2, other.prec + v1)
        return Element._make(field, _vmul(field, self.vec, other.vec), self.shift + other.shift, prec)

    __rmul__ = __mul__

    def inverse(self) -> Element:
        field = self.field
        v = self.valuation()
        rel = self.prec - v  # digits known of the unit part
        unit = _div_pi(field, self.vec, v - self.shift) if v > self.shift else self.vec
        unit = _trunc(field, unit, rel)
        inv = _unit_inverse(field, unit, rel)
        return Element._make(field, inv, -v, self.prec - 2 * v)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"Element({format_element(self)} + O(pi^{self.prec}) in {self.field.spec_string()})"


def _unit_inverse(field: Field, unit, r: int) -> tuple[int, ...]:
    """Inverse of a unit modulo pi^r by Newton iteration from the residue inverse."""
    if r <= 0:
        return (0,) * field.d
    rf = field.residue_field
    p = field.p
    u0 = sum((c % p) * p**j for j, c in enumerate(unit[:field.f]))
    z = [0] * field.d
    z[:field.f] = rf.to_coeffs(rf.inv(u0))
    known = 1
    while known < r:
        known = min(2 * known, r)
        uz = _trunc(field, _vmul(field, unit, z), known)
        two_minus = [-c for c in uz]
        two_minus[0] += 2
        z = _trunc(field, _vmul(field, z, two_minus), known)
    return tuple(z)


@lru_cache(maxsize=None)
def teichmuller(c: int, field: Field) -> Element:
    """The unique root of x^{p^f} = x reducing to the residue ``c``."""
    if not 0 <= c < field.q:
        raise ValueError(f"residue {c} outside [0, {field.q})")
    vec = [0] * field.d
    vec[:field.f] = field.residue_field.to_coeffs(c)
    x = Element._make(field, vec, 0, field.pi_precision)
    for _ in range(field.pi_precision + 2):
        nxt = x ** field.q
        if nxt.vec == x.vec:
            return x
        x = nxt
    raise AssertionError("Teichmuller iteration did not stabilise")


def reduction(x: Element) -> int:
    return x.reduction()


def valuation(x: Element) -> int:
    return x.valuation()


def digits(x: Element, count: int) -> list[int]:
    return x.digits(count)


# ---------------------------------------------------------------------------
# literals

_DIGITS_RE = re.compile(r"^digits:\[\s*([0-9,\s]*)\]$")
_SHIFT_RE = re.compile(r"^pi\^(-?\d+)\*(.+)$")


def parse_element(field: Field, text: str) -> Element:
    """Parse ``digits:[a0,...]``, a plain integer, or either prefixed by ``pi^k*``."""
    text = text.strip().replace(" ", "")
    shift = 0
    m = _SHIFT_RE.match(text)
    if m:
        shift = int(m.group(1))
        text = m.group(2)
    m = _DIGITS_RE.match(text)
    if m:
        body = m.group(1)
        ds = [int(tok) for tok in body.split(",") if tok] if body else []
        return field.from_digits(ds, shift)
    if re.fullmatch(r"[+-]?\d+", text):
        return field.element(int(text)).pi_shift(shift)
    raise LiteralError(f"bad element literal {text!r}")


def format_element(x: Element) -> str:
    """Inverse of :func:`parse_element`: Teichmuller digits, trailing zeros dropped."""
    if x.shift < 0:
        unit = Element._make(x.field, x.vec, 0, x.prec - x.shift)
        return f"pi^{x.shift}*{format_element(unit)}"
    ds = x.digits(max(x.prec, 0))
    while len(ds) > 1 and ds[-1] == 0:
        ds.pop()
    return "digits:[" + ",".join(map(str, ds or [0])) + "]"
