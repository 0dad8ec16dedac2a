"""Exact scalar arithmetic in Q_p at a fixed working precision.

A nonzero scalar is stored as p^valuation * unit where the unit is an
integer coprime to p, kept canonically in [1, p^precision).  ``precision``
counts the trusted unit digits; operations propagate it and refuse to
return a value with fewer than GUARD_DIGITS trusted digits.  Zero is
encoded with valuation +inf and unit 0.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (
    DivisionByZero,
    NotASquare,
    PrecisionExhausted,
    ZeroInput,
)

INF = math.inf

DEFAULT_PRECISION = 24
GUARD_DIGITS = 4
MIN_PRECISION = 8

_working_precision = DEFAULT_PRECISION


def set_precision(n: int) -> None:
    """Set the global working precision (trusted digits of fresh scalars)."""
    global _working_precision
    if n < MIN_PRECISION:
        raise ValueError(f"working precision must be >= {MIN_PRECISION}, got {n}")
    _working_precision = int(n)


def get_precision() -> int:
    return _working_precision


def vp_int(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ZeroInput("valuation of integer zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    __slots__ = ("prime", "valuation", "unit", "precision")

    def __init__(self, prime, valuation, unit, precision):
        # canonical storage; use the classmethods for general inputs
        self.prime = prime
        self.valuation = valuation
        self.unit = unit
        self.precision = precision

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p: int, precision: int | None = None) -> "PadicNumber":
        return cls(p, INF, 0, precision or _working_precision)

    @classmethod
    def one(cls, p: int, precision: int | None = None) -> "PadicNumber":
        return cls(p, 0, 1, precision or _working_precision)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int | None = None) -> "PadicNumber":
        prec = precision or _working_precision
        if n == 0:
            return cls.zero(p, prec)
        v = vp_int(n, p)
        u = (n // p**v) % p**prec
        return cls(p, v, u, prec)

    @classmethod
    def from_fraction(cls, q, p: int, precision: int | None = None) -> "PadicNumber":
        q = Fraction(q)
        prec = precision or _working_precision
        if q == 0:
            return cls.zero(p, prec)
        vn = vp_int(q.numerator, p)
        vd = vp_int(q.denominator, p)
        mod = p**prec
        num = (q.numerator // p**vn) % mod
        den = (q.denominator // p**vd) % mod
        return cls(p, vn - vd, num * pow(den, -1, mod) % mod, prec)

    @classmethod
    def from_unit(cls, p: int, valuation: int, unit: int, precision: int | None = None) -> "PadicNumber":
        """Build p^valuation * unit, canonicalizing the unit."""
        prec = precision or _working_precision
        if unit % p == 0:
            raise ValueError("unit part must be coprime to p")
        return cls(p, valuation, unit % p**prec, prec)

    # -- basic predicates -----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def is_unit(self) -> bool:
        return self.valuation == 0

    @property
    def absolute_precision(self):
        # exponent below which every digit is trusted
        return self.valuation + self.precision

    def __bool__(self) -> bool:
        return self.unit != 0

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError("mixed primes in arithmetic")
            return other
        if isinstance(other, int):
            return PadicNumber.from_int(other, self.prime)
        if isinstance(other, Fraction):
            return PadicNumber.from_fraction(other, self.prime)
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        a = self
        if a.is_zero:
            return b
        if b.is_zero:
            return a
        p = a.prime
        vm = min(a.valuation, b.valuation)
        window = min(a.absolute_precision, b.absolute_precision) - vm
        mod = p**window
        s = (a.unit * p ** (a.valuation - vm) + b.unit * p ** (b.valuation - vm)) % mod
        if s == 0:
            # all trusted digits cancelled: zero at working precision
            return PadicNumber.zero(p)
        v = vp_int(s, p)
        prec = window - v
        if prec < GUARD_DIGITS:
            raise PrecisionExhausted(
                f"cancellation left {prec} trusted digits (guard {GUARD_DIGITS})"
            )
        return PadicNumber(p, vm + v, (s // p**v) % p**prec, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        mod = self.prime**self.precision
        return PadicNumber(self.prime, self.valuation, (mod - self.unit) % mod, self.precision)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        if self.is_zero or b.is_zero:
            return PadicNumber.zero(self.prime)
        prec = min(self.precision, b.precision)
        return PadicNumber(
            self.prime,
            self.valuation + b.valuation,
            (self.unit * b.unit) % self.prime**prec,
            prec,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        if b.is_zero:
            raise DivisionByZero("division by p-adic zero")
        if self.is_zero:
            return PadicNumber.zero(self.prime)
        prec = min(self.precision, b.precision)
        mod = self.prime**prec
        return PadicNumber(
            self.prime,
            self.valuation - b.valuation,
            (self.unit * pow(b.unit, -1, mod)) % mod,
            prec,
        )

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return PadicNumber.one(self.prime, self.precision)
        if self.is_zero:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return self
        mod = self.prime**self.precision
        return PadicNumber(
            self.prime,
            self.valuation * n,
            pow(self.unit, n, mod) if n > 0 else pow(pow(self.unit, -1, mod), -n, mod),
            self.precision,
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if other.prime != self.prime:
            return False
        if self.is_zero and other.is_zero:
            return True
        if self.is_zero or other.is_zero:
            # a canonical nonzero value has a genuine unit digit in its window
            return False
        p = self.prime
        vm = min(self.valuation, other.valuation)
        window = min(self.absolute_precision, other.absolute_precision) - vm
        ia = self.unit * p ** (self.valuation - vm)
        ib = other.unit * p ** (other.valuation - vm)
        return (ia - ib) % p**window == 0

    __hash__ = None

    # -- serialization / display ----------------------------------------

    def to_record(self) -> dict:
        return {
            "p": self.prime,
            "val": "inf" if self.is_zero else self.valuation,
            "unit": str(self.unit),
            "prec": self.precision,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PadicNumber":
        if rec["val"] == "inf":
            return cls.zero(rec["p"], rec["prec"])
        return cls(rec["p"], int(rec["val"]), int(rec["unit"]), int(rec["prec"]))

    def __repr__(self):
        if self.is_zero:
            return f"O({self.prime}^inf)"
        return f"{self.unit}*{self.prime}^{self.valuation} + O({self.prime}^{self.absolute_precision})"


def sum_all(terms, p=None, min_digits=None):
    """Sum with one cancellation accounting across all terms.

    Folding pairwise applies the guard to every partial sum, which can
    spuriously trip on intermediate cancellations that later terms repair;
    summing against the common window never does.  For terms whose true sum
    is zero the result is exactly zero, since each stored unit deviates from
    the true value by a multiple of p^(its absolute precision).

    min_digits lowers the guard for callers that only compare the result
    within a slack anyway, where a value hanging just below the window is
    still meaningful.
    """
    if min_digits is None:
        min_digits = GUARD_DIGITS
    terms = list(terms)
    if p is None:
        p = terms[0].prime
    nonzero = [t for t in terms if not t.is_zero]
    if not nonzero:
        return PadicNumber.zero(p)
    if any(t.prime != p for t in nonzero):
        raise ValueError("mixed primes in sum")
    vm = min(t.valuation for t in nonzero)
    window = min(t.absolute_precision for t in nonzero) - vm
    mod = p**window
    s = sum(t.unit * p ** (t.valuation - vm) for t in nonzero) % mod
    if s == 0:
        return PadicNumber.zero(p)
    v = vp_int(s, p)
    prec = window - v
    if prec < min_digits:
        raise PrecisionExhausted(
            f"cancellation left {prec} trusted digits (guard {min_digits})"
        )
    return PadicNumber(p, vm + v, (s // p**v) % p**prec, prec)


def eq_within(x: PadicNumber, y: PadicNumber, slack: int = GUARD_DIGITS) -> bool:
    """Equality up to `slack` digits below the common trust window.

    Constructed objects (represented values, refined null vectors) deviate
    from their defining equations in the last few digits once the deviation
    is amplified by divisions; certifications compare with guard slack.
    """
    if x.prime != y.prime:
        return False
    if x.is_zero and y.is_zero:
        return True
    if x.is_zero or y.is_zero:
        return (y if x.is_zero else x).precision <= slack
    p = x.prime
    vm = min(x.valuation, y.valuation)
    window = min(x.absolute_precision, y.absolute_precision) - vm - slack
    if window <= 0:
        return True
    ia = x.unit * p ** (x.valuation - vm)
    ib = y.unit * p ** (y.valuation - vm)
    return (ia - ib) % p**window == 0


def arith(a: PadicNumber, b: PadicNumber, op: str) -> PadicNumber:
    """Dispatch one of the four field operations by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# -- additive character -------------------------------------------------


class Phase:
    """A rational phase mod 1 (values of the standard additive character)."""

    __slots__ = ("value",)

    def __init__(self, value=0):
        self.value = Fraction(value) % 1

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.value + other.value)

    def __neg__(self):
        return Phase(-self.value)

    def __sub__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.value - other.value)

    def __eq__(self, other):
        if isinstance(other, Phase):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def to_str(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self):
        return f"Phase({self.to_str()})"


def psi(x: PadicNumber) -> Phase:
    """Standard additive character: the p-adic fractional part of x, mod 1."""
    if x.is_zero or x.valuation >= 0:
        return Phase(0)
    need = -x.valuation
    if need > min(x.precision, _working_precision):
        raise PrecisionExhausted(
            f"fractional part needs {need} digits, only {x.precision} trusted"
        )
    den = x.prime**need
    return Phase(Fraction(x.unit % den, den))


# -- square classes -----------------------------------------------------


def legendre(u: int, p: int) -> int:
    """Legendre symbol of a unit mod an odd prime, in {+1, -1}."""
    r = pow(u % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if legendre(u, p) == -1:
            return u
    raise ValueError(f"no non-residue found below {p}")


_TWO_ADIC_UNIT_REPS = {1: 1, 3: -5, 5: 5, 7: -1}


class SquareClass:
    """An element of Q_p^x / (Q_p^x)^2, held by its canonical representative.

    Representatives: {1, u, p, u*p} for odd p (u the smallest positive
    non-residue) and {1, -1, 2, -2, 5, -5, 10, -10} for p = 2.
    """

    __slots__ = ("prime", "rep")

    def __init__(self, prime: int, rep: int):
        self.prime = prime
        self.rep = rep

    @property
    def is_square(self) -> bool:
        return self.rep == 1

    def __mul__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        if other.prime != self.prime:
            raise ValueError("mixed primes in square-class product")
        return square_class_of_int(self.rep * other.rep, self.prime)

    def inverse(self) -> "SquareClass":
        # every class has order dividing 2
        return self

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        return self.prime == other.prime and self.rep == other.rep

    def __hash__(self):
        return hash((self.prime, self.rep))

    def __repr__(self):
        return f"SquareClass({self.prime}, {self.rep})"


def _classify(p: int, valuation: int, unit: int) -> SquareClass:
    if p == 2:
        rep = _TWO_ADIC_UNIT_REPS[unit % 8]
        if valuation % 2:
            rep *= 2
        return SquareClass(2, rep)
    rep = 1 if legendre(unit, p) == 1 else smallest_nonresidue(p)
    if valuation % 2:
        rep *= p
    return SquareClass(p, rep)


def square_class_of_int(n: int, p: int) -> SquareClass:
    if n == 0:
        raise ZeroInput("square class of zero")
    v = vp_int(n, p)
    return _classify(p, v, n // p**v if n > 0 else -((-n) // p**v))


def square_class(x: PadicNumber) -> SquareClass:
    if x.is_zero:
        raise ZeroInput("square class of zero")
    need = 3 if x.prime == 2 else 1
    if x.precision < need:
        raise PrecisionExhausted("not enough digits to read the square class")
    return _classify(x.prime, x.valuation, x.unit)


def is_square(x: PadicNumber) -> bool:
    return square_class(x).is_square


def all_square_classes(p: int) -> list[SquareClass]:
    if p == 2:
        return [SquareClass(2, r) for r in (1, -1, 2, -2, 5, -5, 10, -10)]
    u = smallest_nonresidue(p)
    return [SquareClass(p, r) for r in (1, u, p, u * p)]


def square_class_ball(a: PadicNumber) -> int:
    """Radius exponent k: v(b - a) >= v(a) + k forces b into a's square class.

    b = a(1 + p^k t) and 1 + p^k Z_p consists of squares for k = 1 (odd p)
    respectively k = 3 (p = 2).
    """
    if a.is_zero:
        raise ZeroInput("square-class ball around zero")
    return 3 if a.prime == 2 else 1


# -- square roots -------------------------------------------------------


def _sqrt_unit_mod(u: int, p: int, prec: int) -> int:
    """A square root of the unit u modulo p^prec (p odd), via Hensel."""
    r = None
    for c in range(1, p):
        if c * c % p == u % p:
            r = c
            break
    if r is None:
        raise NotASquare("unit is not a residue mod p")
    k = 1
    mod = p
    while k < prec:
        k = min(2 * k, prec)
        mod = p**k
        # Newton step on r^2 - u
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


def _sqrt_unit_mod2(u: int, prec: int) -> int:
    """A square root of u = 1 mod 8 modulo 2^prec, lifted bit by bit."""
    if u % 8 != 1:
        raise NotASquare("2-adic unit square roots need u = 1 mod 8")
    r = 1
    for k in range(3, prec):
        if (r * r - u) % 2 ** (k + 1):
            r += 2 ** (k - 1)
    return r % 2**prec


def sqrt(x: PadicNumber) -> PadicNumber:
    """Canonical square root (the one with the smaller unit integer)."""
    if x.is_zero:
        return x
    if x.valuation % 2:
        raise NotASquare("odd valuation")
    p = x.prime
    if p == 2:
        root = _sqrt_unit_mod2(x.unit, x.precision)
        prec = x.precision - 1  # 2-adic roots carry one digit less
        mod = 2**prec
    else:
        root = _sqrt_unit_mod(x.unit, p, x.precision)
        prec = x.precision
        mod = p**prec
    root %= mod
    root = min(root, mod - root)
    return PadicNumber(p, x.valuation // 2, root, prec)


# -- Hilbert symbol -----------------------------------------------------


def hilbert_symbol_int(a: int, b: int, p: int) -> int:
    """Hilbert symbol of two nonzero integers (exact, no precision)."""
    if a == 0 or b == 0:
        raise ZeroInput("Hilbert symbol needs nonzero entries")
    al, be = vp_int(a, p), vp_int(b, p)
    u, w = a // p**al, b // p**be
    if p == 2:
        eps_u = (u - 1) // 2 % 2
        eps_w = (w - 1) // 2 % 2
        om_u = (u * u - 1) // 8 % 2
        om_w = (w * w - 1) // 8 % 2
        e = eps_u * eps_w + al * om_w + be * om_u
        return -1 if e % 2 else 1
    s = 1
    if al % 2 and be % 2 and legendre(p - 1, p) == -1:
        s = -s
    if be % 2 and legendre(u % p, p) == -1:
        s = -s
    if al % 2 and legendre(w % p, p) == -1:
        s = -s
    return s


def hilbert_symbol(a: PadicNumber, b: PadicNumber) -> int:
    """(a, b)_p = +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution."""
    if a.is_zero or b.is_zero:
        raise ZeroInput("Hilbert symbol needs nonzero entries")
    if a.prime != b.prime:
        raise ValueError("mixed primes in Hilbert symbol")
    p = a.prime
    al, be = a.valuation, b.valuation
    u, w = a.unit, b.unit
    if p == 2:
        eps_u = (u - 1) // 2 % 2
        eps_w = (w - 1) // 2 % 2
        om_u = (u * u - 1) // 8 % 2
        om_w = (w * w - 1) // 8 % 2
        e = eps_u * eps_w + al * om_w + be * om_u
        return -1 if e % 2 else 1
    s = 1
    if al % 2 and be % 2 and legendre(p - 1, p) == -1:
        s = -s
    if be % 2 and legendre(u, p) == -1:
        s = -s
    if al % 2 and legendre(w, p) == -1:
        s = -s
    return s
