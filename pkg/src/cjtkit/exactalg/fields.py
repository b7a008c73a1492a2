"""Scalar fields: the rationals and large prime fields.

Rational values are plain :class:`fractions.Fraction` objects (always in lowest
terms with a positive denominator).  Prime-field values are ``int`` in
``[0, p)``.  A field object converts inputs into its canonical representation;
matrices and polynomials carry their field so that mixed-mode arithmetic can be
refused instead of silently coerced.
"""

from __future__ import annotations

import random
from fractions import Fraction

# 2**31 - 1; used by the CLI whenever ``--field fp`` is given without a prime.
DEFAULT_PRIME = 2147483647
MIN_PRIME = 2**30


class FieldMismatchError(TypeError):
    """Raised when values from two different scalar fields meet."""


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def parse_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string exactly.  Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(f"floating-point value {value!r} is not exact; use 'p/q' strings")
    raise TypeError(f"cannot interpret {value!r} as a rational")


class RationalField:
    """The field Q."""

    characteristic = 0
    name = "QQ"

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return parse_rational(value)

    def inv(self, x: Fraction) -> Fraction:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def to_json(self, x: Fraction):
        return str(x) if x.denominator != 1 else x.numerator

    def random_nonzero(self, rng: random.Random, bound: int = 10**6) -> Fraction:
        return Fraction(rng.randint(1, bound))

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (RationalField, ())


class PrimeField:
    """GF(p) for a prime ``p > 2**30``; elements are ints in ``[0, p)``."""

    def __init__(self, p: int):
        p = int(p)
        if p <= MIN_PRIME:
            raise ValueError(f"prime field modulus must exceed 2^30, got {p}")
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def __call__(self, value) -> int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value % self.p
        q = parse_rational(value)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes mod {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def to_json(self, x: int):
        return x

    def random_nonzero(self, rng: random.Random, bound: int | None = None) -> int:
        return rng.randint(1, self.p - 1)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return PrimeField(p)


def random_prime(rng: random.Random) -> int:
    """A uniformly drawn 31-bit prime (between 2^30 and 2^31)."""
    while True:
        n = rng.randrange(MIN_PRIME + 1, 2**31) | 1
        if _is_probable_prime(n):
            return n


def parse_field(text: str):
    """Parse ``q`` / ``fp`` / ``fp:<prime>`` as used on the command line."""
    text = text.strip().lower()
    if text in ("q", "qq", "rational"):
        return QQ
    if text == "fp":
        return GF(DEFAULT_PRIME)
    if text.startswith("fp:"):
        return GF(int(text[3:]))
    raise ValueError(f"unknown field {text!r}; expected q, fp or fp:<prime>")


def check_same_field(a, b):
    if a != b:
        raise FieldMismatchError(f"cannot combine values over {a!r} and {b!r}")
    return a
