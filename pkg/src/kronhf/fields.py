"""Exact scalar arithmetic: the rationals and prime fields F_q.

Rationals are represented by ``fractions.Fraction`` (always in lowest terms,
positive denominator), prime-field elements by plain ints in ``[0, q)``.
Field objects bundle the arithmetic so matrix code stays field-agnostic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, ValidationError

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field Q. Singleton; use the module-level ``QQ``."""

    char = 0
    label = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise ValidationError(f"cannot coerce {x!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(a.denominator, a.numerator)

    def div(self, a, b):
        return a / b

    def parse(self, token: str):
        if "." in token:
            raise ValidationError(f"float literal {token!r} rejected; use p/q")
        return Fraction(token)

    def fmt(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational-field")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field F_q; elements are ints in [0, q)."""

    def __init__(self, q: int):
        if not isinstance(q, int) or not is_prime(q):
            raise ValidationError(f"{q} is not prime")
        self.q = q
        self.char = q
        self.label = str(q)
        self.zero = 0
        self.one = 1

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.q
        if isinstance(x, Fraction):
            if x.denominator % self.q == 0:
                raise ValidationError(f"denominator of {x} vanishes mod {self.q}")
            return x.numerator * pow(x.denominator, -1, self.q) % self.q
        raise ValidationError(f"cannot coerce {x!r} into F_{self.q}")

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.q)

    def div(self, a, b):
        return (a * self.inv(b)) % self.q

    def parse(self, token: str):
        if "." in token or "/" in token:
            raise ValidationError(f"prime-field entry {token!r} must be an integer")
        return int(token) % self.q

    def fmt(self, a) -> str:
        return str(a % self.q)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("prime-field", self.q))

    def __repr__(self):
        return f"GF({self.q})"


QQ = RationalField()


def field_from_label(label: str):
    """Inverse of ``field.label``, as used in the text file formats."""
    if label == "rational":
        return QQ
    if label.isdigit():
        return PrimeField(int(label))
    raise ValidationError(f"unknown field label {label!r}")


def parse_rational(token: str) -> Fraction:
    """Exact rational from a 'p/q' or integer string; float syntax rejected."""
    if not isinstance(token, str):
        raise ValidationError("rationals must be given as strings like '1/4'")
    if "." in token or "e" in token.lower():
        raise ValidationError(f"{token!r} is not an exact rational literal")
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational literal {token!r}") from exc


def check_eps(eps: Fraction) -> Fraction:
    """Validate a hyperfiniteness tolerance: 0 < eps < 1, exact."""
    if not isinstance(eps, Fraction):
        raise DomainError("eps must be an exact Fraction")
    if not (0 < eps < 1):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return eps
