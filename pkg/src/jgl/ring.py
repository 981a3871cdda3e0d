"""Exact base rings: the rationals and prime fields F_p with p >= 5.

Scalars are plain Python values: ``fractions.Fraction`` over the rationals,
``int`` in ``range(p)`` over a prime field.  All arithmetic goes through a
:class:`Ring` instance so callers never need to branch on the ring kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import RingError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """A computation domain: ``kind`` is ``"rational"`` or ``"prime_field"``.

    Prime fields insist on p >= 5 so 2 and 3 are always invertible; callers
    that need 2..m invertible for larger m declare it via
    :meth:`require_invertible_through`.
    """

    kind: str
    p: int = 0

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.p:
                raise RingError("rational ring takes no modulus")
        elif self.kind == "prime_field":
            if not _is_prime(self.p):
                raise RingError(f"{self.p} is not prime")
            if self.p < 5:
                raise RingError("prime field needs p >= 5 (2 and 3 invertible)")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational() -> "Ring":
        return Ring("rational")

    @staticmethod
    def prime_field(p: int) -> "Ring":
        return Ring("prime_field", p)

    @staticmethod
    def from_token(token: str) -> "Ring":
        """Parse CLI ring tokens: ``q``, ``f5``, ``f7``, ..."""
        t = token.strip().lower()
        if t == "q":
            return Ring.rational()
        if t.startswith("f") and t[1:].isdigit():
            return Ring.prime_field(int(t[1:]))
        raise RingError(f"unknown ring token {token!r}")

    # -- basic queries -----------------------------------------------------

    @property
    def is_field(self) -> bool:
        return True  # both supported rings are fields

    @property
    def is_finite(self) -> bool:
        return self.kind == "prime_field"

    def token(self) -> str:
        return "q" if self.kind == "rational" else f"f{self.p}"

    def invertible_through(self, m: int) -> bool:
        """True iff every integer in 2..m is invertible."""
        if self.kind == "rational":
            return True
        return self.p > m

    def require_invertible_through(self, m: int, context: str = "") -> None:
        if not self.invertible_through(m):
            where = f" for {context}" if context else ""
            raise RingError(
                f"ring {self.token()} does not invert all of 2..{m}{where}"
            )

    # -- arithmetic --------------------------------------------------------

    @property
    def zero(self):
        return 0 if self.kind == "prime_field" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "prime_field" else Fraction(1)

    def of(self, value):
        """Coerce an int / Fraction into a canonical scalar of this ring."""
        if self.kind == "prime_field":
            if isinstance(value, Fraction):
                return self.div(value.numerator % self.p, value.denominator % self.p)
            return int(value) % self.p
        return Fraction(value)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime_field" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime_field" else a - b

    def neg(self, a):
        return (-a) % self.p if self.kind == "prime_field" else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "prime_field" else a * b

    def inv(self, a):
        if self.kind == "prime_field":
            a %= self.p
            if a == 0:
                raise RingError("division by zero in F_p")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise RingError("division by zero in Q")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    # -- text form ---------------------------------------------------------

    def fmt(self, a) -> str:
        """Canonical string: ints ``n``, rationals ``a/b`` in lowest terms."""
        if self.kind == "prime_field":
            return str(a % self.p)
        f = Fraction(a)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def parse(self, text: str):
        """Inverse of :meth:`fmt`; rejects out-of-range / malformed scalars."""
        s = text.strip()
        if self.kind == "prime_field":
            try:
                n = int(s)
            except ValueError:
                raise RingError(f"bad F_{self.p} scalar {text!r}")
            if not 0 <= n < self.p:
                raise RingError(f"scalar {text!r} out of range for F_{self.p}")
            return n
        if "/" in s:
            num_s, den_s = s.split("/", 1)
            try:
                num, den = int(num_s), int(den_s)
            except ValueError:
                raise RingError(f"bad rational scalar {text!r}")
            if den == 0:
                raise RingError(f"zero denominator in {text!r}")
            f = Fraction(num, den)
            if (f.numerator, f.denominator) != (num, den):
                raise RingError(f"rational {text!r} not in lowest terms")
            return f
        try:
            return Fraction(int(s))
        except ValueError:
            raise RingError(f"bad rational scalar {text!r}")

    def to_json(self) -> dict:
        if self.kind == "rational":
            return {"kind": "rational"}
        return {"kind": "prime_field", "p": self.p}

    @staticmethod
    def from_json(obj) -> "Ring":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise RingError("ring JSON must be an object with a 'kind'")
        if obj["kind"] == "rational":
            return Ring.rational()
        if obj["kind"] == "prime_field":
            return Ring.prime_field(int(obj.get("p", 0)))
        raise RingError(f"unknown ring kind {obj['kind']!r}")


QQ = Ring.rational()
F5 = Ring.prime_field(5)
F7 = Ring.prime_field(7)
