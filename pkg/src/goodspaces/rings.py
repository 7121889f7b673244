"""Solid rings: F_p, Z, subrings Z[J^-1] of Q, and Z/n."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .numtheory import is_prime, require_prime


@dataclass(frozen=True)
class RingDescriptor:
    kind: str  # "Fp" | "Z" | "Zinv" | "Zmod"
    n: int = 0
    primes: frozenset[int] = frozenset()
    cofinite: bool = False  # Zinv only: invert every prime *except* ``primes``

    @property
    def is_field_p(self) -> bool:
        return self.kind == "Fp"

    @property
    def is_integers(self) -> bool:
        return self.kind == "Z"

    @property
    def p(self) -> int:
        if self.kind != "Fp":
            raise ValidationError(f"{self.text()} is not a prime field")
        return self.n

    def inverts(self, q: int) -> bool:
        if self.kind != "Zinv":
            return False
        return (q in self.primes) != self.cofinite

    def text(self) -> str:
        if self.kind == "Fp":
            return f"p:{self.n}"
        if self.kind == "Z":
            return "Z"
        if self.kind == "Zmod":
            return f"Zmod:{self.n}"
        body = ",".join(map(str, sorted(self.primes)))
        return f"Zinv:~{body}" if self.cofinite else f"Zinv:{body}"

    def __str__(self):
        return self.text()


def field(p: int) -> RingDescriptor:
    return RingDescriptor("Fp", require_prime(p))


def integers() -> RingDescriptor:
    return RingDescriptor("Z")


def z_invert(primes, cofinite: bool = False) -> RingDescriptor:
    ps = frozenset(int(q) for q in primes)
    for q in ps:
        require_prime(q)
    if not ps and not cofinite:
        return integers()
    return RingDescriptor("Zinv", primes=ps, cofinite=cofinite)


def zmod(n: int) -> RingDescriptor:
    if n < 2:
        raise ValidationError("Z/n needs n >= 2")
    # Z/p and F_p are the same ring; keep one spelling so F_p rules apply
    if is_prime(n):
        return field(n)
    return RingDescriptor("Zmod", n)


def parse_ring(text: str) -> RingDescriptor:
    """``p:<prime>``, ``Z``, ``Zinv:2,3`` (``Zinv:~2,3`` = all primes but 2, 3), ``Zmod:<n>``."""
    t = text.strip()
    try:
        if t == "Z":
            return integers()
        head, _, body = t.partition(":")
        if head == "p":
            return field(int(body))
        if head == "Zmod":
            return zmod(int(body))
        if head == "Zinv":
            cofinite = body.startswith("~")
            body = body.lstrip("~")
            primes = [int(x) for x in body.split(",") if x.strip()]
            return z_invert(primes, cofinite)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad ring {text!r}: {exc}") from None
    raise ValidationError(f"unknown ring {text!r}; expected p:<prime>, Z, Zinv:<primes>, or Zmod:<n>")
