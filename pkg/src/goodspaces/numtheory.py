from __future__ import annotations

from math import gcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n)) if n > 1 else []


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_prime_power_of(n: int, p: int) -> bool:
    return n >= 1 and p_part(n, p) == n


def require_prime(p: int) -> int:
    from .errors import ValidationError

    if not isinstance(p, int) or not is_prime(p):
        raise ValidationError(f"{p!r} is not a prime")
    return p


__all__ = ["gcd", "is_prime", "factorize", "prime_divisors", "p_part", "is_prime_power_of", "require_prime"]
