"""Integer and small finite-field number theory."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int, rounds: int = 20) -> bool:
    """Miller-Rabin; deterministic below 3.3e24 with the fixed bases, probabilistic above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if any(witness(a) for a in _MR_BASES):
        return False
    if n < 3317044064679887385961981:
        return True
    rng = random.Random(n)
    return not any(witness(rng.randrange(2, n - 1)) for _ in range(rounds))


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n  # noqa: E731
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = gcd(abs(x - y), n)
        if d != n:
            return d


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    counts: dict[int, int] = {}
    rest = n
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
    p = 53
    while rest > 1 and p * p <= rest and p < 10000:
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
        p += 2
    stack = [rest] if rest > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            counts[x] = counts.get(x, 0) + 1
            continue
        r = isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        d = _pollard_rho(x)
        stack += [d, x // d]
    return Factorization(n, tuple(sorted(counts.items())))


def prime_factors(n: int) -> list[int]:
    return factorize(abs(n)).primes() if n else []


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_split(n: int) -> tuple[int, int]:
    """(a, s) with n = a^2 s and s squarefree (n >= 1)."""
    a, s = 1, 1
    for p, e in factorize(n).factors:
        a *= p ** (e // 2)
        if e % 2:
            s *= p
    return a, s


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel of a nonzero integer."""
    sgn = -1 if n < 0 else 1
    return sgn * squarefree_split(abs(n))[1]


def legendre(a: int, p: int) -> int:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def multiplicative_order(a: int, n: int) -> int:
    if gcd(a, n) != 1:
        raise ValueError("order undefined: not coprime")
    if n == 1:
        return 1
    # order divides Carmichael-ish bound; use totient via factorization
    phi = 1
    for p, e in factorize(n).factors:
        phi *= (p - 1) * p ** (e - 1)
    order = phi
    for p, _ in factorize(phi).factors if phi > 1 else ():
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def is_self_conjugate(q: int, p: int, f: int = 1) -> bool:
    """True iff q^t = -1 (mod p^f) for some t."""
    if gcd(q, p) != 1:
        raise ValueError("q and p must be coprime")
    mod = p ** f
    if mod == 2:
        return True  # -1 = 1
    o = multiplicative_order(q % mod, mod)
    return o % 2 == 0 and pow(q, o // 2, mod) == mod - 1


def self_conjugate_exponent(q: int, p: int, f: int = 1) -> int | None:
    """Smallest t with q^t = -1 mod p^f, or None."""
    if not is_self_conjugate(q, p, f):
        return None
    mod = p ** f
    return multiplicative_order(q % mod, mod) // 2 if mod > 2 else 0


def sum_two_squares(n: int) -> tuple[bool, tuple[int, int] | None]:
    """Decision by the factorization criterion plus a witness found by search."""
    if n < 0:
        return False, None
    if n == 0:
        return True, (0, 0)
    ok = all(e % 2 == 0 for p, e in factorize(n).factors if p % 4 == 3)
    if not ok:
        return False, None
    for x in range(isqrt(n) + 1):
        y2 = n - x * x
        y = isqrt(y2)
        if y * y == y2:
            return True, (x, y)
    raise AssertionError("criterion and search disagree")  # pragma: no cover


@dataclass(frozen=True)
class CubicDecomp:
    p: int
    c: int
    d: int


def solve_c27d(p: int) -> CubicDecomp:
    """Unique (c, d) with 4p = c^2 + 27 d^2, c = 1 mod 3, d >= 0."""
    if p % 3 != 1:
        raise ValueError("p must be 1 mod 3")
    for d in range(isqrt(4 * p // 27) + 1):
        c2 = 4 * p - 27 * d * d
        c = isqrt(c2)
        if c * c == c2:
            if c % 3 != 1:
                c = -c
            if c % 3 == 1:
                return CubicDecomp(p, c, d)
    raise ValueError(f"no decomposition for {p}")


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, f) with q = p^f, or None."""
    if q < 2:
        return None
    fac = factorize(q).factors
    return fac[0] if len(fac) == 1 else None


# --------------------------------------------------------------------------
# small finite fields

# irreducible polynomials over F_p, low-to-high coefficients, monic
_IRREDUCIBLE = {
    4: (2, (1, 1, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (1, 0, 1)),
    16: (2, (1, 1, 0, 0, 1)),
    25: (5, (2, 0, 1)),
    27: (3, (1, 2, 0, 1)),
    32: (2, (1, 0, 1, 0, 0, 1)),
    49: (7, (1, 0, 1)),
    64: (2, (1, 1, 0, 0, 0, 0, 1)),
    81: (3, (2, 0, 0, 1, 1)),
}
SUPPORTED_PRIME_POWERS = tuple(sorted(_IRREDUCIBLE))


class SmallField:
    """F_q with elements encoded as integers 0..q-1 (base-p digits of the polynomial)."""

    def __init__(self, q: int, p: int, f: int, add, mul, gamma: int):
        self.q, self.p, self.f = q, p, f
        self.add, self.mul, self.gamma = add, mul, gamma
        sub = [[0] * q for _ in range(q)]
        for x in range(q):
            for y in range(q):
                sub[add[x][y]][y] = x
        self._sub = tuple(tuple(r) for r in sub)
        exp, log = [], [-1] * q
        x = 1
        for k in range(q - 1):
            if log[x] != -1:
                raise ValueError(f"element {gamma} is not primitive in F_{q}")
            log[x] = k
            exp.append(x)
            x = mul[x][gamma]
        self._exp = tuple(exp)
        self.log = tuple(log)

    def __repr__(self) -> str:
        return f"SmallField(q={self.q}, gamma={self.gamma})"

    def sub(self, x: int, y: int) -> int:
        return self._sub[x][y]

    def neg(self, x: int) -> int:
        return self._sub[0][x]

    def exp(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self.log[x]) % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    def is_square(self, x: int) -> bool:
        return x == 0 or self.q % 2 == 0 or self.log[x] % 2 == 0


def _digits(x: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(ds))


def _poly_mulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    f = len(mod) - 1
    prod = [0] * (2 * f)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(2 * f - 1, f - 1, -1):
        t = prod[i]
        if t:
            for j in range(f + 1):
                prod[i - f + j] = (prod[i - f + j] - t * mod[j]) % p
    return prod[:f]


@lru_cache(maxsize=None)
def field(q: int) -> SmallField:
    """The field F_q for q prime or one of SUPPORTED_PRIME_POWERS."""
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    p, f = pp
    if f == 1:
        add = tuple(tuple((x + y) % p for y in range(p)) for x in range(p))
        mul = tuple(tuple((x * y) % p for y in range(p)) for x in range(p))
    elif q in _IRREDUCIBLE:
        mod = _IRREDUCIBLE[q][1]
        digs = [_digits(x, p, f) for x in range(q)]
        add = tuple(
            tuple(_undigits([(a + b) % p for a, b in zip(digs[x], digs[y])], p) for y in range(q)) for x in range(q)
        )
        mul = tuple(
            tuple(_undigits(_poly_mulmod(digs[x], digs[y], mod, p), p) for y in range(q)) for x in range(q)
        )
    else:
        raise ValueError(f"prime power {q} not supported")
    # smallest primitive element
    order_factors = prime_factors(q - 1)
    gamma = None
    for g in range(2 if q > 2 else 1, q):
        ok = True
        for r in order_factors:
            x, k = 1, (q - 1) // r
            # power by repeated multiplication through the table
            base, e = g, k
            x = 1
            while e:
                if e & 1:
                    x = mul[x][base]
                base = mul[base][base]
                e >>= 1
            if x == 1:
                ok = False
                break
        if ok:
            gamma = g
            break
    if gamma is None:
        raise AssertionError("no primitive element")  # pragma: no cover
    return SmallField(q, p, f, add, mul, gamma)
