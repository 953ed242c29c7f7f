"""Exact finite-field arithmetic: GF(p), GF(2^m), and extensions of GF(2^m).

Elements are canonical ints: residues for prime fields, polynomial bit
masks for GF(2^m), and base-order positional digit packs for extension
towers.  Field objects carry the arithmetic; 0 and 1 are the identities in
every representation.  All values are immutable and field objects are safe
to share between threads.

Published reduction polynomials for GF(2^m), m = 1..24 (bit mask includes
the leading term; e.g. x^4 + x + 1 -> 0b10011):

    m= 1: x+1                     m=13: x^13+x^4+x^3+x+1
    m= 2: x^2+x+1                 m=14: x^14+x^10+x^6+x+1
    m= 3: x^3+x+1                 m=15: x^15+x+1
    m= 4: x^4+x+1                 m=16: x^16+x^12+x^3+x+1
    m= 5: x^5+x^2+1               m=17: x^17+x^3+1
    m= 6: x^6+x+1                 m=18: x^18+x^7+1
    m= 7: x^7+x^3+1               m=19: x^19+x^5+x^2+x+1
    m= 8: x^8+x^4+x^3+x^2+1       m=20: x^20+x^3+1
    m= 9: x^9+x^4+1               m=21: x^21+x^2+1
    m=10: x^10+x^3+1              m=22: x^22+x+1
    m=11: x^11+x^2+1              m=23: x^23+x^5+1
    m=12: x^12+x^6+x^4+x+1        m=24: x^24+x^7+x^2+x+1

These fixed defaults keep shard files bit-exact across installations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    FieldKindUnsupported,
    NonPrimeModulus,
    ReduciblePolynomial,
)

MAX_PRIME = 1 << 31
MAX_BINARY_DEGREE = 24


def _poly_bits(*exponents: int) -> int:
    mask = 0
    for e in exponents:
        mask |= 1 << e
    return mask


DEFAULT_POLY = {
    1: _poly_bits(1, 0),
    2: _poly_bits(2, 1, 0),
    3: _poly_bits(3, 1, 0),
    4: _poly_bits(4, 1, 0),
    5: _poly_bits(5, 2, 0),
    6: _poly_bits(6, 1, 0),
    7: _poly_bits(7, 3, 0),
    8: _poly_bits(8, 4, 3, 2, 0),
    9: _poly_bits(9, 4, 0),
    10: _poly_bits(10, 3, 0),
    11: _poly_bits(11, 2, 0),
    12: _poly_bits(12, 6, 4, 1, 0),
    13: _poly_bits(13, 4, 3, 1, 0),
    14: _poly_bits(14, 10, 6, 1, 0),
    15: _poly_bits(15, 1, 0),
    16: _poly_bits(16, 12, 3, 1, 0),
    17: _poly_bits(17, 3, 0),
    18: _poly_bits(18, 7, 0),
    19: _poly_bits(19, 5, 2, 1, 0),
    20: _poly_bits(20, 3, 0),
    21: _poly_bits(21, 2, 0),
    22: _poly_bits(22, 1, 0),
    23: _poly_bits(23, 5, 0),
    24: _poly_bits(24, 7, 2, 1, 0),
}


def is_prime(n: int) -> bool:
    """Trial division; fine at desk scale (n < 2^31)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod_gf2(a: int, mod: int) -> int:
    dm = poly_degree(mod)
    while poly_degree(a) >= dm and a:
        a ^= mod << (poly_degree(a) - dm)
    return a


def is_irreducible_gf2(poly: int) -> bool:
    """Exhaustive trial division by all lower-degree GF(2) polynomials."""
    d = poly_degree(poly)
    if d < 1:
        return False
    if d == 1:
        return True
    if not poly & 1:  # x divides
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if poly_degree(g) > d // 2:
            break
        if _poly_mod_gf2(poly, g) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Declarative description of a field: prime GF(p) or binary GF(2^m)."""

    kind: str  # "prime" | "binary"
    p: int = 0
    m: int = 0
    poly: int = 0

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec(kind="prime", p=p)

    @staticmethod
    def binary(m: int, poly: int | None = None) -> "FieldSpec":
        if poly is None:
            poly = DEFAULT_POLY.get(m, 0)
        return FieldSpec(kind="binary", m=m, poly=poly)


class Field:
    """Common interface; subclasses implement the four basic operations."""

    kind: str
    order: int
    char: int

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, base = 1, a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def element(self, v: int) -> int:
        """Canonical representative of an int (reduces prime residues)."""
        raise NotImplementedError

    def elements(self):
        return range(self.order)

    def rand(self, rng) -> int:
        return rng.randrange(self.order)

    def element_order(self, a: int) -> int:
        """Multiplicative order, via the factorization of order-1."""
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.order - 1
        o = n
        for q in factorize(n):
            while o % q == 0 and self.pow(a, o // q) == 1:
                o //= q
        return o

    def is_generator(self, a: int) -> bool:
        return a != 0 and self.element_order(a) == self.order - 1

    def find_generator(self) -> int:
        if self.order == 2:
            return 1
        for cand in range(2, self.order):
            if self.is_generator(cand):
                return cand
        raise AssertionError("no generator found; field construction is broken")

    def __eq__(self, other):
        return type(self) is type(other) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p: int):
        if p > MAX_PRIME:
            raise FieldKindUnsupported(f"prime modulus {p} above supported bound 2^31")
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        self.order = p
        self.char = p
        self.spec = FieldSpec.prime(p)
        self.generator = self.find_generator()

    def add(self, a, b):
        return (a + b) % self.order

    def sub(self, a, b):
        return (a - b) % self.order

    def neg(self, a):
        return -a % self.order

    def mul(self, a, b):
        return a * b % self.order

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.order - 2, self.order)

    def element(self, v):
        return v % self.order

    def __repr__(self):
        return f"GF({self.order})"


class BinaryField(Field):
    """GF(2^m) in polynomial basis; elements are m-bit masks."""

    kind = "binary"

    def __init__(self, m: int, poly: int | None = None):
        if not 1 <= m <= MAX_BINARY_DEGREE:
            raise FieldKindUnsupported(f"extension degree {m} outside 1..{MAX_BINARY_DEGREE}")
        if poly is None:
            poly = DEFAULT_POLY[m]
        if poly_degree(poly) != m:
            raise ReduciblePolynomial(f"reduction polynomial degree {poly_degree(poly)} != m={m}")
        if not is_irreducible_gf2(poly):
            raise ReduciblePolynomial(f"polynomial {poly:#x} is reducible over GF(2)")
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self.char = 2
        self.spec = FieldSpec(kind="binary", m=m, poly=poly)
        # log/exp tables are worthwhile up to m=16 (512 KiB); beyond that
        # multiply directly.
        self._exp = self._log = None
        if m <= 16:
            self._build_tables()
        self.generator = self.find_generator()

    def _mul_raw(self, a: int, b: int) -> int:
        r = 0
        top = 1 << self.m
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            if a & top:
                a ^= self.poly
            b >>= 1
        return r

    def _build_tables(self):
        # x (mask 2) need not be primitive for a non-default polynomial, so
        # look for a table base among small elements.
        n = self.order - 1
        base = None
        for cand in (2, 3) + tuple(range(4, min(self.order, 64))):
            if cand >= self.order:
                break
            o, x = 1, cand
            ok = True
            while x != 1:
                x = self._mul_raw(x, cand)
                o += 1
                if o > n:
                    ok = False
                    break
            if ok and o == n:
                base = cand
                break
        if base is None:
            return
        exp = [1] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._mul_raw(x, base)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log, self._n = exp, log, n

    def add(self, a, b):
        return a ^ b

    sub = add

    def neg(self, a):
        return a

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is not None:
            return self._exp[self._n - self._log[a]]
        return self.pow(a, self.order - 2)

    def element(self, v):
        if not 0 <= v < self.order:
            raise ValueError(f"{v} is not an element mask of GF(2^{self.m})")
        return v

    def __repr__(self):
        return f"GF(2^{self.m})"


class ExtensionField(Field):
    """Degree-r extension of a binary base field, elements as digit packs.

    An element sum(c_i * y^i) is stored as the int sum(c_i * base.order^i);
    the base field embeds as the constant digit, so base-field ints keep
    their values.  Used for the rank-metric precoder's field tower.
    """

    kind = "tower"

    def __init__(self, base: Field, degree: int, reduction: tuple[int, ...]):
        if base.kind != "binary":
            raise FieldKindUnsupported("extension towers are built over GF(2^m) bases only")
        if degree < 2:
            raise FieldKindUnsupported("tower degree must be at least 2")
        if len(reduction) != degree + 1 or reduction[degree] != 1:
            raise ReduciblePolynomial("reduction polynomial must be monic of the tower degree")
        self.base = base
        self.degree = degree
        self.reduction = tuple(reduction)
        self.order = base.order**degree
        self.char = base.char
        self.spec = ("tower", base.spec, degree, self.reduction)
        if not self._reduction_irreducible():
            raise ReduciblePolynomial("tower reduction polynomial is reducible over the base")

    # --- digit packing ---
    def coords(self, a: int) -> tuple[int, ...]:
        q = self.base.order
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, q)
            out.append(c)
        return tuple(out)

    def from_coords(self, cs) -> int:
        q = self.base.order
        a = 0
        for c in reversed(list(cs)):
            a = a * q + c
        return a

    def embed(self, base_elem: int) -> int:
        return base_elem

    def scale(self, base_elem: int, a: int) -> int:
        """Multiply by an embedded base element, digit-wise."""
        mul = self.base.mul
        return self.from_coords(mul(base_elem, c) for c in self.coords(a))

    # --- arithmetic ---
    def add(self, a, b):
        q = self.base.order
        out = 0
        shift = 1
        for _ in range(self.degree):
            out += ((a % q) ^ (b % q)) * shift
            a //= q
            b //= q
            shift *= q
        return out

    sub = add

    def neg(self, a):
        return a

    def mul(self, a, b):
        ca, cb = self.coords(a), self.coords(b)
        r = self.degree
        bm = self.base.mul
        prod = [0] * (2 * r - 1)
        for i, ai in enumerate(ca):
            if ai:
                for j, bj in enumerate(cb):
                    if bj:
                        prod[i + j] ^= bm(ai, bj)
        for i in range(len(prod) - 1, r - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(r):
                    if self.reduction[j]:
                        prod[i - r + j] ^= bm(c, self.reduction[j])
        return self.from_coords(prod[:r])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def element(self, v):
        if not 0 <= v < self.order:
            raise ValueError("value outside tower field range")
        return v

    def frobenius(self, a: int) -> int:
        """a^(base order): the base-field-fixing automorphism."""
        return self.pow(a, self.base.order)

    def _reduction_irreducible(self) -> bool:
        # Distinct-degree test: y^(q^degree) == y mod f and
        # gcd(y^(q^d) - y, f) trivial for proper divisors d.
        r = self.degree
        y = self.from_coords([0, 1] + [0] * (r - 2))
        # Polynomial arithmetic mod the reduction happens inside this very
        # field's mul, so iterate the Frobenius through self.pow.
        cur = y
        for d in range(1, r + 1):
            cur = self.pow(cur, self.base.order)
            if d < r and r % d == 0:
                if self._gcd_nontrivial(self.sub(cur, y)):
                    return False
        return cur == y

    def _gcd_nontrivial(self, elem: int) -> bool:
        # gcd(poly_of(elem-as-poly-in-y), reduction) in the base poly ring.
        a = list(self.reduction)
        b = list(self.coords(elem)) + [0]
        bm, binv = self.base.mul, self.base.inv

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        while deg(b) >= 0:
            if deg(a) < deg(b):
                a, b = b, a
                continue
            da, db = deg(a), deg(b)
            lead = bm(a[da], binv(b[db]))
            for i in range(db + 1):
                if b[i]:
                    a[i + da - db] ^= bm(lead, b[i])
        return deg(a) != 0

    def __repr__(self):
        return f"GF(({self.base.order})^{self.degree})"


@lru_cache(maxsize=None)
def _cached_prime(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def _cached_binary(m: int, poly: int) -> BinaryField:
    return BinaryField(m, poly)


def field_create(spec: FieldSpec) -> Field:
    """Validated field handle from a spec; handles are cached and immutable."""
    if spec.kind == "prime":
        return _cached_prime(spec.p)
    if spec.kind == "binary":
        poly = spec.poly or DEFAULT_POLY.get(spec.m, 0)
        return _cached_binary(spec.m, poly)
    raise FieldKindUnsupported(f"unknown field kind {spec.kind!r}")


def prime_field(p: int) -> PrimeField:
    return field_create(FieldSpec.prime(p))


def binary_field(m: int, poly: int | None = None) -> BinaryField:
    return field_create(FieldSpec.binary(m, poly))
