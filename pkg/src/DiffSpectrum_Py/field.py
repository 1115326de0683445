"""Exact arithmetic in F_p and F_{p^n}.

Two realizations of the extension field live here:

- ``FieldCtx``: pure-Python polynomial arithmetic on ``FieldElement`` values. Exact
  for any exponent size and used wherever a handful of operations is needed.
- ``FieldTables``: numpy exp/log tables over the index codec
  ``idx(x) = sum(coeffs[i] * p**i)``. Used by the oracle, which touches every
  element of the field.

Polynomials over F_p are tuples of residues, constant term first, with trailing
zeros stripped (the zero polynomial is ``()``).

Examples:
    Building F_9 and squaring the adjoined root::

        ctx = FieldCtx.build(3, 2)
        alpha = ctx.element(3)
        assert ctx.mul(alpha, alpha) == ctx.embed(2)
"""

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from sympy.ntheory import factorint, isprime, legendre_symbol, primerange, sqrt_mod
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_div,
    gf_gcd,
    gf_irreducible_p,
    gf_mul,
    gf_pow_mod,
    gf_sub,
)

from DiffSpectrum_Py.constants import CharSign, FieldLimits, TableConstants
from DiffSpectrum_Py.debug_mode import DebugComponent, debug_method, debug_mode
from DiffSpectrum_Py.exceptions import (
    CapExceededError,
    FieldDivisionError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidPrimeError,
    NonResidueError,
    UnsupportedInputError,
)
from DiffSpectrum_Py.memory_monitor import BYTES_PER_ENTRY, ensure_memory_available

Poly = tuple[int, ...]
IndexArray = NDArray[np.int64]


def is_prime(m: int) -> bool:
    """Primality of m (False for m < 2)."""
    return bool(isprime(m))


def factorize(m: int) -> dict[int, int]:
    """Factor a positive integer.

    Args:
        m: Integer >= 1.

    Returns:
        Mapping prime -> exponent (empty for m = 1).
    """
    factors: dict[int, int] = factorint(m)
    return {int(r): int(e) for r, e in factors.items()}


def primes_between(low: int, high: int) -> list[int]:
    """Primes r with low <= r <= high, ascending."""
    return [int(r) for r in primerange(low, high + 1)]


def validate_prime(p: int, prime_cap: int = FieldLimits.PRIME_CAP) -> int:
    """Check that p is an odd prime below the cap.

    Args:
        p: Candidate characteristic.
        prime_cap: Exclusive upper bound on p.

    Returns:
        p unchanged.

    Raises:
        UnsupportedInputError: If p = 2.
        InvalidPrimeError: If p is not a prime in [3, prime_cap).
    """
    if p == 2:
        raise UnsupportedInputError("Characteristic 2 is not supported", context={"p": p})
    if p < FieldLimits.SMALLEST_PRIME or not is_prime(p):
        raise InvalidPrimeError(f"{p} is not an odd prime", context={"p": p})
    if p >= prime_cap:
        raise InvalidPrimeError(
            "Prime exceeds the supported bound", context={"p": p, "cap": prime_cap}
        )
    return p


def legendre(c: int, p: int) -> CharSign:
    """Legendre symbol (c/p) for an odd prime p."""
    value: int = legendre_symbol(c % p, p)
    return CharSign(int(value))


def sqrt_mod_p(c: int, p: int) -> int:
    """Square root modulo an odd prime.

    Args:
        c: A nonzero quadratic residue mod p.
        p: Odd prime.

    Returns:
        The smaller of the two roots r and p - r.

    Raises:
        NonResidueError: If legendre(c, p) is not +1.
    """
    c %= p
    if legendre(c, p) != CharSign.PLUS:
        raise NonResidueError(f"{c} is not a nonzero square mod {p}", context={"c": c, "p": p})
    root: int = sqrt_mod(c, p)
    r = int(root)
    return min(r, p - r)


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p with a validated odd characteristic."""

    p: int

    def __post_init__(self) -> None:
        """Validate the characteristic."""
        validate_prime(self.p)

    def legendre(self, c: int) -> CharSign:
        """Quadratic character of c in F_p."""
        return legendre(c, self.p)

    def sqrt(self, c: int) -> int:
        """Canonical square root of c in F_p."""
        return sqrt_mod_p(c, self.p)


# Polynomials over F_p


def poly_trim(coeffs: Sequence[int]) -> Poly:
    """Strip trailing zero coefficients."""
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def _to_gf(a: Sequence[int], p: int) -> list[int]:
    """Constant-first residues to a dense list with the leading coefficient first."""
    return [ZZ(c) for c in reversed(poly_trim([c % p for c in a]))]


def _from_gf(f: Sequence[int]) -> Poly:
    return tuple(int(c) for c in reversed(f))


def poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    """Return a - b."""
    diff: list[int] = gf_sub(_to_gf(a, p), _to_gf(b, p), p, ZZ)
    return _from_gf(diff)


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    """Return a * b."""
    product: list[int] = gf_mul(_to_gf(a, p), _to_gf(b, p), p, ZZ)
    return _from_gf(product)


def poly_divmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    """Euclidean division a = quotient * b + remainder.

    Raises:
        FieldDivisionError: If b is the zero polynomial.
    """
    if not poly_trim([c % p for c in b]):
        raise FieldDivisionError("Polynomial division by zero")
    quot: list[int]
    rem: list[int]
    quot, rem = gf_div(_to_gf(a, p), _to_gf(b, p), p, ZZ)
    return _from_gf(quot), _from_gf(rem)


def poly_mod(a: Poly, m: Poly, p: int) -> Poly:
    """Return a mod m."""
    return poly_divmod(a, m, p)[1]


def poly_gcd(a: Poly, b: Poly, p: int) -> Poly:
    """Monic greatest common divisor (``()`` when both are zero)."""
    gcd: list[int] = gf_gcd(_to_gf(a, p), _to_gf(b, p), p, ZZ)
    return _from_gf(gcd)


def poly_pow_mod(base: Poly, e: int, m: Poly, p: int) -> Poly:
    """Return base^e mod m."""
    if e == 0:
        return poly_mod((1,), m, p)
    power: list[int] = gf_pow_mod(_to_gf(base, p), e, _to_gf(m, p), p, ZZ)
    return _from_gf(power)


def has_root_in_extension(f: Poly, p: int, k: int) -> bool:
    """Check whether f has a root in F_{p^k}, i.e. gcd(f, x^(p^k) - x) != 1."""
    x: Poly = (0, 1)
    h = poly_pow_mod(x, p**k, f, p)
    return poly_gcd(poly_sub(h, x, p), f, p) != (1,)


def is_irreducible(f: Poly, p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Args:
        f: Monic polynomial, constant term first.
        p: Odd prime.

    Returns:
        True if f is irreducible; False for non-monic or constant input.
    """
    if len(f) < 2 or f[-1] != 1:
        return False
    return bool(gf_irreducible_p(_to_gf(f, p), p, ZZ))


@lru_cache(maxsize=256)
def find_irreducible(p: int, n: int) -> Poly:
    """First monic irreducible of degree n in lexicographic order.

    Candidates are enumerated with the constant term varying fastest.

    Args:
        p: Odd prime.
        n: Degree >= 1.

    Returns:
        Coefficients of the modulus, constant term first, leading 1 included.

    Raises:
        InvalidInputError: If n < 1.
    """
    if n < 1:
        raise InvalidInputError("Extension degree must be positive", context={"n": n})
    for m in range(p**n):
        lower = [(m // p**i) % p for i in range(n)]
        if n > 1 and lower[0] == 0:
            continue
        candidate = (*lower, 1)
        if is_irreducible(candidate, p):
            debug_mode.debug("Found modulus", DebugComponent.FIELD, p=p, n=n, modulus=candidate)
            return candidate
    raise InternalConsistencyError("No irreducible polynomial found", context={"p": p, "n": n})


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{p^n} as its length-n coefficient vector over Z_p."""

    coeffs: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        """True for the additive identity."""
        return not any(self.coeffs)


@dataclass(frozen=True)
class FieldCtx:
    """A concrete realization of F_{p^n} = F_p[x] / (modulus).

    Attributes:
        p: Odd prime characteristic.
        n: Extension degree.
        modulus: Monic irreducible polynomial of degree n, constant term first.
        order: p^n.
    """

    p: int
    n: int
    modulus: Poly
    order: int

    def __post_init__(self) -> None:
        """Check the modulus and order."""
        if self.order != self.p**self.n:
            raise InvalidInputError("order must equal p^n", context={"order": self.order})
        if len(self.modulus) != self.n + 1 or not is_irreducible(self.modulus, self.p):
            raise InvalidInputError(
                "modulus is not a monic irreducible of degree n", context={"modulus": self.modulus}
            )

    @classmethod
    def build(
        cls,
        p: int,
        n: int,
        *,
        cap: int | None = FieldLimits.BRUTE_CAP,
        prime_cap: int = FieldLimits.PRIME_CAP,
    ) -> "FieldCtx":
        """Construct F_{p^n} with the deterministic modulus.

        Args:
            p: Odd prime.
            n: Extension degree >= 1.
            cap: Largest allowed p^n, or None for no limit.
            prime_cap: Exclusive bound on p.

        Returns:
            The field context.

        Raises:
            InvalidInputError: If p or n is invalid.
            CapExceededError: If p^n exceeds cap.
        """
        validate_prime(p, prime_cap)
        if n < 1:
            raise InvalidInputError("Extension degree must be positive", context={"n": n})
        order = p**n
        if cap is not None and order > cap:
            raise CapExceededError(
                "Field too large for explicit construction", context={"order": order, "cap": cap}
            )
        return cls(p, n, find_irreducible(p, n), order)

    def _wrap(self, poly: Poly) -> FieldElement:
        reduced = poly_mod(poly, self.modulus, self.p)
        return FieldElement(reduced + (0,) * (self.n - len(reduced)))

    def zero(self) -> FieldElement:
        """Additive identity."""
        return FieldElement((0,) * self.n)

    def one(self) -> FieldElement:
        """Multiplicative identity."""
        return self.embed(1)

    def embed(self, c: int) -> FieldElement:
        """Image of the integer c under Z -> F_p -> F_{p^n}."""
        return FieldElement((c % self.p,) + (0,) * (self.n - 1))

    def element(self, idx: int) -> FieldElement:
        """Decode a canonical index in [0, p^n).

        Raises:
            InvalidInputError: If idx is out of range.
        """
        if not 0 <= idx < self.order:
            raise InvalidInputError("Element index out of range", context={"idx": idx})
        return FieldElement(tuple((idx // self.p**i) % self.p for i in range(self.n)))

    def index(self, x: FieldElement) -> int:
        """Canonical index sum(coeffs[i] * p^i)."""
        return sum(c * self.p**i for i, c in enumerate(x.coeffs))

    def elements(self) -> Iterator[FieldElement]:
        """All elements in index order."""
        return (self.element(i) for i in range(self.order))

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        """x + y."""
        pairs = zip(x.coeffs, y.coeffs, strict=True)
        return FieldElement(tuple((a + b) % self.p for a, b in pairs))

    def sub(self, x: FieldElement, y: FieldElement) -> FieldElement:
        """x - y."""
        pairs = zip(x.coeffs, y.coeffs, strict=True)
        return FieldElement(tuple((a - b) % self.p for a, b in pairs))

    def neg(self, x: FieldElement) -> FieldElement:
        """-x."""
        return FieldElement(tuple(-a % self.p for a in x.coeffs))

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        """x * y."""
        return self._wrap(poly_mul(poly_trim(x.coeffs), poly_trim(y.coeffs), self.p))

    def pow(self, x: FieldElement, e: int) -> FieldElement:
        """x^e for e >= 0, with 0^e = 0 for e > 0 and x^0 = 1.

        Raises:
            InvalidInputError: If e is negative.
        """
        if e < 0:
            raise InvalidInputError("Exponent must be nonnegative", context={"e": e})
        if e == 0:
            return self.one()
        if x.is_zero:
            return self.zero()
        reduced = e % (self.order - 1)
        return self._wrap(poly_pow_mod(poly_trim(x.coeffs), reduced, self.modulus, self.p))

    def inv(self, x: FieldElement) -> FieldElement:
        """Multiplicative inverse.

        Raises:
            FieldDivisionError: If x is zero.
        """
        if x.is_zero:
            raise FieldDivisionError("Inverse of zero", context={"p": self.p, "n": self.n})
        return self.pow(x, self.order - 2)

    def eta(self, x: FieldElement) -> CharSign:
        """Quadratic character via x^((q-1)/2)."""
        if x.is_zero:
            return CharSign.ZERO
        return CharSign.PLUS if self.pow(x, (self.order - 1) // 2) == self.one() else CharSign.MINUS

    def multiplication_matrix(self, h: FieldElement) -> list[list[int]]:
        """Matrix of y -> h*y in the basis 1, alpha, ..., alpha^(n-1).

        Entry [i][j] is coefficient i of h * alpha^j.
        """
        columns = [
            self.mul(h, FieldElement(tuple(int(i == j) for i in range(self.n)))).coeffs
            for j in range(self.n)
        ]
        return [[columns[j][i] for j in range(self.n)] for i in range(self.n)]


class FieldArithmetic(NamedTuple):
    """Bound arithmetic suite of one field."""

    add: Callable[[FieldElement, FieldElement], FieldElement]
    sub: Callable[[FieldElement, FieldElement], FieldElement]
    neg: Callable[[FieldElement], FieldElement]
    mul: Callable[[FieldElement, FieldElement], FieldElement]
    inv: Callable[[FieldElement], FieldElement]
    pow: Callable[[FieldElement, int], FieldElement]


def ext_arith(ctx: FieldCtx) -> FieldArithmetic:
    """Return the arithmetic suite {add, sub, neg, mul, inv, pow} of ctx."""
    return FieldArithmetic(ctx.add, ctx.sub, ctx.neg, ctx.mul, ctx.inv, ctx.pow)


def eta(ctx: FieldCtx, x: FieldElement) -> CharSign:
    """Quadratic character of x in ctx."""
    return ctx.eta(x)


def validate_degree(n: int) -> int:
    """Check that the extension degree is positive.

    Raises:
        InvalidInputError: If n < 1.
    """
    if n < 1:
        raise InvalidInputError("Extension degree must be positive", context={"n": n})
    return n


def eta_base(c: int, p: int, n: int) -> CharSign:
    """Quadratic character in F_{p^n} of the base-field constant c.

    Every element of F_p is a square in F_{p^n} when n is even.
    """
    c %= p
    if c == 0:
        return CharSign.ZERO
    if n % 2 == 0:
        return CharSign.PLUS
    return legendre(c, p)


def odd_prime_powers(max_order: int) -> list[tuple[int, int]]:
    """All (p, n) with p odd prime and 3 < p^n <= max_order, sorted by (p^n, p)."""
    pairs: list[tuple[int, int]] = []
    for p in primes_between(FieldLimits.SMALLEST_PRIME, max_order):
        q, n = p, 1
        while q <= max_order:
            if q > 3:
                pairs.append((p, n))
            q *= p
            n += 1
    pairs.sort(key=lambda pn: (pn[0] ** pn[1], pn[0]))
    return pairs


@debug_method(DebugComponent.FIELD)
def find_generator(ctx: FieldCtx) -> FieldElement:
    """First element in index order that generates the multiplicative group."""
    group = ctx.order - 1
    cofactors = [group // r for r in factorize(group)]
    one = ctx.one()
    for idx in range(1, ctx.order):
        g = ctx.element(idx)
        if all(ctx.pow(g, c) != one for c in cofactors):
            return g
    raise InternalConsistencyError("No primitive element found", context={"order": ctx.order})


@dataclass(frozen=True, eq=False)
class FieldTables:
    """numpy exp/log tables of F_{p^n} over the index codec.

    Attributes:
        ctx: The field.
        generator: Index of the primitive element g.
        exp: exp[k] = idx(g^k) for 0 <= k < q - 1.
        log: log[idx(x)] = k with g^k = x; log[0] = -1.
        place: Positional weights p^i.
    """

    ctx: FieldCtx
    generator: int
    exp: IndexArray
    log: IndexArray
    place: IndexArray

    @classmethod
    def build(
        cls, ctx: FieldCtx, memory_fraction: float = TableConstants.MEMORY_FRACTION
    ) -> "FieldTables":
        """Fill the exp table by block doubling and invert it into the log table.

        The block exp[m : 2m] is exp[0 : m] multiplied by g^m, applied to the
        digit vectors as one F_p-linear map.

        Args:
            ctx: Field to tabulate.
            memory_fraction: Share of available memory the two tables may use.

        Returns:
            The tables.

        Raises:
            CapExceededError: If the tables do not fit in memory.
            InternalConsistencyError: If the generator is not primitive.
        """
        q, p = ctx.order, ctx.p
        ensure_memory_available(2 * q * BYTES_PER_ENTRY, memory_fraction, "field tables")
        g = find_generator(ctx)
        place = np.array([p**i for i in range(ctx.n)], dtype=np.int64)

        exp = np.empty(q - 1, dtype=np.int64)
        exp[0] = 1
        filled = 1
        while filled < q - 1:
            step = min(filled, q - 1 - filled)
            shift = np.array(ctx.multiplication_matrix(ctx.pow(g, filled)), dtype=np.int64)
            for start in range(0, step, TableConstants.CHUNK_ROWS):
                stop = min(start + TableConstants.CHUNK_ROWS, step)
                digits = (exp[start:stop, None] // place[None, :]) % p
                exp[filled + start : filled + stop] = ((digits @ shift.T) % p) @ place
            filled += step

        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if int(np.count_nonzero(log < 0)) != 1:
            raise InternalConsistencyError("Generator does not span the field", context={"q": q})

        generator = ctx.index(g)
        debug_mode.debug(
            "Built field tables", DebugComponent.FIELD, p=p, n=ctx.n, generator=generator
        )
        return cls(ctx, generator, exp, log, place)

    @property
    def p(self) -> int:
        """Characteristic."""
        return self.ctx.p

    @property
    def order(self) -> int:
        """Field size q."""
        return self.ctx.order

    def elements(self) -> IndexArray:
        """All indices 0..q-1."""
        return np.arange(self.order, dtype=np.int64)

    def embed(self, c: int) -> int:
        """Index of the base-field constant c."""
        return c % self.p

    def digits(self, a: ArrayLike) -> NDArray[np.int64]:
        """Coefficient vectors, shape (..., n)."""
        arr = np.asarray(a, dtype=np.int64)
        return (arr[..., None] // self.place) % self.p

    def add(self, a: ArrayLike, b: ArrayLike) -> IndexArray:
        """Elementwise a + b."""
        x, y = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        for weight in self.place:
            out += (((x // weight) + (y // weight)) % self.p) * weight
        return out

    def neg(self, a: ArrayLike) -> IndexArray:
        """Elementwise -a."""
        x = np.asarray(a, dtype=np.int64)
        out = np.zeros(x.shape, dtype=np.int64)
        for weight in self.place:
            out += (-(x // weight) % self.p) * weight
        return out

    def sub(self, a: ArrayLike, b: ArrayLike) -> IndexArray:
        """Elementwise a - b."""
        return self.add(a, self.neg(b))

    def mul(self, a: ArrayLike, b: ArrayLike) -> IndexArray:
        """Elementwise a * b."""
        x, y = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        product = self.exp[(self.log[x] + self.log[y]) % (self.order - 1)]
        return np.where((x == 0) | (y == 0), 0, product)

    def inv(self, a: ArrayLike) -> IndexArray:
        """Elementwise inverse.

        Raises:
            FieldDivisionError: If any entry is zero.
        """
        x = np.asarray(a, dtype=np.int64)
        if np.any(x == 0):
            raise FieldDivisionError("Inverse of zero", context={"q": self.order})
        return self.exp[(-self.log[x]) % (self.order - 1)]

    def power(self, a: ArrayLike, e: int) -> IndexArray:
        """Elementwise a^e with the 0^e conventions of FieldCtx.pow."""
        x = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones(x.shape, dtype=np.int64)
        group = self.order - 1
        raised = self.exp[(self.log[x] * (e % group)) % group]
        return np.where(x == 0, 0, raised)

    def eta(self, a: ArrayLike) -> NDArray[np.int8]:
        """Elementwise quadratic character: +1 on even logs, -1 on odd, 0 at zero."""
        x = np.asarray(a, dtype=np.int64)
        signs = np.where(self.log[x] % 2 == 0, 1, -1)
        return np.where(x == 0, 0, signs).astype(np.int8)

    def polyval(self, coeffs: Sequence[int], x: ArrayLike) -> IndexArray:
        """Horner evaluation of sum(coeffs[i] * x^i); coefficients are element indices."""
        points = np.asarray(x, dtype=np.int64)
        result = np.full(points.shape, coeffs[-1] if coeffs else 0, dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            result = self.add(self.mul(result, points), c)
        return result


@lru_cache(maxsize=8)
def build_tables(ctx: FieldCtx) -> FieldTables:
    """Cached FieldTables for ctx."""
    return FieldTables.build(ctx)
