"""Exact arithmetic in Q and quadratic fields Q(sqrt d), places and absolute values.

Normalization of ``|x|_v`` (multiplicity one in the product formula):

* real place      ``|sigma(x)|``
* complex place   ``|sigma(x)|**2``
* finite place    ``p ** (-e*f*ord_v(x))`` with ``e*f = [k_v : Q_p]``

Finite places give exact :class:`LogValue` results; archimedean places give
certified intervals.  Comparisons of absolute values (``|x|_v`` against
``|y|_v``) are decided exactly, without numerics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import ConfigurationError, DomainError, FieldMismatchError, InvariantViolation
from .logvalue import DEFAULT_PRECISION, LogValue, log_bounds

# roots of unity in a quadratic field have order dividing 4 or 6
MAX_ROOT_OF_UNITY_ORDER = 12


@lru_cache(maxsize=None)
def _check_d(d: int) -> int:
    if d in (0, 1):
        raise ValueError(f"d = {d} does not define a quadratic field")
    if any(e > 1 for e in factorint(abs(d)).values()):
        raise ValueError(f"d = {d} is not squarefree")
    return d


def _common_d(d1: int | None, d2: int | None) -> int | None:
    if d1 is None:
        return d2
    if d2 is None or d1 == d2:
        return d1
    raise FieldMismatchError(f"elements of Q(sqrt {d1}) and Q(sqrt {d2}) cannot be mixed")


def valuation(n: int, p: int) -> int:
    """``v_p(n)`` for a nonzero integer."""
    if n == 0:
        raise DomainError("valuation of zero")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _strip(n: int, primes: Iterable[int]) -> int:
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    if n <= 1:
        return []
    return sorted(factorint(n))


class FieldElement:
    """``a + b*sqrt(d)`` with rational ``a, b``; ``d is None`` means the field Q.

    Rational elements (``b == 0``) may carry a field tag ``d``; they combine
    freely with elements of that field and with untagged rationals.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int | None = None):
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if d is None and b:
            raise ValueError("irrational part requires a field discriminant d")
        if d is not None:
            _check_d(d)
        self.a = a
        self.b = b
        self.d = d

    # -- constructors ------------------------------------------------------
    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int | None) -> "FieldElement":
        x = object.__new__(cls)
        x.a, x.b, x.d = a, b, d
        return x

    @staticmethod
    def coerce(x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, (int, Fraction)):
            return FieldElement._raw(Fraction(x), Fraction(0), None)
        raise TypeError(f"cannot interpret {x!r} as a field element")

    @property
    def field(self) -> "Field":
        return Field(self.d)

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            y = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement._raw(self.a + y.a, self.b + y.b, _common_d(self.d, y.d))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            y = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement._raw(self.a - y.a, self.b - y.b, _common_d(self.d, y.d))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            y = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        d = _common_d(self.d, y.d)
        if not self.b:
            return FieldElement._raw(self.a * y.a, self.a * y.b, d)
        if not y.b:
            return FieldElement._raw(self.a * y.a, self.b * y.a, d)
        return FieldElement._raw(
            self.a * y.a + self.b * y.b * d, self.a * y.b + self.b * y.a, d
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        if not self.b:
            return FieldElement._raw(1 / self.a, Fraction(0), self.d)
        n = self.norm()
        return FieldElement._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        try:
            y = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self * y.inverse()

    def __rtruediv__(self, other):
        return FieldElement.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement._raw(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> "FieldElement":
        return FieldElement._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        if not self.b:
            return self.a * self.a if self.d is not None else self.a
        return self.a * self.a - self.b * self.b * self.d

    def field_norm(self) -> Fraction:
        """Norm from the ambient field (``a**2`` for tagged rationals, ``a`` over Q)."""
        if self.d is None:
            return self.a
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a if self.d is not None else self.a

    def integral_decomposition(self) -> tuple[int, int, int]:
        """``(A, B, D)`` with ``self = (A + B*sqrt d) / D``, integers, ``D > 0``."""
        den = lcm(self.a.denominator, self.b.denominator)
        return int(self.a * den), int(self.b * den), den

    # -- comparisons / hashing ---------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        if self.a != other.a or self.b != other.b:
            return False
        return not self.b or self.d == other.d

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def Q(x) -> FieldElement:
    """Rational field element from an int, Fraction or ``'p/q'`` string."""
    return FieldElement(Fraction(x))


@dataclass(frozen=True)
class Place:
    """A normalized absolute value of ``Q`` or ``Q(sqrt d)``.

    ``kind`` is ``"real"``, ``"complex"`` or ``"finite"``.  For real places of a
    real quadratic field ``index`` 0 sends ``sqrt d`` to the positive root and
    index 1 to the negative one.  For finite places ``index`` selects the prime
    ideal above ``p`` when ``p`` splits.
    """

    kind: str
    d: int | None = None
    index: int = 0
    p: int = 0
    residue_degree: int = 1
    ramification: int = 1

    @property
    def is_archimedean(self) -> bool:
        return self.kind != "finite"

    @property
    def local_exponent(self) -> int:
        """``N_v`` of the triangle inequality: 1 real, 2 complex, 0 finite."""
        return {"real": 1, "complex": 2, "finite": 0}[self.kind]

    @property
    def local_degree(self) -> int:
        if self.kind == "finite":
            return self.residue_degree * self.ramification
        return 2 if self.kind == "complex" else 1

    @property
    def field(self) -> "Field":
        return Field(self.d)

    def sort_key(self) -> tuple:
        order = {"real": 0, "complex": 1, "finite": 2}[self.kind]
        return (order, self.p, self.index)

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.kind == "real":
            return f"inf:{self.index + 1}"
        if self.kind == "complex":
            return "cpx"
        return f"p={self.p}#{self.index}"


@dataclass(frozen=True)
class Field:
    """``Q`` when ``d is None``, otherwise ``Q(sqrt d)`` for squarefree ``d``."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None:
            try:
                _check_d(self.d)
            except ValueError as exc:
                raise ConfigurationError(str(exc)) from None

    @property
    def is_rational(self) -> bool:
        return self.d is None

    @property
    def degree(self) -> int:
        return 1 if self.d is None else 2

    def __call__(self, a=0, b=0) -> FieldElement:
        return FieldElement(a, b, self.d)

    def sqrt_d(self) -> FieldElement:
        if self.d is None:
            raise ValueError("Q has no generator sqrt(d)")
        return FieldElement(0, 1, self.d)

    @property
    def discriminant(self) -> int:
        if self.d is None:
            return 1
        return self.d if self.d % 4 == 1 else 4 * self.d

    def splitting(self, p: int) -> str:
        """``'split'``, ``'inert'`` or ``'ramified'`` from the Kronecker symbol."""
        if self.d is None:
            return "split"
        D = self.discriminant
        if D % p == 0:
            return "ramified"
        if p == 2:
            return "split" if D % 8 in (1, 7) else "inert"
        return "split" if pow(D % p, (p - 1) // 2, p) == 1 else "inert"

    def archimedean_places(self) -> tuple[Place, ...]:
        if self.d is None:
            return (Place("real", None, 0),)
        if self.d > 0:
            return (Place("real", self.d, 0), Place("real", self.d, 1))
        return (Place("complex", self.d, 0),)

    def places_above(self, p: int) -> tuple[Place, ...]:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if self.d is None:
            return (Place("finite", None, 0, p),)
        kind = self.splitting(p)
        if kind == "split":
            return (Place("finite", self.d, 0, p), Place("finite", self.d, 1, p))
        if kind == "inert":
            return (Place("finite", self.d, 0, p, residue_degree=2),)
        return (Place("finite", self.d, 0, p, ramification=2),)

    def places(self, primes: Iterable[int] = ()) -> frozenset[Place]:
        """Archimedean places plus every place above the given primes."""
        out = set(self.archimedean_places())
        for p in primes:
            out.update(self.places_above(p))
        return frozenset(out)

    def sqrt_bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational enclosure of ``sqrt|d|`` of width ``2**-bits``."""
        return _sqrt_bounds(abs(self.d), bits)

    def __str__(self) -> str:
        return "Q" if self.d is None else f"Q(sqrt({self.d}))"


@lru_cache(maxsize=256)
def _sqrt_bounds(n: int, bits: int) -> tuple[Fraction, Fraction]:
    r = isqrt(n << (2 * bits))
    scale = 1 << bits
    if r * r == n << (2 * bits):
        return Fraction(r, scale), Fraction(r, scale)
    return Fraction(r, scale), Fraction(r + 1, scale)


def field_of(xs: Iterable) -> Field:
    d = None
    for x in xs:
        d = _common_d(d, FieldElement.coerce(x).d)
    return Field(d)


def _check_place(x: FieldElement, v: Place) -> None:
    if x.d is not None and x.d != v.d:
        raise FieldMismatchError(f"{x} does not belong to the field of place {v}")
    if x.d is None and v.d is not None and not x.is_rational():
        raise FieldMismatchError(f"{x} does not belong to the field of place {v}")


# -- finite places ----------------------------------------------------------

@lru_cache(maxsize=4096)
def _padic_sqrt(d: int, p: int, k: int, index: int) -> int:
    """Square root of ``d`` modulo ``p**k`` in the embedding selected by ``index``."""
    mod = p**k
    if p == 2:
        # 2-adic root that is 1 mod 4; index 1 takes its negative
        x = 1
        j = 3
        while j <= k:
            if (x * x - d) % (1 << (j + 1)):
                x += 1 << (j - 1)
            j += 1
        r = x % mod
    else:
        roots = sqrt_mod(d % p, p, all_roots=True)
        r = min(roots)
        m = p
        while m < mod:
            m = min(m * m, mod)
            r = (r - (r * r - d) * pow(2 * r, -1, m)) % m
        r %= mod
    return r if index == 0 else (-r) % mod


def _ord_integral(A: int, B: int, v: Place) -> int:
    """``ord_v(A + B sqrt d)`` for integers ``A, B`` (not both zero)."""
    p = v.p
    if B == 0 or v.d is None:
        return v.ramification * valuation(A, p)
    vn = valuation(A * A - B * B * v.d, p)
    if v.ramification == 2:
        return vn
    if v.residue_degree == 2:
        return vn // 2
    k = vn + 1
    mod = p**k
    r = _padic_sqrt(v.d, p, k, v.index)
    image = (A + B * r) % mod
    if image == 0:
        return k
    return valuation(image, p)


def ord_at(x, v: Place) -> int:
    """Exact valuation of ``x`` at the finite place ``v`` (``ord_v(p) = e``)."""
    x = FieldElement.coerce(x)
    if v.kind != "finite":
        raise ValueError(f"{v} is not a finite place")
    if not x:
        raise DomainError("valuation of zero")
    _check_place(x, v)
    A, B, D = x.integral_decomposition()
    shift = v.ramification * valuation(D, v.p) if D > 1 else 0
    return _ord_integral(A, B, v) - shift


def sigma(x: FieldElement, v: Place) -> tuple[Fraction, Fraction]:
    """Real embedding ``sigma_v(x) = a + s*b*sqrt(d)`` as ``(a, s*b)``."""
    s = -1 if v.index == 1 else 1
    return x.a, s * x.b


def _real_abs_bounds(x: FieldElement, v: Place, bits: int) -> tuple[Fraction, Fraction]:
    a, b = sigma(x, v)
    if not b:
        return abs(a), abs(a)
    rlo, rhi = _sqrt_bounds(v.d, bits)
    if a == 0 or (a > 0) == (b > 0):
        return abs(a) + abs(b) * rlo, abs(a) + abs(b) * rhi
    # cancellation: divide the norm by the conjugate embedding instead
    n = abs(x.norm())
    return n / (abs(a) + abs(b) * rhi), n / (abs(a) + abs(b) * rlo)


def log_abs(x, v: Place, precision: int = DEFAULT_PRECISION) -> LogValue:
    """``log|x|_v``: exact at finite places, a certified interval otherwise."""
    x = FieldElement.coerce(x)
    if not x:
        raise DomainError("log|0|_v is undefined")
    _check_place(x, v)
    if v.kind == "finite":
        # ord_at counts the prime ideal, so ord(p) = e and only f remains
        e = ord_at(x, v)
        return LogValue({v.p: Fraction(-v.residue_degree * e)}, 0, 0, precision)
    if v.kind == "complex":
        lo, hi = log_bounds(_complex_abs(x, v), precision)
        return LogValue(None, lo, hi, precision)
    if v.d is None or not x.b:
        lo, hi = log_bounds(abs(x.a), precision)
        return LogValue(None, lo, hi, precision)
    alo, ahi = _real_abs_bounds(x, v, precision + 16)
    lo, _ = log_bounds(alo, precision)
    _, hi = log_bounds(ahi, precision)
    return LogValue(None, lo, hi, precision)


def _complex_abs(x: FieldElement, v: Place) -> Fraction:
    """``|sigma(x)|**2``, the normalized absolute value at a complex place."""
    return x.a * x.a - x.b * x.b * v.d


def _sign_real(a: Fraction, b: Fraction, d: int) -> int:
    """Exact sign of ``a + b*sqrt(d)`` for ``d > 0``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    return sa if a * a > b * b * d else sb


def abs_compare(x, y, v: Place) -> int:
    """Exact sign of ``|x|_v - |y|_v`` for nonzero ``x, y``."""
    x = FieldElement.coerce(x)
    y = FieldElement.coerce(y)
    if v.kind == "finite":
        ox, oy = ord_at(x, v), ord_at(y, v)
        return (oy > ox) - (oy < ox)
    if v.kind == "complex":
        nx, ny = _complex_abs(x, v), _complex_abs(y, v)
        return (nx > ny) - (nx < ny)
    if not x.b and not y.b:
        nx, ny = abs(x.a), abs(y.a)
        return (nx > ny) - (nx < ny)
    # real place of a real quadratic field: compare squares of embeddings
    z = x * x - y * y
    a, b = sigma(z, v)
    return _sign_real(a, b, v.d)


def abs_cmp_one(x, v: Place) -> int:
    """Exact sign of ``|x|_v - 1``."""
    return abs_compare(x, FieldElement(1, 0, v.d), v)


def relevant_places(xs: Sequence, field: Field | None = None) -> frozenset[Place]:
    """Archimedean places plus every finite place where some ``|x|_v != 1``."""
    xs = [FieldElement.coerce(x) for x in xs]
    if field is None:
        field = field_of(xs)
    out = set(field.archimedean_places())
    for x in xs:
        if not x:
            raise DomainError("relevant places of zero")
        A, B, D = x.integral_decomposition()
        n = A if field.d is None else A * A - B * B * field.d
        for p in set(prime_factors(D)) | set(prime_factors(n)):
            for v in field.places_above(p):
                if ord_at(x, v) != 0:
                    out.add(v)
    return frozenset(out)


def finite_and_archimedean(x, precision: int = DEFAULT_PRECISION) -> tuple[LogValue, LogValue]:
    """Sums of ``log|x|_v`` over finite and over archimedean places."""
    x = FieldElement.coerce(x)
    fin = LogValue.zero(precision)
    arch = LogValue.zero(precision)
    for v in relevant_places([x]):
        if v.is_archimedean:
            arch = arch + log_abs(x, v, precision)
        else:
            fin = fin + log_abs(x, v, precision)
    return fin, arch


def product_formula_residual(x, precision: int = DEFAULT_PRECISION) -> LogValue:
    """``sum_v log|x|_v`` as a certified interval (exact part folded in).

    The finite contributions are exact multiples of ``log p``; they are
    enclosed at ``precision`` and added to the archimedean interval, so the
    returned value has an empty exact part and an interval that must
    contain 0.
    """
    fin, arch = finite_and_archimedean(x, precision)
    return (fin + arch).collapse()


def is_root_of_unity(x) -> tuple[bool, int | None]:
    """``(True, order)`` if ``x**k == 1`` for some ``k >= 1``, else ``(False, None)``."""
    x = FieldElement.coerce(x)
    if not x:
        raise DomainError("zero is not a root of unity")
    if x.is_rational():
        if x.a == 1:
            return True, 1
        if x.a == -1:
            return True, 2
        return False, None
    if x.norm() != 1:
        return False, None
    power = x
    for k in range(1, MAX_ROOT_OF_UNITY_ORDER + 1):
        if power == 1:
            return True, k
        power = power * x
    return False, None


def _check_s(S: Iterable[Place], field: Field) -> list[Place]:
    S = list(S)
    missing = [v for v in field.archimedean_places() if v not in S]
    if missing:
        raise ConfigurationError(
            "S must contain every archimedean place; missing " + ", ".join(map(str, missing))
        )
    for v in S:
        if v.d != field.d:
            raise FieldMismatchError(f"place {v} is not a place of {field}")
    return S


def is_s_integral(x, S: Iterable[Place], field: Field | None = None) -> bool:
    """``ord_v(x) >= 0`` for every finite ``v`` outside ``S``.

    Decided without factoring: ``x`` is integral above ``p`` iff its trace
    and norm are ``p``-integral, so after removing the primes below ``S``
    both denominators must be 1.  Primes only partially covered by ``S``
    are checked place by place.
    """
    x = FieldElement.coerce(x)
    if field is None:
        field = x.field
    S = _check_s(S, field)
    if not x:
        return True
    covered = sorted({v.p for v in S if v.kind == "finite"})
    if field.d is None:
        dens = [x.a.denominator]
    else:
        dens = [x.trace().denominator, x.field_norm().denominator]
    if any(_strip(den, covered) != 1 for den in dens):
        return False
    for p in covered:
        for v in field.places_above(p):
            if v not in S and ord_at(x, v) < 0:
                return False
    return True


def is_s_unit(x, S: Iterable[Place], field: Field | None = None) -> bool:
    """True iff ``ord_v(x) == 0`` at every finite place outside ``S``."""
    x = FieldElement.coerce(x)
    if not x:
        raise DomainError("zero is not an S-unit")
    if field is None:
        field = x.field
    return is_s_integral(x, S, field) and is_s_integral(x.inverse(), S, field)


def parse_place(text: str, field: Field) -> Place:
    """Inverse of ``str(Place)``: ``inf:1``, ``inf:2``, ``cpx``, ``p=7#0``."""
    text = text.strip()
    if text.startswith("inf"):
        idx = int(text.split(":")[1]) - 1 if ":" in text else 0
        places = [v for v in field.archimedean_places() if v.kind == "real"]
        if idx >= len(places):
            raise ConfigurationError(f"{field} has no real place {text}")
        return places[idx]
    if text == "cpx":
        places = [v for v in field.archimedean_places() if v.kind == "complex"]
        if not places:
            raise ConfigurationError(f"{field} has no complex place")
        return places[0]
    if text.startswith("p="):
        body = text[2:]
        p, _, idx = body.partition("#")
        for v in field.places_above(int(p)):
            if v.index == int(idx or 0):
                return v
    raise ConfigurationError(f"cannot parse place {text!r}")


def _omega(d: int) -> FieldElement:
    """Second element of the integral basis ``{1, omega}`` of the maximal order."""
    if d % 4 == 1:
        return FieldElement(Fraction(1, 2), Fraction(1, 2), d)
    return FieldElement(0, 1, d)


def ideal_norm(elements: Sequence, d: int | None = None) -> Fraction:
    """Norm of the fractional ideal generated by nonzero ``elements``.

    Computed as the covolume of the generated lattice in the coordinates of
    an integral basis, so no factoring is involved.
    """
    from .lattice import covolume

    xs = [FieldElement.coerce(x) for x in elements]
    for x in xs:
        d = _common_d(d, x.d)
    xs = [x for x in xs if x]
    if not xs:
        raise DomainError("ideal generated by zero")
    if d is None:
        return covolume([(x.a,) for x in xs])
    omega = _omega(d)

    def coords(z: FieldElement) -> tuple[Fraction, Fraction]:
        c1 = z.b / omega.b
        return z.a - c1 * omega.a, c1

    gens = []
    for x in xs:
        gens.append(coords(x))
        gens.append(coords(x * omega))
    return covolume(gens)


def gcd_ideal_norm(a, b) -> int:
    """Norm of the integral ideal ``(aO + bO) ∩ O``.

    Its logarithm equals ``-sum_{v finite} log^- max(|a|_v, |b|_v)``.  Uses
    ``N(I ∩ O) = N(I) / N(I + O)``, valid because exponents satisfy
    ``max(e, 0) = e - min(e, 0)``.
    """
    a = FieldElement.coerce(a)
    b = FieldElement.coerce(b)
    if not a or not b:
        raise DomainError("gcd ideal of zero")
    d = _common_d(a.d, b.d)
    value = ideal_norm([a, b], d) / ideal_norm([a, b, 1], d)
    if value.denominator != 1:
        raise InvariantViolation("gcd ideal norm is not an integer")
    return int(value)
