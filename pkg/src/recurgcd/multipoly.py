"""Multivariate polynomials over Q or a quadratic field.

Terms are stored as a dict from exponent tuples to nonzero coefficients.
Coefficients are :class:`FieldElement` values; plain ints and Fractions are
coerced on the way in.  The gcd is the classical recursive one: content and
primitive part with respect to a main variable, subresultant remainder
sequence for the primitive parts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, NotDivisibleError
from .exactfield import FieldElement

Exponent = tuple[int, ...]


def _grlex_key(e: Exponent) -> tuple:
    return (sum(e), e)


def _coerce(c) -> FieldElement:
    return FieldElement.coerce(c)


class MultiPoly:
    """Immutable polynomial in ``nvars`` variables with exact coefficients."""

    __slots__ = ("nvars", "terms", "names", "_hash")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[Exponent, object] | None = None,
        names: Sequence[str] | None = None,
    ):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        clean: dict[Exponent, FieldElement] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = _coerce(c)
            if c:
                clean[e] = c
        self.terms = clean
        if names is not None and len(names) != nvars:
            raise ValueError("names must match nvars")
        self.names = tuple(names) if names is not None else None
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms, names=None) -> "MultiPoly":
        p = object.__new__(cls)
        p.nvars, p.terms, p.names, p._hash = nvars, terms, names, None
        return p

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, names=None) -> "MultiPoly":
        return cls._raw(nvars, {}, tuple(names) if names else None)

    @classmethod
    def constant(cls, c, nvars: int, names=None) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c}, names)

    @classmethod
    def var(cls, i: int, nvars: int, names=None) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, names)

    @classmethod
    def monomial(cls, e: Exponent, c=1, names=None) -> "MultiPoly":
        return cls(len(e), {tuple(e): c}, names)

    # -- basic properties --------------------------------------------------
    def variable_names(self) -> tuple[str, ...]:
        if self.names is not None:
            return self.names
        return tuple(f"x{i + 1}" for i in range(self.nvars))

    def with_names(self, names) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, self.terms, tuple(names) if names else None)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> FieldElement:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, FieldElement(0))

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, FieldElement]]:
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, FieldElement]:
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def field_d(self) -> int | None:
        d = None
        for c in self.terms.values():
            if c.d is not None:
                d = c.d
        return d

    def coefficients(self) -> list[FieldElement]:
        return [c for _, c in self.sorted_terms()]

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.nvars)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out, self.names or other.names)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = _coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return MultiPoly.zero(self.nvars, self.names)
            return MultiPoly._raw(self.nvars, {e: k * c for e, k in self.terms.items()}, self.names)
        self._check(other)
        out: dict[Exponent, FieldElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(
            self.nvars, {e: c for e, c in out.items() if c}, self.names or other.names
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.nvars, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "MultiPoly":
        return self * _coerce(c)

    def shift_monomial(self, e: Exponent) -> "MultiPoly":
        """Multiply by the monomial ``x**e``."""
        return MultiPoly._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(k, e)): c for k, c in self.terms.items()},
            self.names,
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation and substitution --------------------------------------
    def eval(self, point: Sequence) -> FieldElement:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(point)}")
        pts = [_coerce(x) for x in point]
        powers: list[dict[int, FieldElement]] = [{0: FieldElement(1)} for _ in pts]

        def pw(i: int, k: int) -> FieldElement:
            cache = powers[i]
            if k not in cache:
                cache[k] = pts[i] ** k
            return cache[k]

        total = FieldElement(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    __call__ = eval

    def specialize(self, i: int, value) -> "MultiPoly":
        """Substitute ``x_i = value``; the variable stays (with exponent 0)."""
        value = _coerce(value)
        out: dict[Exponent, FieldElement] = {}
        cache: dict[int, FieldElement] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k not in cache:
                cache[k] = value**k
            ne = e[:i] + (0,) + e[i + 1 :]
            s = out.get(ne)
            out[ne] = c * cache[k] if s is None else s + c * cache[k]
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c}, self.names)

    def drop_variable(self, i: int) -> "MultiPoly":
        """Remove variable ``i``, which must not occur."""
        if self.degree_in(i) > 0:
            raise ValueError(f"variable {i} occurs")
        names = None if self.names is None else self.names[:i] + self.names[i + 1 :]
        return MultiPoly._raw(
            self.nvars - 1, {e[:i] + e[i + 1 :]: c for e, c in self.terms.items()}, names
        )

    def substitute(self, i: int, poly: "MultiPoly") -> "MultiPoly":
        """Substitute ``x_i = poly`` (a polynomial in the same variables)."""
        self._check(poly)
        result = MultiPoly.zero(self.nvars, self.names)
        by_power: dict[int, dict[Exponent, FieldElement]] = {}
        for e, c in self.terms.items():
            by_power.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1 :]] = c
        power = MultiPoly.constant(1, self.nvars)
        for k in range(max(by_power, default=-1) + 1):
            if k in by_power:
                result = result + MultiPoly._raw(self.nvars, by_power[k]) * power
            power = power * poly
        return result

    def homogenize(self, total_degree: int | None = None) -> "MultiPoly":
        """Add a new first variable ``x0`` padding every term to ``total_degree``."""
        deg = self.degree()
        if total_degree is None:
            total_degree = max(deg, 0)
        if total_degree < deg:
            raise ValueError(f"total degree {total_degree} below polynomial degree {deg}")
        names = ("x0",) + self.variable_names()
        return MultiPoly._raw(
            self.nvars + 1,
            {(total_degree - sum(e),) + e: c for e, c in self.terms.items()},
            names,
        )

    def dehomogenize(self) -> "MultiPoly":
        """Set the first variable to 1 and drop it."""
        out: dict[Exponent, FieldElement] = {}
        for e, c in self.terms.items():
            ne = e[1:]
            s = out.get(ne)
            out[ne] = c if s is None else s + c
        names = None if self.names is None else self.names[1:]
        return MultiPoly._raw(self.nvars - 1, {e: c for e, c in out.items() if c}, names)

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent (the largest monomial dividing self)."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def divide_monomial(self, e: Exponent) -> "MultiPoly":
        return MultiPoly._raw(
            self.nvars,
            {tuple(a - b for a, b in zip(k, e)): c for k, c in self.terms.items()},
            self.names,
        )

    # -- univariate views --------------------------------------------------
    def as_univariate(self, i: int) -> dict[int, "MultiPoly"]:
        """Coefficients with respect to ``x_i`` (each free of ``x_i``)."""
        out: dict[int, dict[Exponent, FieldElement]] = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {k: MultiPoly._raw(self.nvars, t, self.names) for k, t in out.items()}

    @classmethod
    def from_univariate(cls, coeffs: Mapping[int, "MultiPoly"], i: int, nvars: int) -> "MultiPoly":
        out: dict[Exponent, FieldElement] = {}
        for k, p in coeffs.items():
            for e, c in p.terms.items():
                out[e[:i] + (k,) + e[i + 1 :]] = c
        return cls._raw(nvars, out)

    # -- exact division ----------------------------------------------------
    def divide_exact(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient ``self / other``; raises :class:`NotDivisibleError` if inexact."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            return self * other.constant_value().inverse()
        lead_e = max(other.terms)
        lead_inv = other.terms[lead_e].inverse()
        rest = [(e, c) for e, c in other.terms.items() if e != lead_e]
        rem = dict(self.terms)
        quotient: dict[Exponent, FieldElement] = {}
        while rem:
            e = max(rem)
            q_e = tuple(a - b for a, b in zip(e, lead_e))
            if any(k < 0 for k in q_e):
                raise NotDivisibleError("polynomial division is not exact")
            q_c = rem.pop(e) * lead_inv
            quotient[q_e] = q_c
            for e2, c2 in rest:
                t = tuple(a + b for a, b in zip(q_e, e2))
                s = rem.get(t)
                s = -q_c * c2 if s is None else s - q_c * c2
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MultiPoly._raw(self.nvars, quotient, self.names)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.divide_exact(self)
        except NotDivisibleError:
            return False
        return True

    def monic(self) -> "MultiPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        _, c = self.leading_term()
        return self * c.inverse()

    # -- rendering ---------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.variable_names()
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg = c.is_rational() and c.a < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("- " if neg else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self})"


# -- gcd machinery ------------------------------------------------------------

def _uni_degree(u: Mapping[int, MultiPoly]) -> int:
    return max(u, default=-1)


def _uni_mul_scalar(u: Mapping[int, MultiPoly], c: MultiPoly) -> dict[int, MultiPoly]:
    return {k: p * c for k, p in u.items()}


def _uni_prem(a: dict[int, MultiPoly], b: dict[int, MultiPoly]) -> dict[int, MultiPoly]:
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    db = _uni_degree(b)
    lb = b[db]
    r = dict(a)
    steps = _uni_degree(a) - db + 1
    while r and _uni_degree(r) >= db:
        dr = _uni_degree(r)
        lr = r[dr]
        shift = dr - db
        new = {k: p * lb for k, p in r.items() if k != dr}
        for k, p in b.items():
            if k == db:
                continue
            t = new.get(k + shift)
            prod = p * lr
            t = -prod if t is None else t - prod
            if t:
                new[k + shift] = t
            else:
                new.pop(k + shift, None)
        r = {k: p for k, p in new.items() if p}
        steps -= 1
    if steps > 0 and r:
        factor = lb**steps
        r = _uni_mul_scalar(r, factor)
    return r


def _uni_div_scalar(u: Mapping[int, MultiPoly], c: MultiPoly) -> dict[int, MultiPoly]:
    return {k: p.divide_exact(c) for k, p in u.items()}


def _content(f: MultiPoly, i: int) -> MultiPoly:
    coeffs = sorted(f.as_univariate(i).values(), key=lambda p: (len(p.terms), p.degree()))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    if g.is_constant():
        return MultiPoly.constant(1, f.nvars)
    return g.monic()


def _subresultant_gcd_primitive(f: MultiPoly, g: MultiPoly, i: int) -> MultiPoly:
    """Primitive gcd of primitive ``f, g`` (both of positive degree in ``x_i``)."""
    a, b = f.as_univariate(i), g.as_univariate(i)
    if _uni_degree(a) < _uni_degree(b):
        a, b = b, a
    one = MultiPoly.constant(1, f.nvars)
    gg, h = one, one
    while True:
        delta = _uni_degree(a) - _uni_degree(b)
        r = _uni_prem(a, b)
        if not r:
            last = b
            break
        if _uni_degree(r) == 0:
            return one
        a = b
        b = _uni_div_scalar(r, gg * h**delta)
        gg = a[_uni_degree(a)]
        if delta == 0:
            pass
        elif delta == 1:
            h = gg
        else:
            h = (gg**delta).divide_exact(h ** (delta - 1))
    res = MultiPoly.from_univariate(last, i, f.nvars)
    return res.divide_exact(_content(res, i))


def gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic greatest common divisor (``gcd(0, 0) = 0``)."""
    f._check(g)
    if not f.terms:
        return g.monic()
    if not g.terms:
        return f.monic()
    if f.is_constant() or g.is_constant():
        return MultiPoly.constant(1, f.nvars, f.names)
    common = f.support() & g.support()
    if not common:
        # no shared variable: only the contents can meet
        return MultiPoly.constant(1, f.nvars, f.names)
    used = f.support() | g.support()
    i = min(used, key=lambda k: (k not in common, max(f.degree_in(k), g.degree_in(k)), -k))
    cf, cg = _content(f, i), _content(g, i)
    c = gcd(cf, cg)
    pf, pg = f.divide_exact(cf), g.divide_exact(cg)
    if pf.degree_in(i) <= 0 or pg.degree_in(i) <= 0:
        h = MultiPoly.constant(1, f.nvars)
    else:
        h = _subresultant_gcd_primitive(pf, pg, i)
    return (c * h).monic().with_names(f.names)


def coprime(f: MultiPoly, g: MultiPoly) -> bool:
    """True iff ``gcd(f, g)`` is a nonzero constant."""
    if not f.terms or not g.terms:
        raise DomainError("coprimality with the zero polynomial")
    return gcd(f, g).is_constant()


def resultant(f: MultiPoly, g: MultiPoly, i: int, deg_f: int | None = None, deg_g: int | None = None) -> MultiPoly:
    """Sylvester resultant in ``x_i`` using formal degrees ``deg_f``, ``deg_g``.

    Computed by fraction-free (Bareiss) elimination with exact division.
    Formal degrees default to the actual ones.
    """
    f._check(g)
    a, b = f.as_univariate(i), g.as_univariate(i)
    m = _uni_degree(a) if deg_f is None else deg_f
    n = _uni_degree(b) if deg_g is None else deg_g
    if m < _uni_degree(a) or n < _uni_degree(b):
        raise ValueError("formal degree below actual degree")
    zero = MultiPoly.zero(f.nvars)
    if m <= 0 and n <= 0:
        return MultiPoly.constant(1, f.nvars)
    if m == 0:
        return a.get(0, zero) ** n
    if n == 0:
        return b.get(0, zero) ** m
    size = m + n
    M: list[list[MultiPoly]] = []
    for r in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[r + m - k] = a.get(k, zero)
        M.append(row)
    for r in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[r + n - k] = b.get(k, zero)
        M.append(row)
    return bareiss_det(M)


def bareiss_det(M: list[list[MultiPoly]]) -> MultiPoly:
    """Determinant of a square polynomial matrix by Bareiss elimination."""
    n = len(M)
    M = [list(r) for r in M]
    nv = M[0][0].nvars
    sign = 1
    prev = MultiPoly.constant(1, nv)
    for k in range(n - 1):
        if not M[k][k]:
            piv = next((r for r in range(k + 1, n) if M[r][k]), None)
            if piv is None:
                return MultiPoly.zero(nv)
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                M[r][c] = (M[r][c] * M[k][k] - M[r][k] * M[k][c]).divide_exact(prev)
            M[r][k] = MultiPoly.zero(nv)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def equalize_degrees(F: MultiPoly, G: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """``(F**deg G, G**deg F)``: two forms of the common degree ``deg F * deg G``."""
    dF, dG = F.degree(), G.degree()
    if dF == dG:
        return F, G
    return F**dG, G**dF


def parse_poly(text: str, names: Sequence[str], d: int | None = None) -> MultiPoly:
    from .parsing import parse_polynomial

    return parse_polynomial(text, names, d)


def polys_field(polys: Iterable[MultiPoly]) -> int | None:
    return reduce(lambda acc, p: p.field_d() or acc, polys, None)
