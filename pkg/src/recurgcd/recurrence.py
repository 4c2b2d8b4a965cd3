"""Linear recurrence sequences ``F(n) = sum_i p_i(n) * alpha_i**n``.

The roots generate a multiplicative group; when it is torsion-free a
recurrence becomes a Laurent polynomial in ``t`` (standing for ``n``) and
generators ``x_j`` (standing for ``n -> u_j**n``).  Coprimality in that ring,
exceptional specializations, subsequence splitting, zero search and
S-integrality of quotients live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from sympy import factorint

from .errors import (
    ConfigurationError,
    DomainError,
    InvariantViolation,
    TorsionError,
    UnsupportedRelationError,
    ZeroRecurrenceError,
)
from .exactfield import (
    Field,
    FieldElement,
    Place,
    field_of,
    is_root_of_unity,
    is_s_integral,
    log_abs,
    relevant_places,
    abs_cmp_one,
    _sign_real,
)
from .lattice import hnf_with_transform
from .multipoly import MultiPoly, coprime, gcd, resultant
from .parsing import parse_element, parse_polynomial

T_NAMES = ("t",)


def t_poly(p) -> MultiPoly:
    """Coerce a constant or a univariate polynomial into a polynomial in ``t``."""
    if isinstance(p, MultiPoly):
        if p.nvars != 1:
            raise ValueError("coefficient polynomials must be univariate in t")
        return p.with_names(T_NAMES)
    return MultiPoly.constant(p, 1, T_NAMES)


class Recurrence:
    """Exact linear recurrence given by pairs ``(p_i(t), alpha_i)``.

    Equal roots are merged by adding their coefficient polynomials and zero
    coefficients are dropped; an empty result raises
    :class:`ZeroRecurrenceError`.
    """

    __slots__ = ("terms", "d")

    def __init__(self, terms: Iterable[tuple[object, object]]):
        merged: dict[FieldElement, MultiPoly] = {}
        order: list[FieldElement] = []
        for p, root in terms:
            root = FieldElement.coerce(root)
            if not root:
                raise DomainError("recurrence roots must be nonzero")
            p = t_poly(p)
            if root in merged:
                merged[root] = merged[root] + p
            else:
                merged[root] = p
                order.append(root)
        clean = [(merged[r], r) for r in order if merged[r]]
        if not clean:
            raise ZeroRecurrenceError("the recurrence is identically zero")
        self.terms: tuple[tuple[MultiPoly, FieldElement], ...] = tuple(clean)
        elems = [r for _, r in clean] + [c for p, _ in clean for c in p.terms.values()]
        self.d = field_of(elems).d

    @property
    def field(self) -> Field:
        return Field(self.d)

    @property
    def roots(self) -> list[FieldElement]:
        return [r for _, r in self.terms]

    @property
    def coefficients(self) -> list[MultiPoly]:
        return [p for p, _ in self.terms]

    def is_simple(self) -> bool:
        return all(p.is_constant() for p in self.coefficients)

    def __call__(self, n: int) -> FieldElement:
        return eval_rec(self, n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Recurrence):
            return NotImplemented
        return dict((r, p) for p, r in self.terms) == dict((r, p) for p, r in other.terms)

    def __hash__(self):
        return hash(frozenset((r, p) for p, r in self.terms))

    def __str__(self) -> str:
        return "\n".join(f"{p} ; {r}" for p, r in self.terms)

    def __repr__(self) -> str:
        body = ", ".join(f"({p})*({r})^n" for p, r in self.terms)
        return f"Recurrence({body})"


def parse_recurrence(text: str, d: int | None = None) -> Recurrence:
    """Parse lines ``poly_in_t ; root`` (``n`` is accepted for ``t``)."""
    terms = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ";" not in line:
            raise ConfigurationError(f"recurrence line needs 'poly ; root': {raw!r}")
        left, right = line.split(";", 1)
        poly = parse_polynomial(left, ("t", "n"), d)
        poly = poly.substitute(1, MultiPoly.var(0, 2)).drop_variable(1).with_names(T_NAMES)
        terms.append((poly, parse_element(right, d)))
    if not terms:
        raise ConfigurationError("empty recurrence")
    return Recurrence(terms)


def eval_rec(F: Recurrence, n: int) -> FieldElement:
    """Exact value ``F(n)``."""
    if n < 0:
        raise ValueError("recurrences are evaluated at natural numbers")
    total = FieldElement(0, 0, F.d)
    for p, root in F.terms:
        total = total + p.eval([n]) * root**n
    return total


def is_nondegenerate(F: Recurrence) -> tuple[bool, tuple | None]:
    """``(True, None)`` or ``(False, (alpha_i, alpha_j, ratio, order))``."""
    roots = F.roots
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            ratio = roots[i] / roots[j]
            ok, order = is_root_of_unity(ratio)
            if ok:
                return False, (roots[i], roots[j], ratio, order)
    return True, None


# -- multiplicative structure ------------------------------------------------

@dataclass
class ExponentLattice:
    """Generators ``u_j`` of the root group modulo torsion, and root exponents.

    ``roots[i] == torsion[i] * prod_j generators[j] ** exponents[i][j]`` and
    ``torsion[i] ** q == 1``.
    """

    roots: list[FieldElement]
    generators: list[FieldElement]
    exponents: list[tuple[int, ...]]
    torsion: list[FieldElement]
    q: int
    method: str = "rational"

    @property
    def rank(self) -> int:
        return len(self.generators)

    def reconstruct(self, i: int) -> FieldElement:
        value = self.torsion[i]
        for u, e in zip(self.generators, self.exponents[i]):
            value = value * u**e
        return value

    def exponents_of(self, root) -> tuple[int, ...]:
        root = FieldElement.coerce(root)
        for r, e in zip(self.roots, self.exponents):
            if r == root:
                return e
        if root == 1:
            return (0,) * self.rank
        raise KeyError(f"{root} is not a root of this lattice")

    def torsion_of(self, root) -> FieldElement:
        root = FieldElement.coerce(root)
        for r, z in zip(self.roots, self.torsion):
            if r == root:
                return z
        if root == 1:
            return root
        raise KeyError(f"{root} is not a root of this lattice")

    def __str__(self) -> str:
        lines = [f"generators: {', '.join(map(str, self.generators)) or '(none)'}"]
        for r, e, z in zip(self.roots, self.exponents, self.torsion):
            lines.append(f"  {r} = ({z}) * u^{list(e)}")
        lines.append(f"torsion order q: {self.q}")
        return "\n".join(lines)


def _prime_vector(x: Fraction, primes: Sequence[int]) -> list[int]:
    num, den = abs(x.numerator), x.denominator
    out = []
    for p in primes:
        e = 0
        while num % p == 0:
            num //= p
            e += 1
        while den % p == 0:
            den //= p
            e -= 1
        out.append(e)
    return out


def _unit_exponent(alpha: FieldElement, unit: FieldElement, unit_order: int | None) -> int:
    """``k`` with ``alpha * unit**-k`` rational, or raise."""
    if unit_order is not None:
        for k in range(unit_order):
            if (alpha / unit**k).is_rational():
                return k
        raise UnsupportedRelationError(f"{alpha} is not a rational multiple of a power of {unit}")
    places = alpha.field.archimedean_places()
    if len(places) != 2:
        raise UnsupportedRelationError("a non-torsion unit needs a real quadratic field")
    v1, v2 = places

    def gap(x: FieldElement) -> float:
        return float(log_abs(x, v1, 64).midpoint() - log_abs(x, v2, 64).midpoint())

    est = round(gap(alpha) / gap(unit))
    for k in (est, est - 1, est + 1):
        if (alpha * unit ** (-k)).is_rational():
            return k
    raise UnsupportedRelationError(f"{alpha} is not a rational multiple of a power of {unit}")


def group_structure(roots: Sequence, unit=None) -> ExponentLattice:
    """Exponent lattice of the group generated by ``roots``.

    Rational roots are handled completely: exponent vectors over the primes,
    Hermite normal form with transform, generators taken as products of the
    roots themselves.  Quadratic roots must be rational multiples of powers
    of the supplied ``unit``; anything else raises
    :class:`UnsupportedRelationError`.
    """
    roots = [FieldElement.coerce(r) for r in roots]
    if not roots:
        raise ValueError("no roots")
    if any(not r for r in roots):
        raise DomainError("roots must be nonzero")
    field = field_of(roots)
    rational_parts: list[Fraction] = []
    unit_exps: list[int] = []
    method = "rational"
    if all(r.is_rational() for r in roots):
        rational_parts = [r.a for r in roots]
    else:
        if unit is None:
            raise UnsupportedRelationError(
                "relation detection for quadratic roots needs a unit in the configuration"
            )
        unit = FieldElement.coerce(unit)
        if unit.d != field.d or unit.is_rational() or abs(unit.norm()) != 1:
            raise ConfigurationError(f"{unit} is not an irrational unit of {field}")
        is_torsion, order = is_root_of_unity(unit)
        method = "unit"
        for r in roots:
            k = _unit_exponent(r, unit, order if is_torsion else None)
            unit_exps.append(0 if is_torsion else k)
            rational_parts.append((r / unit**k).a)
    primes = sorted({p for x in rational_parts for n in (x.numerator, x.denominator) for p in factorint(abs(n))})
    vectors = [_prime_vector(x, primes) for x in rational_parts]
    if unit_exps:
        vectors = [v + [k] for v, k in zip(vectors, unit_exps)]
    ncols = len(vectors[0])
    if ncols == 0:
        generators: list[FieldElement] = []
        coords = [() for _ in roots]
    else:
        H, U = hnf_with_transform(vectors)
        basis_rows = [j for j, row in enumerate(H) if any(row)]
        generators = []
        for j in basis_rows:
            u = FieldElement(1, 0, field.d)
            for r, e in zip(roots, U[j]):
                if e:
                    u = u * r**e
            generators.append(u)
        coords = [_express(v, [H[j] for j in basis_rows]) for v in vectors]
    torsion = []
    for i, r in enumerate(roots):
        value = r
        for u, e in zip(generators, coords[i]):
            value = value / u**e
        torsion.append(value)
    q = _torsion_order(torsion)
    if q % 2 == 0 and generators:
        # -1 lies in the group, so generators may drop their sign
        generators = [_strip_sign(u) for u in generators]
        torsion = []
        for i, r in enumerate(roots):
            value = r
            for u, e in zip(generators, coords[i]):
                value = value / u**e
            torsion.append(value)
        q = _torsion_order(torsion)
    lat = ExponentLattice(roots, generators, [tuple(c) for c in coords], torsion, q, method)
    for i, r in enumerate(roots):
        if lat.reconstruct(i) != r:
            raise InvariantViolation("root reconstruction failed")
    return lat


def _strip_sign(u: FieldElement) -> FieldElement:
    """``±u`` chosen positive in the first real embedding (if there is one)."""
    if u.is_rational():
        return -u if u.a < 0 else u
    if u.d > 0 and _sign_real(u.a, u.b, u.d) < 0:
        return -u
    return u


def _torsion_order(torsion: Sequence[FieldElement]) -> int:
    q = 1
    for z in torsion:
        ok, order = is_root_of_unity(z)
        if not ok:
            raise InvariantViolation(f"torsion part {z} is not a root of unity")
        q = lcm(q, order)
    return q


def _express(vector: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int]:
    """Integer coordinates of ``vector`` in an HNF basis (pivots read off directly)."""
    rest = list(vector)
    coords = []
    for row in basis:
        piv = next(k for k, x in enumerate(row) if x)
        c, r = divmod(rest[piv], row[piv])
        if r:
            raise AssertionError("vector is not in the lattice")
        coords.append(c)
        rest = [a - c * b for a, b in zip(rest, row)]
    if any(rest):
        raise AssertionError("vector is not in the lattice")
    return coords


# -- Laurent polynomial view -------------------------------------------------

@dataclass
class LaurentForm:
    """``x^shift * poly`` in variables ``(t, x_1, ..., x_r)``; ``poly`` has no factor ``x_j``."""

    poly: MultiPoly
    shift: tuple[int, ...]
    generators: list[FieldElement] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.shift)

    def eval(self, n: int) -> FieldElement:
        """``u(n)^shift * poly(n, u_1**n, ..., u_r**n)``."""
        powers = [u**n for u in self.generators]
        value = self.poly.eval([n] + powers)
        for p, s in zip(powers, self.shift):
            value = value * p**s
        return value

    def full_poly(self) -> tuple[MultiPoly, tuple[int, ...]]:
        return self.poly, self.shift

    def __str__(self) -> str:
        mono = "*".join(f"x{j + 1}^{s}" for j, s in enumerate(self.shift) if s)
        return f"{mono} * ({self.poly})" if mono else str(self.poly)


def laurent_names(r: int) -> tuple[str, ...]:
    return ("t",) + tuple(f"x{j + 1}" for j in range(r))


def to_laurent(F: Recurrence, L: ExponentLattice) -> LaurentForm:
    """Write ``F`` as ``x^shift * f0(t, x)`` over the lattice generators."""
    if L.q != 1:
        raise TorsionError(f"root group has torsion of order {L.q}; split the recurrence first")
    r = L.rank
    vecs = [L.exponents_of(root) for root in F.roots]
    for root in F.roots:
        if L.torsion_of(root) != 1:
            raise TorsionError(f"root {root} carries torsion")
    shift = tuple(min(v[j] for v in vecs) for j in range(r))
    names = laurent_names(r)
    terms: dict[tuple[int, ...], FieldElement] = {}
    for (p, _), v in zip(F.terms, vecs):
        xe = tuple(a - b for a, b in zip(v, shift))
        for (k,), c in p.terms.items():
            terms[(k,) + xe] = c
    poly = MultiPoly(r + 1, terms, names)
    return LaurentForm(poly, shift, list(L.generators))


def common_lattice(F: Recurrence, G: Recurrence, unit=None) -> ExponentLattice:
    roots = list(dict.fromkeys(F.roots + G.roots))
    return group_structure(roots, unit)


def coprime_in_R_gamma(F: Recurrence, G: Recurrence, L: ExponentLattice | None = None, unit=None) -> bool:
    """Coprimality of the stripped Laurent polynomials ``f0, g0`` in ``k[t][x]``."""
    if L is None:
        L = common_lattice(F, G, unit)
    f, g = to_laurent(F, L), to_laurent(G, L)
    return coprime(f.poly, g.poly)


# -- exceptional specializations ----------------------------------------------

def specialized_coprime(f0: MultiPoly, g0: MultiPoly, n: int) -> bool:
    """Whether ``f0(n, x)`` and ``g0(n, x)`` are coprime (``gcd(0, 0) = 0`` is not)."""
    a, b = f0.specialize(0, n), g0.specialize(0, n)
    g = gcd(a, b)
    return bool(g) and g.is_constant()


def _x_degree(f: MultiPoly) -> int:
    return max((sum(e[1:]) for e in f.terms), default=0)


def _roots_in_range(poly: MultiPoly, n_max: int) -> set[int]:
    """Integers ``0 <= n <= n_max`` where a polynomial in ``t`` alone vanishes."""
    if poly.support() - {0}:
        raise ValueError("eliminant still depends on x")
    zeros = [0] * (poly.nvars - 1)
    return {n for n in range(n_max + 1) if not poly.eval([n] + zeros)}


# lines x2 = a + b*x1 tried in order
_LINES = [(Fraction(a), Fraction(b)) for a, b in ((1, 2), (2, -3), (-1, 5), (3, 7), (5, -2), (-4, 3), (7, 11))]


@dataclass
class ExceptionalReport:
    candidates: set[int]
    exceptional: set[int]
    exhaustive: set[int] | None
    method: str
    eliminants: list[MultiPoly]
    warning: str | None = None

    @property
    def agrees(self) -> bool | None:
        if self.exhaustive is None:
            return None
        return self.exceptional == self.exhaustive

    @property
    def candidates_cover(self) -> bool | None:
        if self.exhaustive is None:
            return None
        return self.exhaustive <= self.candidates


def _as_poly(f) -> MultiPoly:
    return f.poly if isinstance(f, LaurentForm) else f


def exceptional_n(f, g, n_max: int, exhaustive: bool = True) -> ExceptionalReport:
    """Naturals ``n <= n_max`` where ``f0(n, .)`` and ``g0(n, .)`` share a factor.

    Candidates come from eliminants in ``t``: the resultant in ``x`` when
    there is one generator, resultants along two fixed rational lines when
    there are two (the candidate sets are intersected).  Each candidate is
    verified by a direct gcd, and the exhaustive per-n test is run as a
    cross-check when ``exhaustive`` is set.
    """
    f0, g0 = _as_poly(f), _as_poly(g)
    f0._check(g0)
    if not f0 or not g0:
        raise DomainError("exceptional_n needs nonzero polynomials")
    r = f0.nvars - 1
    df, dg = _x_degree(f0), _x_degree(g0)
    eliminants: list[MultiPoly] = []
    warning = None
    if df == 0 and dg == 0:
        method = "common-roots"
        candidates = _roots_in_range(f0, n_max) & _roots_in_range(g0, n_max)
    elif r == 1:
        method = "resultant"
        res = resultant(f0, g0, 1, df, dg)
        if not res:
            raise ValueError("resultant vanishes identically: the polynomials are not coprime")
        eliminants.append(res)
        candidates = _roots_in_range(res, n_max)
    elif r == 2:
        method = "lines"
        sets = []
        for a, b in _LINES:
            line = MultiPoly.constant(a, 3) + MultiPoly.var(1, 3) * b
            fl, gl = f0.substitute(2, line), g0.substitute(2, line)
            # the formal top degree must survive the substitution
            if not _top_coefficient(fl, df) or not _top_coefficient(gl, dg):
                continue
            res = resultant(fl, gl, 1, df, dg)
            if not res:
                continue
            eliminants.append(res)
            sets.append(_roots_in_range(res, n_max))
            if len(sets) == 2:
                break
        if len(sets) < 2:
            raise ValueError("no usable elimination lines: the polynomials may not be coprime")
        candidates = sets[0] & sets[1]
    else:
        method = "per-n"
        warning = f"{r} generators: elimination not available, every n is tested directly"
        candidates = set(range(n_max + 1))
    verified = {n for n in candidates if n <= n_max and not specialized_coprime(f0, g0, n)}
    full = None
    if exhaustive:
        full = {n for n in range(n_max + 1) if not specialized_coprime(f0, g0, n)}
    return ExceptionalReport(candidates, verified, full, method, eliminants, warning)


def _top_coefficient(f: MultiPoly, deg: int) -> MultiPoly:
    """Coefficient of ``x1**deg`` as a polynomial in ``t``."""
    return f.as_univariate(1).get(deg, MultiPoly.zero(f.nvars))


# -- subsequences, zeros, quotients ------------------------------------------

def split_subsequence(F: Recurrence, q: int, l: int) -> Recurrence:
    """The recurrence ``n -> F(q*n + l)``: roots ``alpha**q``, coefficients ``p(q t + l) alpha**l``."""
    if q < 1 or not 0 <= l < q:
        raise ValueError("need q >= 1 and 0 <= l < q")
    lin = MultiPoly(1, {(1,): q, (0,): l}, T_NAMES)
    terms = []
    for p, root in F.terms:
        terms.append((p.substitute(0, lin) * root**l, root**q))
    return Recurrence(terms)


def skolem_zeros(F: Recurrence, n_max: int, n_min: int = 0) -> set[int]:
    """Exact zero set of ``F`` on ``[n_min, n_max]``."""
    return {n for n in range(n_min, n_max + 1) if not eval_rec(F, n)}


@dataclass
class SkolemReport:
    zeros: set[int]
    nondegenerate: bool
    witness: tuple | None
    n_max: int

    @property
    def note(self) -> str:
        if self.nondegenerate:
            return "non-degenerate: the zero set is finite"
        return "degenerate: the zero set may be infinite (a finite union of progressions plus finitely many zeros)"


def skolem_report(F: Recurrence, n_max: int) -> SkolemReport:
    ok, witness = is_nondegenerate(F)
    return SkolemReport(skolem_zeros(F, n_max), ok, witness, n_max)


@dataclass
class RatioReport:
    integral: set[int]
    denominator_zeros: set[int]


def s_integral_ratio(
    F: Recurrence, G: Recurrence, S: Iterable[Place], n_max: int, n_min: int = 0
) -> RatioReport:
    """Indices with ``G(n) != 0`` and ``F(n)/G(n)`` an S-integer."""
    S = list(S)
    d = field_of([FieldElement(0, 0, F.d), FieldElement(0, 0, G.d)]).d
    field = Field(d)
    integral, zeros = set(), set()
    for n in range(n_min, n_max + 1):
        den = eval_rec(G, n)
        if not den:
            zeros.add(n)
            continue
        if is_s_integral(eval_rec(F, n) / den, S, field):
            integral.add(n)
    return RatioReport(integral, zeros)


def root_hypothesis_failures(F: Recurrence, G: Recurrence) -> list[Place]:
    """Places where every root of ``F`` and ``G`` has absolute value below 1.

    Outside the places returned by :func:`relevant_places` all roots have
    absolute value 1, so only those need checking.
    """
    roots = list(dict.fromkeys(F.roots + G.roots))
    field = field_of(roots)
    bad = []
    for v in sorted(relevant_places(roots, field)):
        if all(abs_cmp_one(r, v) < 0 for r in roots):
            bad.append(v)
    return bad
