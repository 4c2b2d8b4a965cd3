"""Experiment configuration files.

Plain text, ``#`` starts a comment.  Top-level ``key = value`` lines set
scalars; ``[F]``, ``[G]``, ``[forms]`` and ``[points]`` open blocks::

    field = Q            # or an integer d for Q(sqrt d)
    unit = (1/2 + 1/2*sqrt(5))
    S = 2, 3             # primes; archimedean places are implied
    n_max = 300
    eps = 1/20

    [F]
    1 ; 2
    -1 ; 1

    [G]
    1 ; 3
    -1 ; 1

``[forms]`` holds one linear form per line in ``x0..xk`` (coefficients may
use ``n``); ``[points]`` holds one line of comma-separated coordinates,
expressions in ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from sympy import isprime

from .errors import ConfigurationError, ParseError
from .exactfield import Field, FieldElement, Place
from .parsing import parse_element, parse_fraction
from .recurrence import Recurrence, parse_recurrence

BLOCKS = ("F", "G", "forms", "points")
INT_KEYS = ("n_max", "n_min", "m_max", "q", "l", "precision", "samples", "seed", "jobs")
KNOWN_KEYS = set(INT_KEYS) | {"field", "unit", "S", "eps", "out"}


@dataclass
class ExperimentConfig:
    field: Field = dc_field(default_factory=Field)
    unit: FieldElement | None = None
    S_primes: list[int] = dc_field(default_factory=list)
    F: Recurrence | None = None
    G: Recurrence | None = None
    n_min: int | None = None
    n_max: int = 100
    m_max: int | None = None
    eps: Fraction = Fraction(1, 20)
    q: int | None = None
    l: int | None = None
    precision: int = 256
    out: str | None = None
    samples: int = 10000
    seed: int = 0
    jobs: int = 1
    forms: list[str] = dc_field(default_factory=list)
    points: list[str] = dc_field(default_factory=list)

    @property
    def S(self) -> frozenset[Place]:
        return self.field.places(self.S_primes)

    def validate(self) -> "ExperimentConfig":
        if self.eps <= 0:
            raise ConfigurationError("eps must be positive")
        if self.n_max < 1:
            raise ConfigurationError("n_max must be at least 1")
        if self.n_min is not None and self.n_min < 0:
            raise ConfigurationError("n_min must be nonnegative")
        if len(set(self.S_primes)) != len(self.S_primes):
            raise ConfigurationError("S primes must be distinct")
        for p in self.S_primes:
            if not isprime(p):
                raise ConfigurationError(f"S entry {p} is not prime")
        if self.precision < 16:
            raise ConfigurationError("precision must be at least 16 bits")
        if self.q is not None and self.q < 1:
            raise ConfigurationError("q must be at least 1")
        if self.l is not None and self.q is not None and not 0 <= self.l < self.q:
            raise ConfigurationError("l must satisfy 0 <= l < q")
        if self.jobs < 1:
            raise ConfigurationError("jobs must be at least 1")
        return self

    def require(self, *names: str) -> None:
        missing = [n for n in names if not getattr(self, n)]
        if missing:
            raise ConfigurationError("configuration lacks " + ", ".join(missing))


def _parse_field(value: str) -> Field:
    v = value.strip()
    if v.upper() in ("Q", "QQ", "RATIONAL"):
        return Field()
    try:
        return Field(int(v))
    except ValueError:
        raise ConfigurationError(f"field must be Q or an integer d, got {value!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    scalars: dict[str, str] = {}
    blocks: dict[str, list[str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in BLOCKS:
                raise ConfigurationError(f"line {lineno}: unknown block [{name}]")
            if name in blocks:
                raise ConfigurationError(f"line {lineno}: block [{name}] repeated")
            current = name
            blocks[name] = []
            continue
        if current is not None:
            blocks[current].append(line)
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        scalars[key] = value

    cfg = ExperimentConfig()
    try:
        if "field" in scalars:
            cfg.field = _parse_field(scalars["field"])
        d = cfg.field.d
        if "unit" in scalars:
            cfg.unit = parse_element(scalars["unit"], d)
        if "S" in scalars and scalars["S"].strip():
            cfg.S_primes = [int(p) for p in scalars["S"].replace(",", " ").split()]
        for key in INT_KEYS:
            if key in scalars:
                setattr(cfg, key, int(scalars[key]))
        if "eps" in scalars:
            cfg.eps = parse_fraction(scalars["eps"])
        if "out" in scalars:
            cfg.out = scalars["out"]
        if "F" in blocks:
            cfg.F = parse_recurrence("\n".join(blocks["F"]), d)
        if "G" in blocks:
            cfg.G = parse_recurrence("\n".join(blocks["G"]), d)
        cfg.forms = blocks.get("forms", [])
        if "points" in blocks:
            if len(blocks["points"]) != 1:
                raise ConfigurationError("[points] takes one line of coordinates")
            cfg.points = [c.strip() for c in blocks["points"][0].split(",")]
    except (ParseError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from None
    return cfg.validate()


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
