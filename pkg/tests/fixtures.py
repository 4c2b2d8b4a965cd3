"""Shared recurrence fixtures and independent evaluators."""

from __future__ import annotations

from recurgcd.recurrence import Recurrence, parse_recurrence

PHI = "(1/2 + 1/2*sqrt(5))"
PSI = "(1/2 - 1/2*sqrt(5))"

RATIONAL_FIXTURES = [
    "1 ; 2\n-1 ; 1",
    "1 ; 3\n-1 ; 1",
    "1 ; 4\n-1 ; 1",
    "t ; 6\n1 ; 2",
    "2 ; 2",
    "1 ; 2\n1 ; 3\n1 ; 6",
    "t^2 - 1 ; 5\n3 ; 1",
    "1 ; 1/2\n-1 ; 3",
    "1/3 ; 9\n-2 ; 27",
    "t ; 1\n1 ; 10\n-7 ; 4",
]

OTHER_FIXTURES = [
    "1 ; -2\n1 ; 1",
    "1 ; -2\n1 ; 2",
    "1 ; -3\n-1 ; 2\nt ; 1",
    "t - 2 ; 1",
]


def rec(text: str, d: int | None = None) -> Recurrence:
    return parse_recurrence(text, d)


def fibonacci() -> Recurrence:
    return rec(f"1/5*sqrt(5) ; {PHI}\n-1/5*sqrt(5) ; {PSI}", 5)


def fibonacci_plus_one() -> Recurrence:
    return rec(f"1/5*sqrt(5) ; {PHI}\n-1/5*sqrt(5) ; {PSI}\n1 ; 1", 5)


def lucas() -> Recurrence:
    return rec(f"1 ; {PHI}\n1 ; {PSI}", 5)


def fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fib_shifted(n: int) -> int:
    return fib(n) + 1


def FIXTURES() -> list[Recurrence]:
    out = [rec(t) for t in RATIONAL_FIXTURES + OTHER_FIXTURES]
    out += [fibonacci(), fibonacci_plus_one(), lucas()]
    out.append(rec("1 ; (1 + sqrt(-3))\n1 ; (1 - sqrt(-3))", -3))
    return out
