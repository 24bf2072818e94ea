"""Ozsvath-Szabo absolute gradings of -L(p, q), as an independent check.

The recursion

    d(p, q; i mod p) = (pq - (2i + 1 - p - q)^2) / 4pq - d(q, p mod q; i mod q)

for 0 <= i < p + q bottoms out at (1, 0), the single generator of S^3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InvalidParameters
from .grading import grading_table


def _check(p: int, q: int) -> None:
    if p < 1 or q < 0 or gcd(p, q) != 1 or (q >= p and (p, q) != (1, 1)):
        raise InvalidParameters(f"need coprime 0 <= q < p (or p = q = 1), got ({p}, {q})")


@lru_cache(maxsize=None)
def _absolute(p: int, q: int, base: Fraction) -> tuple[Fraction, ...]:
    if q == 0:
        return (base,)
    lower = _absolute(q, p % q, base)
    values: list[Fraction | None] = [None] * p
    for i in range(p + q):
        v = Fraction(p * q - (2 * i + 1 - p - q) ** 2, 4 * p * q) - lower[i % q]
        slot = i % p
        if values[slot] is None:
            values[slot] = v
        elif values[slot] != v:
            raise ArithmeticError(f"recursion assigns two values to x_{slot} at ({p}, {q})")
    return tuple(values)


def os_absolute_grading(p: int, q: int, base: Fraction = Fraction(0)) -> tuple[Fraction, ...]:
    """Absolute Q-gradings of x_0, ..., x_{p-1} on -L(p, q).

    ``base`` is the value given to the S^3 generator at the bottom of the
    recursion; only differences are meaningful.
    """
    _check(p, q)
    return _absolute(p, q, Fraction(base))


def os_relative_step(p: int, q: int, i: int) -> Fraction:
    """gr(x_{i+q mod p}) - gr(x_i) in closed form."""
    _check(p, q)
    if not 0 <= i < p:
        raise InvalidParameters(f"index {i} out of range for p = {p}")
    return Fraction(p - 1 - 2 * i, p)


def step_potential(p: int, q: int) -> tuple[Fraction, ...]:
    """Gradings obtained by chaining closed-form steps x_0 -> x_q -> x_2q -> ...

    Normalised so x_0 sits at 0.  The steps around the full cycle sum to
    zero, so the chain closes up.
    """
    _check(p, q)
    values: list[Fraction | None] = [None] * p
    values[0] = Fraction(0)
    i = 0
    for _ in range(p - 1):
        values[(i + q) % p] = values[i] + os_relative_step(p, q, i)
        i = (i + q) % p
    if values[i] + os_relative_step(p, q, i) != 0:
        raise ArithmeticError(f"closed-form steps do not close up at ({p}, {q})")
    return tuple(values)


def chain_difference(p: int, q: int, a: int, b: int) -> Fraction:
    """gr(x_a) - gr(x_b) by summing closed-form steps from x_b to x_a."""
    pot = step_potential(p, q)
    return pot[a % p] - pot[b % p]


@dataclass
class ComparisonReport:
    p: int
    q: int
    pairs_checked: int = 0
    discrepancies: list[tuple] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.discrepancies


def compare_with_engine(p: int, q: int) -> ComparisonReport:
    """Check engine Gr against both oracles on every ordered pair of -L(p, q)."""
    from .constructions import lens_diagram

    _check(p, q)
    table = grading_table(lens_diagram(p, q))
    absolute = os_absolute_grading(p, q)
    pot = step_potential(p, q)
    report = ComparisonReport(p, q)
    for a in range(p):
        for b in range(p):
            engine = table.Gr.get(((a,), (b,)))
            steps = pot[a] - pot[b]
            recursion = absolute[a] - absolute[b]
            report.pairs_checked += 1
            if not (engine == steps == recursion):
                report.discrepancies.append((a, b, engine, steps, recursion))
    return report
