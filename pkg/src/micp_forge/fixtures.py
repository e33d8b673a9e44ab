"""Registry of worked examples, built exactly from their defining constraints."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .errors import MicpError
from .formulations import MicpFormulation, _Builder
from .lower_bounds import is_prime, primes_up_to
from .naturals import NaturalOracle, fixture_s_epsilon
from .pwl import PwlFunction
from .rational import as_fraction


def parity_cube(n=3) -> MicpFormulation:
    """Even-weight points of ``{0,1}^n``: ``sum x = 2 z`` inside the unit box.

    The box rows keep the integer slices inside the cube, as in the
    extended description of the convex hull this example comes from.
    """
    n = int(n)
    if n < 1:
        raise MicpError("n must be at least 1")
    B = _Builder(n + 1)
    B.add("Zero", [B.row({**{i: 1 for i in range(n)}, n: -2})])
    rows = []
    for i in range(n):
        rows += [B.row({i: 1}), B.row({i: -1}, 1)]
    B.add("Nonneg", rows)
    return MicpFormulation(B.build(), n, 0, 1, f"parity_cube(n={n})")


def dense_sqrt2() -> MicpFormulation:
    """``x = sqrt(2) z1 - floor(sqrt(2) z1)``: variables ``x | y1 y2 y3 | z1 z2``.

    Rows: ||(z1, z1)|| <= z2 + 1, ||(z2, z2)|| <= 2 z1, ||(z1, z1)|| <= y1,
    ||(y1, y1)|| <= 2 z1 and x = y1 - z2 (y2, y3 are unused, as written).
    """
    x, y1, z1, z2 = 0, 1, 4, 5
    B = _Builder(6)
    B.add("SecondOrder", [B.row({z2: 1}, 1), B.row({z1: 1}), B.row({z1: 1})])
    B.add("SecondOrder", [B.row({z1: 2}), B.row({z2: 1}), B.row({z2: 1})])
    B.add("SecondOrder", [B.row({y1: 1}), B.row({z1: 1}), B.row({z1: 1})])
    B.add("SecondOrder", [B.row({z1: 2}), B.row({y1: 1}), B.row({y1: 1})])
    B.add("Zero", [B.row({x: 1, y1: -1, z2: 1})])
    return MicpFormulation(B.build(), 1, 3, 2, "dense_sqrt2")


def hyperbola() -> MicpFormulation:
    """``{x in N x R : x1 x2 >= 1}`` as ``x1 = z`` and ``1 <= x1 x2`` (rotated cone)."""
    B = _Builder(3)
    B.add("Zero", [B.row({0: 1, 2: -1})])
    B.add("RotatedSecondOrder", [B.row({0: 1}), B.row({1: 1}), B.row({}, 1)])
    return MicpFormulation(B.build(), 2, 0, 1, "hyperbola")


def s_epsilon(eps="2/5", bound=100_000) -> NaturalOracle:
    return fixture_s_epsilon(as_fraction(eps), int(bound))


def s_epsilon_formulation(eps="2/5") -> MicpFormulation:
    """``x1 = z1`` with ``(z1, z2)`` in the cone-described strip around ``x2 = sqrt(2) x1``."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise MicpError("eps must be positive")
    x, z1, z2 = 0, 1, 2
    B = _Builder(3)
    B.add("Zero", [B.row({x: 1, z1: -1})])
    B.add("SecondOrder", [B.row({z2: 1}, eps), B.row({z1: 1}), B.row({z1: 1})])
    B.add("SecondOrder", [B.row({z1: 2}, 2 * eps), B.row({z2: 1}), B.row({z2: 1})])
    B.add("Nonneg", [B.row({z1: 1}), B.row({z2: 1})])
    return MicpFormulation(B.build(), 1, 0, 2, f"s_epsilon_formulation({eps})")


def concave_balls(n=2, v=None, a=1, b=1) -> MicpFormulation:
    """Balls ``||x - z v|| <= sqrt(a z + b)`` over ``z in Z_+``.

    Variables ``x | r | z``; the radius r satisfies ``r^2 <= (a z + b) * 1``.
    """
    n = int(n)
    v = [1] + [0] * (n - 1) if v is None else list(v)
    if len(v) != n:
        raise MicpError("v must have n components")
    if any(as_fraction(c).denominator != 1 for c in v):
        raise MicpError("v must be an integer vector")
    a, b = as_fraction(a), as_fraction(b)
    if a < 0 or b <= 0:
        raise MicpError("need a >= 0 and b > 0")
    r, z = n, n + 1
    B = _Builder(n + 2)
    B.add("SecondOrder", [B.row({r: 1})] + [B.row({i: 1, z: -as_fraction(v[i])}) for i in range(n)])
    B.add("RotatedSecondOrder", [B.row({z: a}, b), B.row({}, 1), B.row({r: 1})])
    B.add("Nonneg", [B.row({z: 1})])
    return MicpFormulation(B.build(), n, 1, 1, f"concave_balls(n={n}, a={a}, b={b})")


def lorentz_intcone(n=2) -> MicpFormulation:
    """Integer points ``(t, x)`` with ``||x|| <= t``."""
    n = int(n)
    B = _Builder(2 * (n + 1))
    B.add("Zero", [B.row({i: 1, n + 1 + i: -1}) for i in range(n + 1)])
    B.add("SecondOrder", [B.row({i: 1}) for i in range(n + 1)])
    return MicpFormulation(B.build(), n + 1, 0, n + 1, f"lorentz_intcone(n={n})")


def figure2_pwl() -> PwlFunction:
    """Values 1, 0, 3/2, 3, 9/2, ... with slope 3/2 from the second breakpoint on."""
    return PwlFunction((1, 0), (Fraction(3, 2),))


def primes(bound=50) -> list[int]:
    return primes_up_to(int(bound))


REGISTRY: dict[str, Callable] = {
    "parity_cube": parity_cube,
    "dense_sqrt2": dense_sqrt2,
    "hyperbola": hyperbola,
    "s_epsilon": s_epsilon,
    "concave_balls": concave_balls,
    "lorentz_intcone": lorentz_intcone,
    "figure2_pwl": figure2_pwl,
    "primes": primes,
}


def fixture(name: str, **params):
    if name not in REGISTRY:
        raise MicpError(f"unknown fixture {name!r}; registered: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[name](**params)


def prime_oracle(q) -> bool:
    x = as_fraction(q[0] if isinstance(q, tuple) else q)
    return x.denominator == 1 and is_prime(x.numerator)
