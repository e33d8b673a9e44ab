"""Exact rational linear algebra and integer-lattice helpers.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Vectors are tuples and matrices are tuples of row
tuples; nothing here mutates its inputs.
"""
from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import MicpError

Vector = tuple
Matrix = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, exact decimal strings and "p/q" strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MicpError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    raise MicpError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a decimal literal such as "1.5" exactly."""
    s = text.strip()
    if not s:
        raise MicpError("empty rational literal")
    try:
        if "/" in s:
            num, den = s.split("/")
            if int(den) == 0:
                raise MicpError(f"zero denominator in {text!r}")
            return Fraction(int(num), int(den))
        return Fraction(Decimal(s))
    except (ValueError, InvalidOperation) as exc:
        raise MicpError(f"cannot parse rational {text!r}") from exc


def format_rational(q) -> str:
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((ZERO,) * cols for _ in range(rows))


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), ZERO)


def transpose(a: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in a)


def rref(a: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[as_fraction(x) for x in row] for row in a]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : a x = 0} (rational, one vector per free column)."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return [tuple(ONE if i == j else ZERO for i in range(ncols)) for j in range(ncols)]
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_affine(e: Sequence[Sequence], f: Sequence) -> tuple[Vector, list[Vector]] | None:
    """Parametrize {x : e x = f} as x0 + span(basis); None when inconsistent."""
    ncols = len(e[0])
    aug = [list(row) + [as_fraction(rhs)] for row, rhs in zip(e, f)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x0 = [ZERO] * ncols
    for row, pc in zip(r, pivots):
        x0[pc] = row[ncols]
    return tuple(x0), nullspace(e, ncols)


def det(a: Sequence[Sequence]) -> Fraction:
    m = [[as_fraction(x) for x in row] for row in a]
    n = len(m)
    sign = 1
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result * sign


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + list(identity(n)[i]) for i in range(n)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise MicpError("singular matrix")
    return tuple(tuple(row[n:]) for row in r)


def lcm_of_denominators(values: Iterable) -> int:
    return reduce(math.lcm, (as_fraction(v).denominator for v in values), 1)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    scale = lcm_of_denominators(v)
    ints = [int(as_fraction(x) * scale) for x in v]
    g = reduce(math.gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def gcd_vector(v: Sequence[int]) -> int:
    """gcd of the absolute values; 0 exactly when every component is 0."""
    if len(v) == 0:
        raise MicpError("empty input")
    return reduce(math.gcd, (abs(int(x)) for x in v), 0)


def _require_integer_matrix(a: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in a:
        r = []
        for x in row:
            q = as_fraction(x)
            if q.denominator != 1:
                raise MicpError("non-integral input")
            r.append(q.numerator)
        out.append(r)
    return out


def hermite_normal_form(a: Sequence[Sequence]) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Column-style Hermite normal form of a square nonsingular integer matrix.

    Returns ``(H, U)`` with ``A @ U == H``, ``U`` unimodular and ``H`` lower
    triangular with a positive diagonal; entries left of the diagonal are
    nonpositive and strictly smaller in magnitude than the diagonal entry of
    their row.
    """
    m = _require_integer_matrix(a)
    n = len(m)
    if any(len(row) != n for row in m):
        raise MicpError("matrix must be square")
    if det(m) == 0:
        raise MicpError("singular matrix")
    h = [row[:] for row in m]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(target: int, src: int, k: int) -> None:
        # column target -= k * column src
        for mtx in (h, u):
            for row in mtx:
                row[target] -= k * row[src]

    def swap(i: int, j: int) -> None:
        for mtx in (h, u):
            for row in mtx:
                row[i], row[j] = row[j], row[i]

    def negate(j: int) -> None:
        for mtx in (h, u):
            for row in mtx:
                row[j] = -row[j]

    for i in range(n):
        # Euclid across columns i..n-1 of row i until only column i is nonzero.
        while True:
            nz = [j for j in range(i, n) if h[i][j] != 0]
            j_min = min(nz, key=lambda j: abs(h[i][j]))
            if j_min != i:
                swap(i, j_min)
            done = True
            for j in range(i + 1, n):
                if h[i][j] != 0:
                    colop(j, i, h[i][j] // h[i][i])
                    if h[i][j] != 0:
                        done = False
            if done:
                break
        if h[i][i] < 0:
            negate(i)
        d = h[i][i]
        for j in range(i):
            # bring h[i][j] into (-d, 0]
            q = -((-h[i][j]) // d)  # ceil(h[i][j] / d)
            if q:
                colop(j, i, q)
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def is_hnf(h: Sequence[Sequence[int]]) -> bool:
    n = len(h)
    for i in range(n):
        if h[i][i] <= 0:
            return False
        for j in range(n):
            if j > i and h[i][j] != 0:
                return False
            if j < i and not (-h[i][i] < h[i][j] <= 0):
                return False
    return True


def is_unimodular(u: Sequence[Sequence]) -> bool:
    try:
        _require_integer_matrix(u)
    except MicpError:
        return False
    return abs(det(u)) == 1


def unimodular_completion(r: Sequence[int], column_position: str = "last") -> tuple[tuple[int, ...], ...]:
    """Unimodular ``d x d`` integer matrix having the primitive vector ``r`` as a column.

    Follows the basis-completion argument: complete ``r`` to a rational basis
    ``B`` (r last), clear denominators of ``B^-1`` with ``q``, take the HNF
    ``(q B^-1) U = H``; then ``U`` has last column exactly ``r``.
    """
    if column_position not in ("first", "last"):
        raise MicpError("column_position must be 'first' or 'last'")
    r = [int(as_fraction(x)) if as_fraction(x).denominator == 1 else None for x in r]
    if any(x is None for x in r):
        raise MicpError("non-integral input")
    g = gcd_vector(r)
    if g == 0:
        raise MicpError("zero vector")
    if g != 1:
        raise MicpError("non-primitive vector")
    d = len(r)
    k = next(i for i in range(d) if r[i] != 0)
    cols = [tuple(int(i == j) for i in range(d)) for j in range(d) if j != k] + [tuple(r)]
    b = transpose(cols)
    binv = inverse(b)
    q = lcm_of_denominators(x for row in binv for x in row)
    a = [[int(x * q) for x in row] for row in binv]
    _, u = hermite_normal_form(a)
    u = [list(row) for row in u]
    if [row[-1] for row in u] != list(r):
        raise MicpError("unimodular completion failed its postcondition")
    if column_position == "first":
        u = [[row[-1]] + row[:-1] for row in u]
    result = tuple(map(tuple, u))
    if not is_unimodular(result):
        raise MicpError("unimodular completion failed its postcondition")
    return result
