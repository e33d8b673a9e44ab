"""CPLEX LP text for polyhedral formulations, and a reader for the same dialect.

Variables are named ``x0..``, ``y0..``, ``z0..``; rows keep construction
order.  Coefficients with a terminating decimal expansion are written as
decimals; otherwise the row is multiplied by the lcm of its denominators and
a comment line records the factor and the original ``p/q`` row.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction

from .convex import Cone, ConicSet
from .errors import MicpError
from .formulations import MicpFormulation
from .rational import ZERO, format_rational, parse_rational


def var_names(F: MicpFormulation) -> list[str]:
    return [f"x{i}" for i in range(F.n)] + [f"y{i}" for i in range(F.p)] + [f"z{i}" for i in range(F.d)]


def _terminates(q: Fraction) -> bool:
    d = q.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    return d == 1


def decimal_string(q: Fraction) -> str:
    """Exact decimal literal of a rational with a terminating expansion."""
    if not _terminates(q):
        raise MicpError(f"{q} has no finite decimal expansion")
    if q.denominator == 1:
        return str(q.numerator)
    k = 0
    while (q * 10 ** k).denominator != 1:
        k += 1
    digits = str(abs(q.numerator * 10 ** k // q.denominator)).rjust(k + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def _expr(coeffs, names, fmt) -> str:
    parts = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else fmt(abs(c)) + " "
        if not parts:
            parts.append(("-" if c < 0 else "") + mag + name)
        else:
            parts.append(("- " if c < 0 else "+ ") + mag + name)
    return " ".join(parts) if parts else f"0 {names[0]}"


def emit_lp(F: MicpFormulation) -> str:
    if not F.is_polyhedral:
        raise MicpError("LP export requires polyhedral formulation")
    names = var_names(F)
    if not names:
        raise MicpError("formulation has no variables")
    out = [f"\\ {F.provenance}" if F.provenance else "\\ micp formulation", "Minimize", f" obj: 0 {names[0]}", "Subject To"]
    k = 0
    for cone, start in F.M.blocks():
        sense = "=" if cone.kind == "Zero" else ">="
        for i in range(start, start + cone.dim):
            a, rhs = F.M.A[i], -F.M.b[i]
            if all(_terminates(q) for q in a + (rhs,)):
                out.append(f" c{k}: {_expr(a, names, decimal_string)} {sense} {decimal_string(rhs)}")
            else:
                L = math.lcm(rhs.denominator, *(q.denominator for q in a))
                out.append(f" \\ c{k} scaled by {L}: {_expr(a, names, format_rational)} {sense} {format_rational(rhs)}")
                sa = [q * L for q in a]
                out.append(f" c{k}: {_expr(sa, names, decimal_string)} {sense} {decimal_string(rhs * L)}")
            k += 1
    out.append("Bounds")
    out += [f" {v} free" for v in names]
    if F.d:
        out.append("General")
        out.append(" " + " ".join(names[F.n + F.p:]))
    out.append("End")
    return "\n".join(out) + "\n"


_TERM = re.compile(r"([+-])?\s*([0-9./]+)?\s*([xyz]\d+)")


def parse_lp(text: str) -> MicpFormulation:
    """Read an LP file written by :func:`emit_lp` back into a formulation."""
    section = None
    rows = []
    scale = {}
    names: list[str] = []
    provenance = ""
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("\\"):
            m = re.match(r"\\\s*(c\d+) scaled by (\d+):", s)
            if m:
                scale[m.group(1)] = int(m.group(2))
            elif section is None:
                provenance = s[1:].strip()
            continue
        low = s.lower()
        if low in ("minimize", "subject to", "bounds", "general", "end"):
            section = low
            continue
        if section == "subject to":
            m = re.match(r"(c\d+):\s*(.*?)\s*(>=|=)\s*(\S+)$", s)
            if not m:
                raise MicpError(f"cannot parse row {s!r}")
            label, expr, sense, rhs = m.groups()
            coeffs = {}
            for sign, num, var in _TERM.findall(expr):
                c = parse_rational(num) if num else Fraction(1)
                coeffs[var] = coeffs.get(var, ZERO) + (-c if sign == "-" else c)
            f = Fraction(scale.get(label, 1))
            rows.append((sense, {v: c / f for v, c in coeffs.items()}, parse_rational(rhs) / f))
        elif section == "bounds":
            names.append(s.split()[0])
    n = sum(1 for v in names if v[0] == "x")
    p = sum(1 for v in names if v[0] == "y")
    d = sum(1 for v in names if v[0] == "z")
    order = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(p)] + [f"z{i}" for i in range(d)]
    index = {v: j for j, v in enumerate(order)}
    A, b, cones = [], [], []
    for sense, coeffs, rhs in rows:
        r = [ZERO] * len(order)
        for v, c in coeffs.items():
            if v not in index:
                raise MicpError(f"undeclared variable {v}")
            r[index[v]] += c
        A.append(tuple(r))
        b.append(-rhs)
        kind = "Zero" if sense == "=" else "Nonneg"
        if cones and cones[-1][0] == kind:
            cones[-1][1] += 1
        else:
            cones.append([kind, 1])
    M = ConicSet(len(order), tuple(A), tuple(b), tuple(Cone(k, m) for k, m in cones))
    return MicpFormulation(M, n, p, d, provenance)
