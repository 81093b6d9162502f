"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`MultiPoly` stores a map from dense exponent tuples to
:class:`fractions.Fraction` coefficients over an ordered tuple of variable
names.  Polynomials over different variable tuples can be combined; the
result lives over the union of the variables (left operand's order first).

Determinants of polynomial matrices use cofactor expansion below size 4 and
Bareiss fraction-free elimination from size 4 upward.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not allowed in MultiPoly")
    return Fraction(x)


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names: {self.variables}")
        nv = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(k) for k in exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match {nv} variables")
            if any(k < 0 for k in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms: dict[Exponent, Fraction] = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> MultiPoly:
        return cls(variables)

    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> MultiPoly:
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str] | None = None) -> MultiPoly:
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def linear_form(cls, coeffs: Sequence, variables: Sequence[str]) -> MultiPoly:
        """sum_i coeffs[i] * variables[i]."""
        variables = tuple(variables)
        if len(coeffs) != len(variables):
            raise ValueError("coefficient count does not match variable count")
        nv = len(variables)
        terms = {}
        for i, c in enumerate(coeffs):
            exp = [0] * nv
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(variables, terms)

    # -- variable handling ------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> MultiPoly:
        """Re-express over ``variables`` (must contain every variable in use)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        index = {v: i for i, v in enumerate(variables)}
        nv = len(variables)
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * nv
            for v, k in zip(self.variables, exp):
                if k:
                    if v not in index:
                        raise ValueError(f"variable {v} is used but missing from {variables}")
                    new[index[v]] = k
            terms[tuple(new)] = c
        return MultiPoly(variables, terms)

    def _unify(self, other: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
        if self.variables == other.variables:
            return self, other
        extra = tuple(v for v in other.variables if v not in self.variables)
        allv = self.variables + extra
        return self.with_variables(allv), other.with_variables(allv)

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(_as_fraction(other), self.variables)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(
            v for i, v in enumerate(self.variables) if any(exp[i] for exp in self.terms)
        )

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> MultiPoly:
        a, b = self._unify(self._coerce(other))
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + c
        return MultiPoly(a.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            c = _as_fraction(other)
            if not c:
                return MultiPoly(self.variables)
            return MultiPoly(self.variables, {e: c * v for e, v in self.terms.items()})
        a, b = self._unify(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return self.exact_div(other)
        c = _as_fraction(other)
        return self * (1 / c)

    def exact_div(self, divisor: MultiPoly) -> MultiPoly:
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        a, d = self._unify(divisor)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lt_exp = max(d.terms, key=_grlex_key)
        lt_c = d.terms[lt_exp]
        rem = dict(a.terms)
        quot: dict[Exponent, Fraction] = {}
        while rem:
            e = max(rem, key=_grlex_key)
            if any(x < y for x, y in zip(e, lt_exp)):
                raise ArithmeticError("division is not exact")
            qe = tuple(x - y for x, y in zip(e, lt_exp))
            qc = rem[e] / lt_c
            quot[qe] = qc
            for de, dc in d.terms.items():
                te = tuple(x + y for x, y in zip(qe, de))
                v = rem.get(te, Fraction(0)) - qc * dc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return MultiPoly(a.variables, quot)

    # -- calculus / evaluation ---------------------------------------------

    def _index(self, var: str) -> int | None:
        try:
            return self.variables.index(var)
        except ValueError:
            return None

    def diff(self, var: str) -> MultiPoly:
        i = self._index(var)
        if i is None:
            return MultiPoly(self.variables)
        terms = {}
        for exp, c in self.terms.items():
            k = exp[i]
            if k:
                terms[exp[:i] + (k - 1,) + exp[i + 1 :]] = c * k
        return MultiPoly(self.variables, terms)

    def subs(self, var: str, value) -> MultiPoly:
        """Substitute a rational constant for ``var`` (variable is kept, exponent 0)."""
        i = self._index(var)
        if i is None:
            return self
        value = _as_fraction(value)
        terms: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            k = exp[i]
            e = exp[:i] + (0,) + exp[i + 1 :]
            terms[e] = terms.get(e, Fraction(0)) + c * value**k
        return MultiPoly(self.variables, terms)

    def evaluate(self, point) -> Fraction:
        """Exact value at ``point`` (sequence aligned with variables, or a mapping)."""
        if isinstance(point, Mapping):
            try:
                vals = [_as_fraction(point[v]) for v in self.used_variables()]
            except KeyError as exc:
                raise ValueError(f"no value supplied for variable {exc}") from None
            poly = self.with_variables(self.used_variables())
        else:
            if len(point) != len(self.variables):
                raise ValueError(
                    f"point has dimension {len(point)}, polynomial has {len(self.variables)} variables"
                )
            vals = [_as_fraction(x) for x in point]
            poly = self
        total = Fraction(0)
        for exp, c in poly.terms.items():
            t = c
            for x, k in zip(vals, exp):
                if k:
                    t *= x**k
            total += t
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        if len(point) != len(self.variables):
            raise ValueError("point dimension mismatch")
        total = 0.0
        for exp, c in self.terms.items():
            t = float(c)
            for x, k in zip(point, exp):
                if k:
                    t *= x**k
            total += t
        return total

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        if i is None:
            return 0 if self.terms else -1
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def coefficient(self, monomial: Mapping[str, int]) -> Fraction:
        exp = tuple(monomial.get(v, 0) for v in self.variables)
        if any(v not in self.variables for v, k in monomial.items() if k):
            return Fraction(0)
        return self.terms.get(exp, Fraction(0))

    def arrays(self, variables: Sequence[str] | None = None):
        """(exponents int64[T, n], coefficients float64[T]) for numeric kernels."""
        import numpy as np

        p = self.with_variables(variables) if variables is not None else self
        items = sorted(p.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)
        nv = len(p.variables)
        exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), nv)
        coefs = np.array([float(c) for _, c in items], dtype=np.float64)
        return exps, coefs

    def _named_terms(self) -> frozenset:
        return frozenset(
            (tuple((v, k) for v, k in zip(self.variables, e) if k), c)
            for e, c in self.terms.items()
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._named_terms() == other._named_terms()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._named_terms())
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- text form --------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text: graded-lex descending terms ``c*A1^i1*A2^i2`` joined by ``" + "``."""
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = []
            for v, k in zip(self.variables, exp):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r}, variables={self.variables!r})"


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Inverse of :meth:`MultiPoly.to_text` for polynomials over ``variables``."""
    variables = tuple(variables)
    index = {v: i for i, v in enumerate(variables)}
    text = text.strip()
    if text == "0":
        return MultiPoly(variables)
    terms: dict[Exponent, Fraction] = {}
    for part in text.split(" + "):
        part = part.strip()
        sign = 1
        if part.startswith("-") and not re.match(r"^-\d", part):
            sign, part = -1, part[1:]
        coef = Fraction(sign)
        exp = [0] * len(variables)
        for fac in part.split("*"):
            m = _FACTOR.match(fac)
            if m:
                name, k = m.group(1), int(m.group(2) or 1)
                if name not in index:
                    raise ValueError(f"unknown variable {name!r}")
                exp[index[name]] += k
            else:
                coef *= Fraction(fac)
        e = tuple(exp)
        terms[e] = terms.get(e, Fraction(0)) + coef
    return MultiPoly(variables, terms)


# -- polynomial matrices ----------------------------------------------------

PolyMatrix = list  # list[list[MultiPoly]]


def _check_square(m) -> int:
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError("matrix is not square")
    return n


def _common_variables(m) -> tuple[str, ...]:
    out: list[str] = []
    for row in m:
        for x in row:
            if isinstance(x, MultiPoly):
                for v in x.variables:
                    if v not in out:
                        out.append(v)
    return tuple(out)


def _normalize(m, variables):
    return [
        [
            x.with_variables(variables) if isinstance(x, MultiPoly) else MultiPoly.constant(x, variables)
            for x in row
        ]
        for row in m
    ]


def det_cofactor(m, variables: Sequence[str] | None = None) -> MultiPoly:
    n = _check_square(m)
    variables = tuple(variables) if variables is not None else _common_variables(m)
    m = _normalize(m, variables)
    return _det_laplace(m, variables) if n else MultiPoly.constant(1, variables)


def _det_laplace(m, variables) -> MultiPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = MultiPoly(variables)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det_laplace(minor, variables)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_bareiss(m, variables: Sequence[str] | None = None) -> MultiPoly:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = _check_square(m)
    variables = tuple(variables) if variables is not None else _common_variables(m)
    a = _normalize(m, variables)
    if n == 0:
        return MultiPoly.constant(1, variables)
    sign = 1
    prev = MultiPoly.constant(1, variables)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly(variables)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def det(m, variables: Sequence[str] | None = None) -> MultiPoly:
    n = _check_square(m)
    if n >= 4:
        return det_bareiss(m, variables)
    return det_cofactor(m, variables)


def adjugate(m, variables: Sequence[str] | None = None) -> list[list[MultiPoly]]:
    """Transpose of the cofactor matrix; ``m @ adj(m) == det(m) * I``."""
    n = _check_square(m)
    variables = tuple(variables) if variables is not None else _common_variables(m)
    m = _normalize(m, variables)
    if n == 0:
        return []
    if n == 1:
        return [[MultiPoly.constant(1, variables)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i]
            c = det(minor, variables)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def det_and_adjugate(m, variables: Sequence[str] | None = None):
    variables = tuple(variables) if variables is not None else _common_variables(m)
    return det(m, variables), adjugate(m, variables)


def matmul(a, b, variables: Sequence[str]) -> list[list[MultiPoly]]:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = MultiPoly(variables)
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def edge_variables(n: int) -> tuple[str, ...]:
    """Default edge-variable names ``A1..An``."""
    return tuple(f"A{i}" for i in range(1, n + 1))


def monomials_of_degree(nvars: int, degree: int) -> Iterable[Exponent]:
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        yield tuple(exp)
