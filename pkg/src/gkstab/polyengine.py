"""Exact multivariate polynomials over the rationals.

``MPoly`` is a sparse map from exponent tuples to nonzero ``Fraction``
coefficients. Besides ring arithmetic it supports affine substitution,
vanishing order along a linear form, Reynolds averaging over a finite
matrix group, and constant-coefficient differential operators.

Text form (used in reports and test fixtures) lists terms in descending
graded-lex order, e.g. ``1/2*m1^2 - m1*m2 + 3``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import VariableMismatch

Exp = tuple[int, ...]


def _grlex_key(e: Exp):
    return (sum(e), e)


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise VariableMismatch(f"exponent {e} has wrong length for {nvars} variables")
                c = Fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.terms: dict[Exp, Fraction] = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exp, Fraction]) -> "MPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "MPoly":
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        """The i-th variable, 0-based."""
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence, constant=0) -> "MPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        constant = Fraction(constant)
        if constant:
            terms[(0,) * n] = constant
        return cls._raw(n, terms)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (deg is None or degs == {deg})

    def coefficient(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exp, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MPoly({self.nvars}, {self})"

    def __str__(self):
        return self.format()

    # arithmetic

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise VariableMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(self.nvars, other)
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        if not c:
            return MPoly.zero(self.nvars)
        return MPoly._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power")
        if len(self.terms) <= self.nvars + 1 and self.degree() <= 1:
            return linear_power(self, k)
        result = MPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # evaluation and substitution

    def __call__(self, *point) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise VariableMismatch(f"need {self.nvars} values, got {len(point)}")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def substitute_linear(self, images: Sequence["MPoly"]) -> "MPoly":
        """Replace variable i by ``images[i]`` (polynomials in a common new ring)."""
        if len(images) != self.nvars:
            raise VariableMismatch(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        n_new = images[0].nvars
        for im in images:
            if im.nvars != n_new:
                raise VariableMismatch("images live in different rings")
        maxdeg = [0] * self.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                maxdeg[i] = max(maxdeg[i], k)
        powers = []
        for i, im in enumerate(images):
            pw = [MPoly.constant(n_new, 1)]
            for _ in range(maxdeg[i]):
                pw.append(pw[-1] * im)
            powers.append(pw)
        out = MPoly.zero(n_new)
        for e, c in self.terms.items():
            t = MPoly.constant(n_new, c)
            for i, k in enumerate(e):
                if k:
                    t = t * powers[i][k]
            out = out + t
        return out

    def shift(self, offsets: Sequence) -> "MPoly":
        """p(x + offsets)."""
        n = self.nvars
        return self.substitute_linear(
            [MPoly.var(n, i) + Fraction(offsets[i]) for i in range(n)]
        )

    def derivative(self, e: Exp) -> "MPoly":
        """Apply d^e = prod_i (d/dx_i)^{e_i}."""
        out = {}
        for a, c in self.terms.items():
            if any(k > ai for k, ai in zip(e, a)):
                continue
            f = c
            for k, ai in zip(e, a):
                for j in range(k):
                    f *= ai - j
            out[tuple(ai - k for k, ai in zip(e, a))] = f
        return MPoly._raw(self.nvars, out)

    def integer_scaled(self) -> tuple[int, dict[Exp, int]]:
        """Positive integer D and integer terms of D*p."""
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        return den, {e: int(c * den) for e, c in self.terms.items()}

    # text form

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"m{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, names: Sequence[str]) -> MPoly:
    """Inverse of ``MPoly.format`` for the given variable names."""
    n = len(names)
    index = {name: i for i, name in enumerate(names)}
    text = text.strip()
    if text == "0":
        return MPoly.zero(n)
    terms: dict[Exp, Fraction] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        e = [0] * n
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            if factor in index or "^" in factor:
                name, _, k = factor.partition("^")
                if name not in index:
                    raise ValueError(f"unknown variable {name!r}")
                e[index[name]] += int(k) if k else 1
            else:
                coef *= Fraction(factor)
        e = tuple(e)
        terms[e] = terms.get(e, Fraction(0)) + coef
        pos = m.end()
    return MPoly(n, terms)


def linear_power(ell: MPoly, k: int) -> MPoly:
    """Multinomial expansion of a polynomial of degree <= 1 raised to k."""
    n = ell.nvars
    items = list(ell.terms.items())
    if not items:
        return MPoly.constant(n, 1) if k == 0 else MPoly.zero(n)
    m = len(items)
    out: dict[Exp, Fraction] = {}
    fact = [math.factorial(i) for i in range(k + 1)]
    for combo in combinations_with_replacement(range(m), k):
        counts = [0] * m
        for j in combo:
            counts[j] += 1
        coef = Fraction(fact[k])
        e = [0] * n
        for j, cnt in enumerate(counts):
            if cnt:
                ej, cj = items[j]
                coef *= cj ** cnt
                coef /= fact[cnt]
                for i, x in enumerate(ej):
                    e[i] += x * cnt
        e = tuple(e)
        out[e] = out.get(e, 0) + coef
    return MPoly._raw(n, {e: c for e, c in out.items() if c})


def int_linear_power(coeffs: Sequence[int], k: int) -> dict[Exp, int]:
    """Integer multinomial expansion of (sum c_i x_i)^k for integer c_i."""
    n = len(coeffs)
    nz = [i for i, c in enumerate(coeffs) if c]
    out: dict[Exp, int] = {}
    if not nz:
        if k == 0:
            out[(0,) * n] = 1
        return out
    fact = [math.factorial(i) for i in range(k + 1)]
    for combo in combinations_with_replacement(nz, k):
        counts = [0] * n
        for j in combo:
            counts[j] += 1
        coef = fact[k]
        for j in nz:
            coef //= fact[counts[j]]
        for j in nz:
            if counts[j]:
                coef *= coeffs[j] ** counts[j]
        out[tuple(counts)] = coef
    return out


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        if not any(self.coeffs):
            raise ValueError("linear form is identically constant")

    @classmethod
    def of(cls, coeffs: Iterable, constant=0) -> "LinearForm":
        return cls(tuple(Fraction(c) for c in coeffs), Fraction(constant))

    def to_poly(self) -> MPoly:
        return MPoly.linear(self.coeffs, self.constant)

    def __call__(self, point: Sequence) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point)), self.constant)


def vanishing_order(p: MPoly, ell: LinearForm) -> int | float:
    """Largest n with ell^n dividing p; ``math.inf`` for p = 0.

    Changes coordinates so ell becomes a coordinate y_j and reads the least
    exponent of y_j.
    """
    if len(ell.coeffs) != p.nvars:
        raise VariableMismatch(f"form has {len(ell.coeffs)} coefficients, poly has {p.nvars} variables")
    if p.is_zero():
        return math.inf
    n = p.nvars
    j = next(i for i, c in enumerate(ell.coeffs) if c)
    cj = ell.coeffs[j]
    images = []
    for i in range(n):
        if i == j:
            # m_j = (y_j - const - sum_{i != j} c_i y_i) / c_j
            lin = [(-ell.coeffs[k] / cj if k != j else 1 / cj) for k in range(n)]
            images.append(MPoly.linear(lin, -ell.constant / cj))
        else:
            images.append(MPoly.var(n, i))
    q = p.substitute_linear(images)
    return min(e[j] for e in q.terms)


def _monomials(nvars: int, deg: int):
    for combo in combinations_with_replacement(range(nvars), deg):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def monomials(nvars: int, deg: int) -> list[Exp]:
    return sorted(_monomials(nvars, deg), reverse=True)


def _int_poly_mul(a: dict[Exp, int], b: dict[Exp, int]) -> dict[Exp, int]:
    out: dict[Exp, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def group_average(mono: Exp, matrices: Sequence[Sequence[Sequence[int]]],
                  power_cache: dict | None = None) -> dict[Exp, int]:
    """Sum over the group of the monomial with variable i sent to sum_j M[j][i] x_j.

    Returns integer coefficients of the *sum*; divide by the group order for
    the average. ``power_cache`` memoizes (group index, var, power) expansions.
    """
    n = len(mono)
    total: dict[Exp, int] = {}
    for g, m in enumerate(matrices):
        acc = {(0,) * n: 1}
        for i, k in enumerate(mono):
            if not k:
                continue
            key = (g, i, k)
            if power_cache is not None and key in power_cache:
                pw = power_cache[key]
            else:
                pw = int_linear_power([m[j][i] for j in range(n)], k)
                if power_cache is not None:
                    power_cache[key] = pw
            acc = _int_poly_mul(acc, pw)
        for e, c in acc.items():
            total[e] = total.get(e, 0) + c
    return {e: c for e, c in total.items() if c}


def _row_reduce(polys: list[MPoly]) -> list[MPoly]:
    """Reduced echelon basis of the span, normalized to leading coefficient 1."""
    basis: list[MPoly] = []
    leads: list[Exp] = []
    for p in polys:
        for b, lead in zip(basis, leads):
            c = p.coefficient(lead)
            if c:
                p = p - b.scale(c)
        if p.is_zero():
            continue
        lead = p.sorted_terms()[0][0]
        p = p.scale(1 / p.coefficient(lead))
        for k, (b, bl) in enumerate(zip(basis, leads)):
            c = b.coefficient(lead)
            if c:
                basis[k] = b - p.scale(c)
        basis.append(p)
        leads.append(lead)
    return basis


def reynolds_invariants(matrices: Sequence[Sequence[Sequence[int]]], max_deg: int,
                        nvars: int | None = None) -> list[MPoly]:
    """Spanning set of invariants of degrees 1..max_deg with zero constant term.

    ``matrices`` lists the group elements; variable i transforms to
    sum_j M[j][i] x_j (the matrix columns). Every monomial of each degree
    is averaged; zero and linearly dependent averages are dropped.
    """
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    if nvars is None:
        nvars = len(matrices[0])
    order = len(matrices)
    cache: dict = {}
    out: list[MPoly] = []
    for deg in range(1, max_deg + 1):
        avgs = []
        for mono in monomials(nvars, deg):
            s = group_average(mono, matrices, cache)
            if s:
                avgs.append(MPoly._raw(nvars, {e: Fraction(c, order) for e, c in s.items()}))
        out.extend(_row_reduce(avgs))
    return out


def apply_diff_op(p_op: MPoly, f: MPoly) -> MPoly:
    """Apply p_op(d/dx_1, ..., d/dx_n) to f."""
    if p_op.nvars != f.nvars:
        raise VariableMismatch(f"{p_op.nvars} vs {f.nvars} variables")
    out = MPoly.zero(f.nvars)
    for e, c in p_op.terms.items():
        d = f.derivative(e)
        if d:
            out = out + d.scale(c)
    return out
