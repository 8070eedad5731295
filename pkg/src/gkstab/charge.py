"""Taylor components of character numerators, GK dimensions and central charges.

For a class [M] = sum_w a_w [Delta(w.lambda)] the k-th Taylor component of the
character numerator is (1/k!) sum_w a_w <w(lambda+rho), x>^k, a polynomial in
the coweight coordinates x_i = <alpha_i, x>. The first k with a nonzero
component gives GK(M) = |positive roots| - k, and evaluating at x = rho_check
with lambda left symbolic gives the central charge as a polynomial in the
wall coordinates m_i = <lambda+rho, coroot_i>.

The Hilbert-series oracle counts layer dimensions of a parabolic Verma module
directly from its generating function and fits a quasi-polynomial, giving an
independent leading coefficient to compare against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FitFailure, InsufficientDepth, NotDominant, StratumViolation, ZeroClass
from .ktheory import (
    VERMA, Block, K0Class, change_basis, class_of_parabolic_verma, is_min_coset_rep, weyl_act_k0,
)
from .polyengine import MPoly, int_linear_power, linear_power
from .rootsys import Weight, mat_mul
from .weylkl import WeylElt

Exp = tuple[int, ...]


def _lcm_den(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den


def _int_combination(terms: Iterable[tuple[int, dict[Exp, int]]]) -> dict[Exp, int]:
    out: dict[Exp, int] = {}
    for a, poly in terms:
        for e, c in poly.items():
            out[e] = out.get(e, 0) + a * c
    return {e: c for e, c in out.items() if c}


def _verma(block: Block, c: K0Class) -> K0Class:
    return change_basis(block, c, VERMA)


def _orbit_alpha(block: Block, lam: Weight) -> dict[int, tuple[Fraction, ...]]:
    """alpha-coordinates of w(lambda+rho) for every w."""
    nu = lam + block.rd.rho
    return {w.index: block.rd.act(w.matrix, nu).alpha for w in block.group}


def _power_table(block: Block, lam: Weight, k: int) -> tuple[int, dict[int, dict[Exp, int]]]:
    """(D, {w: (D <w(lambda+rho), x>)^k}) with D clearing all denominators."""
    key = ("taylor", lam.omega, k)
    memo = block._memo
    if key not in memo:
        forms = _orbit_alpha(block, lam)
        den = _lcm_den(v for f in forms.values() for v in f)
        memo[key] = (den, {
            i: int_linear_power([int(v * den) for v in f], k) for i, f in forms.items()
        })
    return memo[key]


def taylor_component(block: Block, c: K0Class, lam: Weight, k: int) -> MPoly:
    """(1/k!) sum_w a_w <w(lambda+rho), x>^k in the coweight coordinates x."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    c = _verma(block, c)
    r = block.rd.rank
    if c.is_zero():
        return MPoly.zero(r)
    den, table = _power_table(block, lam, k)
    cden = _lcm_den(c.coeffs.values())
    acc = _int_combination((int(a * cden), table[w.index]) for w, a in c.coeffs.items())
    scale = Fraction(1, cden * den ** k * math.factorial(k))
    return MPoly(r, {e: v * scale for e, v in acc.items()})


def _bilinear(block: Block, w: WeylElt) -> MPoly:
    """<w(lambda+rho), x> as a polynomial in (m_1..m_r, x_1..x_r)."""
    rd = block.rd
    r = rd.rank
    b = mat_mul(rd.cartan_inv, w.matrix)  # alpha-coords of w(nu) from omega-coords of nu
    terms = {}
    for i in range(r):
        for j in range(r):
            if b[i][j]:
                e = [0] * (2 * r)
                e[j] = 1
                e[r + i] = 1
                terms[tuple(e)] = b[i][j]
    return MPoly(2 * r, terms)


def taylor_component_symbolic(block: Block, c: K0Class, k: int) -> MPoly:
    """Taylor component with lambda symbolic: variables m_1..m_r then x_1..x_r."""
    c = _verma(block, c)
    r = block.rd.rank
    out = MPoly.zero(2 * r)
    for w, a in c.items():
        out = out + linear_power(_bilinear(block, w), k).scale(a)
    return out.scale(Fraction(1, math.factorial(k)))


def weyl_alternating_sum(block: Block, k: int) -> MPoly:
    """sum_w sgn(w) <w(lambda+rho), x>^k, symbolic in lambda and x."""
    g = block.group
    alt = K0Class(VERMA, {w: g.sign(w) for w in g})
    return taylor_component_symbolic(block, alt, k).scale(math.factorial(k))


def gk_dimension(block: Block, c: K0Class) -> int:
    """|positive roots| - (first k with a nonzero Taylor component at lambda = 0)."""
    c = _verma(block, c)
    if c.is_zero():
        raise ZeroClass("the zero class has no GK dimension")
    zero = block.rd.zero()
    n = block.rd.n_pos
    for k in range(n + 1):
        if not taylor_component(block, c, zero, k).is_zero():
            return n - k
    # lowest components of the orbit exponentials span harmonics of degree <= n
    raise ArithmeticError("no nonzero Taylor component up to degree |positive roots|")


def normalization(block: Block, d: int) -> Fraction:
    """Scale making dominant charges equal weighted leading coefficients."""
    rd = block.rd
    k = rd.n_pos - d
    prod = math.prod(rd.heights)
    if d == 0:
        return Fraction(1, math.factorial(k) * prod)
    return Fraction(1, math.factorial(k) * math.factorial(d - 1) * prod)


@dataclass(frozen=True)
class ChargePoly:
    poly: MPoly
    stratum_d: int
    normalization: Fraction

    def __call__(self, m: Sequence) -> Fraction:
        return self.poly.evaluate(list(m))

    def at(self, lam: Weight) -> Fraction:
        return self.poly.evaluate([x + 1 for x in lam.omega])

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __str__(self):
        return str(self.poly)


def _rho_check_forms(block: Block) -> dict[int, tuple[int, ...]]:
    """2 <w(lambda+rho), rho_check> as integer coefficient vectors in m."""
    memo = block._memo
    if "rhocheck" not in memo:
        rd = block.rd
        out = {}
        for w in block.group:
            b = mat_mul(rd.cartan_inv, w.matrix)
            out[w.index] = tuple(int(2 * sum(b[i][j] for i in range(rd.rank)))
                                 for j in range(rd.rank))
        memo["rhocheck"] = out
    return memo["rhocheck"]


def _rho_check_powers(block: Block, k: int) -> dict[int, dict[Exp, int]]:
    key = ("rhocheck", k)
    memo = block._memo
    if key not in memo:
        memo[key] = {i: int_linear_power(f, k) for i, f in _rho_check_forms(block).items()}
    return memo[key]


def raw_charge(block: Block, c: K0Class, k: int) -> MPoly:
    """sum_w a_w <w(lambda+rho), rho_check>^k in m-coordinates, unnormalized."""
    c = _verma(block, c)
    r = block.rd.rank
    if c.is_zero():
        return MPoly.zero(r)
    table = _rho_check_powers(block, k)
    cden = _lcm_den(c.coeffs.values())
    acc = _int_combination((int(a * cden), table[w.index]) for w, a in c.coeffs.items())
    scale = Fraction(1, cden * 2 ** k)
    return MPoly(r, {e: v * scale for e, v in acc.items()})


def central_charge_poly(block: Block, c: K0Class, d: int, norm: Fraction | None = None) -> ChargePoly:
    n = block.rd.n_pos
    if not 0 <= d <= n:
        raise StratumViolation(f"stratum {d} outside 0..{n}")
    c = _verma(block, c)
    if not c.is_zero():
        gk = gk_dimension(block, c)
        if gk > d:
            raise StratumViolation(f"class has GK dimension {gk} > {d}")
    s = normalization(block, d) if norm is None else Fraction(norm)
    return ChargePoly(raw_charge(block, c, n - d).scale(s), d, s)


def leading_coefficient(block: Block, c: K0Class, lam: Weight, d: int | None = None,
                        norm: Fraction | None = None) -> Fraction:
    m = [x + 1 for x in lam.omega]
    if any(x < 0 for x in m):
        raise NotDominant(f"lambda + rho = {tuple(str(x) for x in m)} is not dominant")
    if d is None:
        d = gk_dimension(block, c)
    return central_charge_poly(block, c, d, norm)(m)


def w_equivariance_check(block: Block, c: K0Class, d: int) -> bool:
    """Z(y^-1.lambda)[y M] = Z(lambda)[M] as polynomials, for every y."""
    r = block.rd.rank
    base = central_charge_poly(block, c, d).poly
    g = block.group
    for y in g:
        moved = central_charge_poly(block, weyl_act_k0(block, y, c), d).poly
        m = g.inverse(y).matrix
        images = [MPoly.linear(m[i]) for i in range(r)]
        if moved.substitute_linear(images) != base:
            return False
    return True


# Hilbert-series oracle


@dataclass(frozen=True)
class QuasiPolynomial:
    period: int
    branches: tuple[tuple[Fraction, ...], ...]  # coefficients in n, lowest degree first
    onset: int

    @property
    def degree(self) -> int:
        return max(len(b) for b in self.branches) - 1

    @property
    def leading(self) -> Fraction:
        return self.branches[0][-1] if self.branches[0] else Fraction(0)

    def __call__(self, n: int) -> Fraction:
        b = self.branches[n % self.period]
        return sum((c * n ** i for i, c in enumerate(b)), Fraction(0))


@dataclass(frozen=True)
class HilbertSample:
    dims: tuple[int, ...]
    fitted: QuasiPolynomial
    lc: Fraction
    weighted: bool = True


def _series_coefficients(numer: int, heights: Sequence[int], n_max: int) -> list[int]:
    """Coefficients of numer / prod(1 - t^h) up to t^n_max."""
    coeffs = [0] * (n_max + 1)
    coeffs[0] = numer
    for h in heights:
        for n in range(h, n_max + 1):
            coeffs[n] += coeffs[n - h]
    return coeffs


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col]), None)
        if piv is None:
            raise FitFailure("singular interpolation system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[n] for row in aug]


def fit_quasi_polynomial(dims: Sequence[int], period: int, degree: int, onset: int) -> QuasiPolynomial:
    """Exact per-residue polynomial fit of the given degree, verified on all later samples."""
    branches = []
    n_max = len(dims) - 1
    for res in range(period):
        ns = [n for n in range(onset, n_max + 1) if n % period == res]
        if len(ns) < degree + 2:
            raise FitFailure(f"not enough samples for residue {res} (need {degree + 2})")
        pts = ns[: degree + 1]
        coeffs = _solve([[Fraction(n) ** i for i in range(degree + 1)] for n in pts],
                        [Fraction(dims[n]) for n in pts])
        for n in ns:
            if sum(c * n ** i for i, c in enumerate(coeffs)) != dims[n]:
                raise FitFailure(f"residue {res} branch fails at n = {n}")
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        branches.append(tuple(coeffs))
    degs = {len(b) - 1 for b in branches}
    if len(degs) != 1:
        raise FitFailure(f"branches disagree in degree: {sorted(degs)}")
    leads = {b[-1] for b in branches if b}
    if len(leads) > 1:
        raise FitFailure(f"branches disagree in leading coefficient: {sorted(leads)}")
    return QuasiPolynomial(period, tuple(branches), onset)


def levi_dimension(block: Block, subset: Iterable[int], w: WeylElt, lam: Weight) -> Fraction:
    """Weyl dimension of the Levi module with highest weight w.lambda."""
    rd = block.rd
    subset = set(subset)
    nu = rd.act(w.matrix, lam + rd.rho)
    num = Fraction(1)
    for beta, cor in zip(rd.positive_roots, rd.coroots):
        if all(beta[i - 1] == 0 for i in range(1, rd.rank + 1) if i not in subset):
            num *= rd.coroot_pairing(nu, cor) / rd.coroot_pairing(rd.rho, cor)
    return num


def hilbert_oracle(block: Block, subset: Iterable[int], w, lam: Weight, depth: int,
                   weighted: bool = True) -> HilbertSample:
    """Layer dimensions of a parabolic Verma module and their fitted growth.

    With ``weighted`` each root vector has filtration degree equal to its
    height; otherwise every root vector has degree one.
    """
    rd = block.rd
    subset = sorted(set(subset))
    w = block.elt(w)
    if not is_min_coset_rep(block, subset, w):
        # reuse the precondition error from the class constructor
        class_of_parabolic_verma(block, subset, w)
    if any(x < 0 or x.denominator != 1 for x in lam.omega):
        raise NotDominant(f"lambda = {lam} is not dominant integral")
    dim_v = levi_dimension(block, subset, w, lam)
    if dim_v.denominator != 1 or dim_v <= 0:
        raise ArithmeticError(f"Levi dimension {dim_v} is not a positive integer")
    outside = [h for beta, h in zip(rd.positive_roots, rd.heights)
               if any(beta[i - 1] for i in range(1, rd.rank + 1) if i not in subset)]
    if not weighted:
        outside = [1] * len(outside)
    d = len(outside)
    dims = _series_coefficients(int(dim_v), outside, depth)
    if d == 0:
        fitted = QuasiPolynomial(1, ((),), 0)
        return HilbertSample(tuple(dims), fitted, Fraction(sum(dims)), weighted)
    period = math.lcm(*outside)
    if depth < 4 * period * (d + 1):
        raise InsufficientDepth(f"depth {depth} too small; need at least {4 * period * (d + 1)}")
    fitted = fit_quasi_polynomial(dims, period, d - 1, depth // 2)
    return HilbertSample(tuple(dims), fitted, fitted.leading, weighted)
