import itertools
import math
from fractions import Fraction

import pytest

from gkstab.charge import (
    FitFailure, central_charge_poly, fit_quasi_polynomial, gk_dimension, hilbert_oracle,
    leading_coefficient, levi_dimension, normalization, taylor_component,
    taylor_component_symbolic, w_equivariance_check, weyl_alternating_sum,
)
from gkstab.errors import InsufficientDepth, InvalidCosetRepresentative, NotDominant, StratumViolation, ZeroClass
from gkstab.ktheory import (
    VERMA, K0Class, class_of_parabolic_verma, class_of_simple, class_of_verma, get_block,
    gk_stratify, is_min_coset_rep,
)
from gkstab.polyengine import MPoly, parse_poly

TYPES = ["A1", "A2", "A3", "B2", "G2"]
MX = ["m1", "m2", "x1", "x2"]


def poly(text, names=("m1", "m2")):
    return parse_poly(text, list(names))


def test_a2_charges(a2):
    expected = {"s2s1": "1/2*m2", "s1s2": "1/2*m1", "s1": "1/2*m2", "s2": "1/2*m1"}
    for w, text in expected.items():
        z = central_charge_poly(a2, class_of_simple(a2, w), 2)
        assert z.poly == poly(text)
        assert z.normalization == Fraction(1, 2)
    assert central_charge_poly(a2, class_of_simple(a2, "e"), 2).is_zero()
    assert central_charge_poly(a2, class_of_simple(a2, "s1s2s1"), 3).poly.is_homogeneous(0)
    with pytest.raises(StratumViolation):
        central_charge_poly(a2, class_of_simple(a2, "s1s2s1"), 2)


def test_a2_linear_taylor_components(a2):
    expected = {"s2s1": "m2*x1", "s1s2": "m1*x2", "s1": "m2*x2", "s2": "m1*x1"}
    for w, text in expected.items():
        c = class_of_simple(a2, w)
        assert taylor_component_symbolic(a2, c, 0).is_zero()
        assert taylor_component_symbolic(a2, c, 1) == poly(text, MX)
        # at lambda = 0 both m's equal 1
        at_zero = taylor_component(a2, c, a2.rd.zero(), 1)
        assert at_zero == poly(text.split("*")[1], ("x1", "x2"))


def test_taylor_examples(a2):
    verma = class_of_verma(a2, "e")
    assert taylor_component(a2, verma, a2.rd.weight([3, 5]), 0) == MPoly.constant(2, 1)
    fin = class_of_simple(a2, "e")
    for k in range(3):
        assert taylor_component(a2, fin, a2.rd.weight([2, 1]), k).is_zero()
    assert not taylor_component(a2, fin, a2.rd.zero(), 3).is_zero()


@pytest.mark.parametrize("t", TYPES)
def test_weyl_vanishing(t):
    b = get_block(t)
    n = b.rd.n_pos
    for k in range(n):
        assert weyl_alternating_sum(b, k).is_zero()
    assert not weyl_alternating_sum(b, n).is_zero()


def test_gk_examples(a2):
    assert gk_dimension(a2, class_of_simple(a2, "s1s2s1")) == 3
    assert gk_dimension(a2, class_of_simple(a2, "s1")) == 2
    assert gk_dimension(a2, class_of_parabolic_verma(a2, [1], "s2")) == 2
    with pytest.raises(ZeroClass):
        gk_dimension(a2, K0Class(VERMA))


@pytest.mark.parametrize("t", TYPES + ["B3"])
def test_gk_minimality_certificate(t):
    """Components below the first nonzero one vanish symbolically in both lambda and x."""
    b = get_block(t)
    n = b.rd.n_pos
    for w in b.group:
        c = class_of_simple(b, w)
        k = n - gk_stratify(b).gk_of_simple[w]
        if t != "B3":
            for j in range(k):
                assert taylor_component_symbolic(b, c, j).is_zero()
            assert not taylor_component_symbolic(b, c, k).is_zero()
        for j in range(k):
            assert taylor_component(b, c, b.rd.zero(), j).is_zero()


@pytest.mark.parametrize("t", TYPES)
def test_parabolic_gk_formula(t):
    b = get_block(t)
    rd = b.rd
    for size in range(rd.rank + 1):
        for subset in itertools.combinations(range(1, rd.rank + 1), size):
            levi_roots = sum(1 for beta in rd.positive_roots
                             if all(beta[i] == 0 for i in range(rd.rank) if i + 1 not in subset))
            for w in b.group:
                if is_min_coset_rep(b, subset, w):
                    c = class_of_parabolic_verma(b, subset, w)
                    assert gk_dimension(b, c) == rd.n_pos - levi_roots


@pytest.mark.parametrize("t", TYPES)
def test_charge_homogeneous_and_additive(t):
    b = get_block(t)
    strat = gk_stratify(b)
    for d in strat.nonempty():
        total = K0Class(VERMA)
        acc = MPoly.zero(b.rd.rank)
        for w in strat.stratum(d):
            c = class_of_simple(b, w)
            z = central_charge_poly(b, c, d).poly
            assert z.is_homogeneous(b.rd.n_pos - d) and not z.is_zero()
            total = total + c.scale(2)
            acc = acc + z.scale(2)
        assert central_charge_poly(b, total, d).poly == acc
        for w in b.group:
            if strat.gk_of_simple[w] < d:
                assert central_charge_poly(b, class_of_simple(b, w), d).is_zero()


@pytest.mark.parametrize("t", TYPES)
def test_w_equivariance(t):
    b = get_block(t)
    strat = gk_stratify(b)
    for w in b.group:
        assert w_equivariance_check(b, class_of_simple(b, w), strat.gk_of_simple[w])


def test_leading_coefficient_examples(a2, a1):
    c = class_of_simple(a2, "s2s1")
    for lam in ([0, 0], [3, 1], [1, 4]):
        wt = a2.rd.weight(lam)
        assert leading_coefficient(a2, c, wt) == Fraction(lam[1] + 1, 2)
    for k in range(5):
        assert leading_coefficient(a1, class_of_simple(a1, "s1"), a1.rd.weight([k])) == 1
    fin = class_of_simple(a2, "e")
    assert leading_coefficient(a2, fin, a2.rd.weight([1, 1]), 2) == 0
    assert leading_coefficient(a2, fin, a2.rd.weight([1, 0])) == 8 // 8 * 3  # dim of the standard rep
    with pytest.raises(NotDominant):
        leading_coefficient(a2, c, a2.rd.weight([-2, 0]))


def test_finite_dimensional_charge_is_weyl_dimension():
    known = {("A2", (1, 1)): 8, ("B2", (1, 0)): 5, ("B2", (0, 1)): 4, ("G2", (1, 0)): 7,
             ("G2", (0, 1)): 14, ("A3", (0, 1, 0)): 6}
    for (t, lam), dim in known.items():
        b = get_block(t)
        assert leading_coefficient(b, class_of_simple(b, "e"), b.rd.weight(lam)) == dim


def test_normalization_values(a1, a2):
    assert normalization(a2, 2) == Fraction(1, 2)
    assert normalization(a1, 1) == 1
    assert normalization(a2, 0) == Fraction(1, 12)


# Hilbert oracle


def brute_layer_dims(heights, n_max, dim_v):
    counts = [0] * (n_max + 1)
    ranges = [range(n_max // h + 1) for h in heights]
    for combo in itertools.product(*ranges):
        n = sum(c * h for c, h in zip(combo, heights))
        if n <= n_max:
            counts[n] += 1
    return [dim_v * c for c in counts]


def test_example_layer_count(a2):
    lam = a2.rd.weight([2, 3])
    s = hilbert_oracle(a2, [1], "s2s1", lam, 40)
    dim_v = lam.omega[1] + 1
    expected = [dim_v * sum(1 for i in range(n + 1) for j in range(n + 1) if 2 * i + j == n)
                for n in range(41)]
    assert list(s.dims) == expected
    assert s.lc == Fraction(dim_v, 2)
    assert s.fitted.degree == 1 and s.fitted.period == 2
    for n in range(s.fitted.onset, 41):
        assert s.fitted(n) == s.dims[n]


def test_oracle_small_examples(a1, a2):
    s = hilbert_oracle(a1, [], "s1", a1.rd.weight([3]), 20)
    assert set(s.dims) == {1} and s.lc == 1
    lam = a2.rd.weight([1, 2])
    s2 = hilbert_oracle(a2, [1], "s2", lam, 40)
    assert s2.lc == Fraction(2 + 3, 2)
    assert s2.lc == leading_coefficient(a2, class_of_parabolic_verma(a2, [1], "s2"), lam)
    with pytest.raises(InvalidCosetRepresentative):
        hilbert_oracle(a2, [1], "s1", lam, 40)
    with pytest.raises(NotDominant):
        hilbert_oracle(a2, [1], "s2", a2.rd.weight([-1, 0]), 40)
    with pytest.raises(InsufficientDepth):
        hilbert_oracle(a2, [], "e", lam, 10)


@pytest.mark.parametrize("t", ["A1", "A2", "B2"])
def test_oracle_dims_against_brute_force(t):
    b = get_block(t)
    rd = b.rd
    lam = rd.weight([1] * rd.rank)
    for size in range(rd.rank + 1):
        for subset in itertools.combinations(range(1, rd.rank + 1), size):
            for w in b.group:
                if not is_min_coset_rep(b, subset, w):
                    continue
                outside = [h for beta, h in zip(rd.positive_roots, rd.heights)
                           if any(beta[i] for i in range(rd.rank) if i + 1 not in subset)]
                dim_v = levi_dimension(b, subset, w, lam)
                depth = 200 if outside else 15
                s = hilbert_oracle(b, subset, w, lam, depth)
                assert list(s.dims[:16]) == brute_layer_dims(outside, 15, dim_v)
                if outside:
                    expected = dim_v / (math.factorial(len(outside) - 1) * math.prod(outside))
                    assert s.lc == expected
                    plain = hilbert_oracle(b, subset, w, lam, depth, weighted=False)
                    assert plain.lc == s.lc * math.prod(outside)


def test_fit_failure_detected():
    dims = [n * n if n % 2 else n for n in range(60)]
    with pytest.raises(FitFailure):
        fit_quasi_polynomial(dims, 2, 1, 30)
    dims = [n + (n % 2) * 5 for n in range(60)]
    q = fit_quasi_polynomial(dims, 2, 1, 30)
    assert q.leading == 1
    with pytest.raises(FitFailure):
        fit_quasi_polynomial([n * (1 + n % 2) for n in range(60)], 2, 1, 30)
