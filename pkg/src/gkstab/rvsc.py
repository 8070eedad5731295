"""Checks of the two axioms of a real variation of stability conditions.

Alcoves are the rho-shifted Weyl chambers, labelled by w with
w^-1(lambda+rho) dominant. Axiom 1 asks the stratum charges of heart simples
to be positive on their alcove; by W-equivariance it suffices to look at the
dominant alcove. Axiom 2 ties the vanishing order of a charge on a wall to
the shift by which the wall crossing acts on the simple, which on K0 is a
sign (order one) or the identity modulo order-one simples (order zero).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .charge import ChargePoly, central_charge_poly, w_equivariance_check
from .errors import OnWall, StratumViolation, VerificationFailure
from .ktheory import (
    SIMPLE, Block, K0Class, change_basis, class_of_simple, gk_stratify,
    project_to_stratum, weyl_act_k0,
)
from .polyengine import LinearForm, MPoly, apply_diff_op, reynolds_invariants, vanishing_order
from .rootsys import Weight
from .weylkl import WeylElt

COEFF_CERT = "COEFF-CERT"
SAMPLED = "SAMPLED"


@dataclass(frozen=True)
class Alcove:
    label: WeylElt

    def __str__(self):
        return f"alcove({self.label})"


def alcove_of(block: Block, lam: Weight) -> Alcove:
    """The alcove containing lambda; OnWall if lambda + rho is singular."""
    rd = block.rd
    nu = lam + rd.rho
    for cor in rd.coroots:
        if rd.coroot_pairing(nu, cor) == 0:
            raise OnWall(f"lambda + rho lies on the wall of coroot {cor}", cor)
    g = block.group
    w = g.identity
    v = list(nu.omega)
    while True:
        i = next((i for i, x in enumerate(v) if x < 0), None)
        if i is None:
            return Alcove(w)
        v = list(rd.act(rd.reflection_matrix(i + 1), rd.weight(v)).omega)
        w = g.right_mul(w, i + 1)


def _positive_coroot_of(block: Block, w: WeylElt, alpha: int) -> tuple[tuple[int, ...], int]:
    """(coroot, sign) with w(coroot_alpha) = sign * coroot, coroot positive."""
    rd = block.rd
    image = rd.act(w.matrix, rd.simple_root(alpha)).alpha
    vec = tuple(int(x) for x in image)
    sign = 1 if any(x > 0 for x in vec) else -1
    pos = tuple(sign * x for x in vec)
    return rd.coroots[rd.positive_roots.index(pos)], sign


def wall_form(coroot: Sequence[int]) -> LinearForm:
    """<lambda + rho, coroot> as a linear form in the m-coordinates."""
    return LinearForm.of(coroot)


@dataclass(frozen=True)
class WallCrossing:
    source: Alcove
    target: Alcove
    alpha: int
    coroot: tuple[int, ...]
    wall: LinearForm
    above: bool


def wall_crossings(block: Block) -> list[WallCrossing]:
    """Every crossing w -> w s_alpha; ``above`` means the target is on the dominant side."""
    rd = block.rd
    out = []
    for w in block.group:
        for a in range(1, rd.rank + 1):
            cor, _ = _positive_coroot_of(block, w, a)
            ws = block.group.right_mul(w, a)
            side = rd.coroot_pairing(rd.act(ws.matrix, rd.rho), cor)
            out.append(WallCrossing(Alcove(w), Alcove(ws), a, cor, wall_form(cor), side > 0))
    return out


def stratum_charge(block: Block, w, d: int) -> ChargePoly:
    """Charge of the simple L(w) in stratum d, which must be its GK dimension."""
    w = block.elt(w)
    gk = gk_stratify(block).gk_of_simple[w]
    if gk != d:
        raise StratumViolation(f"L({w}) has GK dimension {gk}, not {d}")
    key = ("stratum_charge", w.index, d)
    if key not in block._memo:
        block._memo[key] = central_charge_poly(block, class_of_simple(block, w), d)
    return block._memo[key]


def simple_form(block: Block, alpha: int) -> LinearForm:
    return LinearForm.of([int(i == alpha - 1) for i in range(block.rd.rank)])


def wall_order(block: Block, w, alpha: int, d: int) -> int:
    return vanishing_order(stratum_charge(block, w, d).poly, simple_form(block, alpha))


def order_table(block: Block, d: int) -> dict[WeylElt, tuple[int, ...]]:
    """Vanishing orders of each stratum-d simple on the simple walls."""
    return {w: tuple(wall_order(block, w, a, d) for a in range(1, block.rd.rank + 1))
            for w in gk_stratify(block).stratum(d)}


def length_criterion_check(block: Block, alpha: int, d: int) -> bool:
    """Order >= 1 on the alpha wall exactly when l(w s_alpha) = l(w) + 1."""
    g = block.group
    for w in gk_stratify(block).stratum(d):
        up = g.right_mul(w, alpha).length == w.length + 1
        if (wall_order(block, w, alpha, d) >= 1) != up:
            return False
    return True


@dataclass(frozen=True)
class DoubleZeroResult:
    ok: bool
    max_order: int
    combos_checked: int
    witness: dict | None = None


def no_double_zero_check(block: Block, d: int, combos: int = 100, seed: int = 0) -> DoubleZeroResult:
    """Max vanishing order <= 1 on every positive-coroot wall for simples and random
    nonnegative integer combinations of them."""
    stratum = gk_stratify(block).stratum(d)
    if not stratum:
        return DoubleZeroResult(True, 0, 0)
    charges = [stratum_charge(block, w, d).poly for w in stratum]
    walls = [wall_form(c) for c in block.rd.coroots]
    rng = random.Random(seed)
    candidates: list[tuple[dict, MPoly]] = [({str(w): 1}, p) for w, p in zip(stratum, charges)]
    while len(candidates) < len(stratum) + combos:
        coeffs = [rng.randint(0, 3) for _ in stratum]
        if not any(coeffs):
            continue
        p = MPoly.zero(block.rd.rank)
        for c, q in zip(coeffs, charges):
            if c:
                p = p + q.scale(c)
        candidates.append(({str(w): c for w, c in zip(stratum, coeffs) if c}, p))
    worst = 0
    for label, p in candidates:
        for cor, ell in zip(block.rd.coroots, walls):
            o = vanishing_order(p, ell)
            if o > 1:
                return DoubleZeroResult(False, o, len(candidates) - len(stratum),
                                        {"class": label, "coroot": list(cor), "order": o})
            worst = max(worst, o)
    return DoubleZeroResult(True, worst, len(candidates) - len(stratum))


def invariant_operators(block: Block, max_deg: int) -> list[MPoly]:
    """Spanning set of W-invariant constant-coefficient operators in d/dm, degrees 1..max_deg."""
    key = ("invariant_ops", max_deg)
    if key not in block._memo:
        mats = [w.matrix for w in block.group]
        block._memo[key] = reynolds_invariants(mats, max_deg, block.rd.rank) if max_deg >= 1 else []
    return block._memo[key]


def mean_value_defect(block: Block, f: MPoly) -> MPoly:
    """avg_w f(m + w u) - f(m) in variables (m_1..m_r, u_1..u_r); zero iff the identity holds."""
    r = block.rd.rank
    total = MPoly.zero(2 * r)
    for w in block.group:
        m = w.matrix
        images = [MPoly.linear([int(j == i) for j in range(r)] + list(m[i])) for i in range(r)]
        total = total + f.substitute_linear(images)
    lifted = f.substitute_linear([MPoly.var(2 * r, i) for i in range(r)])
    return total.scale(Fraction(1, len(block.group))) - lifted


def harmonicity_check(block: Block, c: K0Class, d: int) -> bool:
    """Invariant operators annihilate the charge, and the mean-value identity holds."""
    f = central_charge_poly(block, c, d).poly
    for op in invariant_operators(block, max(f.degree(), 0)):
        if not apply_diff_op(op, f).is_zero():
            return False
    return mean_value_defect(block, f).is_zero()


@dataclass(frozen=True)
class Certificate:
    simple: str
    tier: str
    points: int
    charge: str


def _sample_points(r: int, count: int, seed: int) -> list[tuple[int, ...]]:
    """Integer numerators over a shared denominator: interior rational points of the orthant."""
    rng = random.Random(seed)
    pts = {tuple(a) for a in _lattice(r, 3)}
    out = sorted(pts)
    seen = set(out)
    while len(out) < count + len(pts):
        p = tuple(rng.randint(1, 97) for _ in range(r))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _lattice(r: int, top: int):
    if r == 0:
        yield ()
        return
    for rest in _lattice(r - 1, top):
        for x in range(1, top + 1):
            yield rest + (x,)


def positivity_certificate(p: MPoly, grid: int = 1000, seed: int = 0) -> tuple[str, int]:
    """Certify p > 0 on the open positive orthant, or raise with a witness."""
    if p.is_zero():
        raise VerificationFailure("charge polynomial is zero", {"point": None})
    if all(c > 0 for c in p.terms.values()):
        return COEFF_CERT, 0
    _, ints = p.integer_scaled()
    pts = _sample_points(p.nvars, grid, seed)
    # p is homogeneous, so the sign at a/q equals the sign of the integer numerator sum
    for a in pts:
        v = 0
        for e, c in ints.items():
            t = c
            for x, k in zip(a, e):
                if k:
                    t *= x ** k
            v += t
        if v <= 0:
            raise VerificationFailure(f"charge {p} is not positive",
                                      {"m": [str(x) for x in a], "value_sign": (v > 0) - (v < 0)})
    return SAMPLED, len(pts)


def axiom1_verify(block: Block, d: int, grid: int = 1000, seed: int = 0) -> list[Certificate]:
    certs = []
    for w in gk_stratify(block).stratum(d):
        p = stratum_charge(block, w, d).poly
        if not p.is_homogeneous():
            raise VerificationFailure(f"charge of L({w}) is not homogeneous", {"simple": str(w)})
        try:
            tier, n = positivity_certificate(p, grid, seed)
        except VerificationFailure as exc:
            raise VerificationFailure(f"L({w}): {exc}", dict(exc.witness or {}, simple=str(w))) from None
        certs.append(Certificate(str(w), tier, n, str(p)))
    return certs


@dataclass(frozen=True)
class Axiom2Result:
    ok: bool
    alpha: int
    order_one: tuple[str, ...]
    order_zero: tuple[str, ...]
    failures: tuple[str, ...] = ()


def axiom2_verify(block: Block, alpha: int, d: int) -> Axiom2Result:
    """K0 shadow of the shift-by-order rule for crossing the alpha wall."""
    g = block.group
    s = g.s(alpha)
    stratum = gk_stratify(block).stratum(d)
    orders = {w: wall_order(block, w, alpha, d) for w in stratum}
    ones = {w for w, o in orders.items() if o == 1}
    failures = []
    for w in stratum:
        o = orders[w]
        L = class_of_simple(block, w)
        moved = weyl_act_k0(block, s, L)
        if o >= 2:
            failures.append(f"L({w}) has order {o}")
        elif o == 1:
            if moved != -L:
                failures.append(f"s{alpha} does not act by -1 on L({w})")
        else:
            diff = project_to_stratum(block, moved, d) - change_basis(block, L, SIMPLE)
            stray = [v for v in diff.coeffs if v not in ones]
            if stray:
                failures.append(f"s{alpha} L({w}) - L({w}) involves order-0 simple L({stray[0]})")
    return Axiom2Result(not failures, alpha,
                        tuple(str(w) for w in stratum if w in ones),
                        tuple(str(w) for w in stratum if orders[w] == 0),
                        tuple(failures))


def transport_check(block: Block, d: int) -> bool:
    """Orders on the crossing wall of alcove w match the dominant wall orders.

    The heart simple of alcove w is the transported class w^-1 L; its charge
    must vanish on the wall of w(coroot_alpha) to the same order as L on m_alpha.
    """
    g = block.group
    stratum = gk_stratify(block).stratum(d)
    for cross in wall_crossings(block):
        w = cross.source.label
        for v in stratum:
            moved = weyl_act_k0(block, g.inverse(w), class_of_simple(block, v))
            p = central_charge_poly(block, moved, d).poly
            if vanishing_order(p, cross.wall) != wall_order(block, v, cross.alpha, d):
                return False
    return True


@dataclass
class AxiomReport:
    lie_type: str
    strata: dict[int, list[str]]
    normalization: dict[int, str] = field(default_factory=dict)
    axiom1: dict[int, list[Certificate]] = field(default_factory=dict)
    axiom2: dict[int, list[Axiom2Result]] = field(default_factory=dict)
    harmonic: dict[int, dict[str, bool]] = field(default_factory=dict)
    length_criterion: dict[int, dict[int, bool]] = field(default_factory=dict)
    double_zero: dict[int, DoubleZeroResult] = field(default_factory=dict)
    equivariance: dict[int, dict[str, bool]] = field(default_factory=dict)
    transport: dict[int, bool] = field(default_factory=dict)
    orders: dict[int, dict[str, tuple[int, ...]]] = field(default_factory=dict)
    max_wall_order: int = 0
    failure: dict | None = None

    @property
    def passed(self) -> bool:
        if self.failure is not None:
            return False
        checks = [r.ok for rs in self.axiom2.values() for r in rs]
        checks += [v for h in self.harmonic.values() for v in h.values()]
        checks += [v for h in self.length_criterion.values() for v in h.values()]
        checks += [r.ok for r in self.double_zero.values()]
        checks += [v for h in self.equivariance.values() for v in h.values()]
        checks += list(self.transport.values())
        return all(checks) and self.max_wall_order <= 1


def verify_all(block: Block, strata: Sequence[int] | None = None, grid: int = 1000,
               seed: int = 0, combos: int = 100, transport: bool = True) -> AxiomReport:
    from .charge import normalization

    strat = gk_stratify(block)
    ds = strat.nonempty() if strata is None else list(strata)
    rank = block.rd.rank
    report = AxiomReport(str(block.lie_type),
                         {d: [str(w) for w in strat.stratum(d)] for d in ds})
    for d in ds:
        report.normalization[d] = str(normalization(block, d))
        stratum = strat.stratum(d)
        table = order_table(block, d)
        report.orders[d] = {str(w): o for w, o in table.items()}
        report.max_wall_order = max([report.max_wall_order] + [max(o) for o in table.values()])
        try:
            report.axiom1[d] = axiom1_verify(block, d, grid, seed)
        except VerificationFailure as exc:
            report.failure = {"check": "axiom1", "stratum": d, "message": str(exc),
                              "witness": exc.witness}
            return report
        report.axiom2[d] = [axiom2_verify(block, a, d) for a in range(1, rank + 1)]
        report.length_criterion[d] = {a: length_criterion_check(block, a, d) for a in range(1, rank + 1)}
        report.double_zero[d] = no_double_zero_check(block, d, combos, seed)
        report.harmonic[d] = {str(w): harmonicity_check(block, class_of_simple(block, w), d)
                              for w in stratum}
        report.equivariance[d] = {str(w): w_equivariance_check(block, class_of_simple(block, w), d)
                                  for w in stratum}
        if transport:
            report.transport[d] = transport_check(block, d)
    return report
