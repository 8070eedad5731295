"""Complexified charges and phases of simple classes on the covered regular locus.

A covered point is a braid word together with a base point (lambda, mu) in
the fundamental domain S. The word's Weyl image moves the base point (dot
action on both coordinates) and transports the simple classes; the stability
charge of a class is i * (Z(lambda')[c] + i Z(mu')[c]).

Phases are classified exactly by sign data. Floats only appear in the
display-only ``approx`` field.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .charge import central_charge_poly
from .errors import ScanParseError, StratumViolation, VerificationFailure, ZeroCharge
from .ktheory import Block, braid_act, braid_image, class_of_simple, gk_stratify
from .rootsys import Weight, dot_action
from .rvsc import wall_order

GENERATORS = "abcd"


@dataclass(frozen=True)
class ExactComplex:
    re: Fraction
    im: Fraction

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}i"

    def is_zero(self) -> bool:
        return not self.re and not self.im


@dataclass(frozen=True)
class Phase:
    """Exact position of a nonzero complex number on the phase interval (0, 2]."""

    interval: str  # "(0,1)", "1", "(1,2)" or "2"
    cot: Fraction | None  # re/im, when im != 0
    exact: Fraction | None  # the phase itself, when it is rational and known
    approx: float  # display only

    @property
    def in_open_upper(self) -> bool:
        return self.interval == "(0,1)"


_EXACT = {Fraction(1): Fraction(1, 4), Fraction(0): Fraction(1, 2), Fraction(-1): Fraction(3, 4)}


def phase(z: ExactComplex) -> Phase:
    if z.is_zero():
        raise ZeroCharge("phase of zero is undefined")
    approx = math.atan2(z.im, z.re) / math.pi
    if approx <= 0:
        approx += 2
    if z.im == 0:
        return Phase("1", None, Fraction(1), 1.0) if z.re < 0 else Phase("2", None, Fraction(2), 2.0)
    cot = z.re / z.im
    base = _EXACT.get(cot)
    if z.im > 0:
        return Phase("(0,1)", cot, base, approx)
    return Phase("(1,2)", cot, base + 1 if base is not None else None, approx)


def _m(w: Weight) -> list[Fraction]:
    return [x + 1 for x in w.omega]


def in_fundamental_domain(lam: Weight, mu: Weight) -> bool:
    """lambda in the open dominant alcove, or in its closure with mu in the open alcove."""
    ml, mm = _m(lam), _m(mu)
    if len(ml) != len(mm):
        return False
    if all(x > 0 for x in ml):
        return True
    return all(x >= 0 for x in ml) and all(x > 0 for x in mm)


def format_braid(word: Sequence[int]) -> str:
    if not word:
        return "."
    return "".join(GENERATORS[abs(g) - 1] + ("'" if g < 0 else "") for g in word)


def parse_braid(token: str, rank: int) -> tuple[int, ...]:
    if token == ".":
        return ()
    if not re.fullmatch(r"([a-d]'?)+", token):
        raise ValueError(f"bad braid word {token!r}")
    out = []
    for m in re.finditer(r"([a-d])('?)", token):
        i = GENERATORS.index(m.group(1)) + 1
        if i > rank:
            raise ValueError(f"generator {m.group(1)!r} exceeds rank {rank}")
        out.append(-i if m.group(2) else i)
    return tuple(out)


@dataclass(frozen=True)
class CoveredPoint:
    braid_word: tuple[int, ...]
    lam: Weight
    mu: Weight

    def __post_init__(self):
        if not in_fundamental_domain(self.lam, self.mu):
            raise ValueError(f"({self.lam}, {self.mu}) is not in the fundamental domain")

    def __str__(self):
        return f"{format_braid(self.braid_word)} {self.lam} {self.mu}"


def projected(block: Block, point: CoveredPoint) -> tuple[Weight, Weight]:
    w = braid_image(block, point.braid_word)
    return dot_action(block.rd, w, point.lam), dot_action(block.rd, w, point.mu)


def complex_charge(block: Block, point: CoveredPoint, w, d: int) -> ExactComplex:
    """i * (Z(lambda')[c] + i Z(mu')[c]) for c the braid-transported class of L(w)."""
    w = block.elt(w)
    gk = gk_stratify(block).gk_of_simple[w]
    if gk != d:
        raise StratumViolation(f"L({w}) has GK dimension {gk}, not {d}")
    lam, mu = projected(block, point)
    c = braid_act(block, point.braid_word, class_of_simple(block, w))
    z = central_charge_poly(block, c, d)
    return ExactComplex(-z.at(mu), z.at(lam))


@dataclass(frozen=True)
class SimpleEntry:
    simple: str
    value: ExactComplex
    phase: Phase


@dataclass
class StabilityReport:
    point: CoveredPoint
    projected: tuple[Weight, Weight]
    entries: list[SimpleEntry]
    walls: tuple[int, ...]  # simple walls containing lambda (1-based)
    checks: dict[str, bool] = field(default_factory=dict)

    def phase_one(self) -> list[str]:
        return [e.simple for e in self.entries if e.phase.interval == "1"]

    def signature(self) -> list[tuple[str, str, str]]:
        """Per-simple (simple, value, phase class), used for equivariance comparisons."""
        return [(e.simple, str(e.value), e.phase.interval) for e in self.entries]


def _report(block: Block, point: CoveredPoint, d: int) -> StabilityReport:
    entries = []
    for w in gk_stratify(block).stratum(d):
        z = complex_charge(block, point, w, d)
        entries.append(SimpleEntry(str(w), z, phase(z)))
    walls = tuple(i + 1 for i, x in enumerate(_m(point.lam)) if x == 0)
    return StabilityReport(point, projected(block, point), entries, walls)


def _fail(msg: str, report: StabilityReport, **extra):
    raise VerificationFailure(msg, dict({"point": str(report.point)}, **extra))


def scan(block: Block, points: Iterable[CoveredPoint], d: int, check: bool = True) -> list[StabilityReport]:
    """Phases of every stratum-d simple at each point, with the half-plane checks."""
    out = []
    rank = block.rd.rank
    for point in points:
        rep = _report(block, point, d)
        if check:
            if not rep.walls:
                bad = [e.simple for e in rep.entries if not e.phase.in_open_upper]
                if bad:
                    _fail("interior point has a phase outside (0,1)", rep, simple=bad[0])
                rep.checks["interior"] = True
            elif len(rep.walls) == 1:
                a = rep.walls[0]
                for e in rep.entries:
                    want_one = wall_order(block, e.simple, a, d) >= 1
                    got = e.phase.interval
                    if (want_one and got != "1") or (not want_one and got != "(0,1)"):
                        _fail(f"wall alpha{a}: phase of L({e.simple}) is {got}", rep, simple=e.simple)
                rep.checks["wall"] = True
            else:
                bad = [e.simple for e in rep.entries if e.phase.interval not in ("(0,1)", "1")]
                if bad:
                    _fail("boundary point has a phase outside (0,1]", rep, simple=bad[0])
                rep.checks["boundary"] = True
            for g in [*range(1, rank + 1), *range(-1, -rank - 1, -1)]:
                moved = CoveredPoint((g,) + point.braid_word, point.lam, point.mu)
                if _report(block, moved, d).signature() != rep.signature():
                    _fail(f"deck transformation by {format_braid((g,))} changes the report",
                          rep, generator=format_braid((g,)))
            rep.checks["deck"] = True
        out.append(rep)
    return out


def parse_scan(text: str, block: Block) -> list[CoveredPoint]:
    """One point per line: braid word, then 2r rationals (lambda then mu, omega-coordinates)."""
    rank = block.rd.rank
    points = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 1 + 2 * rank:
            raise ScanParseError(f"expected a braid word and {2 * rank} rationals, got {len(fields)} fields", lineno)
        try:
            word = parse_braid(fields[0], rank)
            nums = [Fraction(f) for f in fields[1:]]
        except (ValueError, ZeroDivisionError) as exc:
            raise ScanParseError(str(exc), lineno) from None
        lam, mu = block.rd.weight(nums[:rank]), block.rd.weight(nums[rank:])
        if not in_fundamental_domain(lam, mu):
            raise ScanParseError(f"({lam}, {mu}) is not in the fundamental domain", lineno)
        points.append(CoveredPoint(word, lam, mu))
    return points
