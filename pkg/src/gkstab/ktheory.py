"""Grothendieck group of the principal block with Verma and simple bases.

A ``K0Class`` is a finite rational combination of basis labels, each label a
Weyl group element. ``Block`` bundles everything the class operations need:
root datum, Weyl group, KL table and the two change-of-basis matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import IncompleteCache, InvalidCosetRepresentative, StratumViolation
from .rootsys import LieType, RootDatum, build_root_datum
from .weylkl import (
    KLTable, WeylElt, WeylGroup, invert_unitriangular, load_or_build, simple_to_verma_matrix,
)

VERMA = "verma"
SIMPLE = "simple"


class K0Class:
    """Immutable rational combination of Verma or simple classes."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: str, coeffs: Mapping[WeylElt, object] | None = None):
        if basis not in (VERMA, SIMPLE):
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        clean = {}
        for w, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                clean[w] = clean.get(w, 0) + c
        self.coeffs: dict[WeylElt, Fraction] = {w: c for w, c in clean.items() if c}

    @classmethod
    def basis_vector(cls, basis: str, w: WeylElt) -> "K0Class":
        return cls(basis, {w: 1})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def items(self) -> list[tuple[WeylElt, Fraction]]:
        return sorted(self.coeffs.items(), key=lambda t: t[0].index)

    def __getitem__(self, w: WeylElt) -> Fraction:
        return self.coeffs.get(w, Fraction(0))

    def _check(self, other: "K0Class"):
        if not isinstance(other, K0Class):
            raise TypeError(f"cannot combine K0Class with {type(other).__name__}")
        if other.basis != self.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return K0Class(self.basis, out)

    def __neg__(self) -> "K0Class":
        return K0Class(self.basis, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def scale(self, c) -> "K0Class":
        c = Fraction(c)
        return K0Class(self.basis, {w: c * v for w, v in self.coeffs.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, K0Class):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.basis == other.basis and self.coeffs == other.coeffs

    __hash__ = None

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        sym = "D" if self.basis == VERMA else "L"
        parts = []
        for w, c in self.items():
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("-" if c < 0 else "+", f"{mag}{sym}({w})"))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"K0Class({self.basis}, {self.render()})"


@dataclass
class Block:
    """Shared immutable tables for one Lie type."""

    rd: RootDatum
    group: WeylGroup
    kl: KLTable
    to_verma: list[dict[int, int]] = field(repr=False)
    to_simple: list[dict[int, Fraction]] = field(repr=False)
    _strat: "GKStratification | None" = field(default=None, repr=False)
    _memo: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, t: LieType | str, cache_dir=None) -> "Block":
        rd = build_root_datum(t)
        group = WeylGroup(rd)
        kl = load_or_build(group, cache_dir)
        if not kl.is_complete():
            raise IncompleteCache(f"KL table for {rd.lie_type} is incomplete")
        rows = simple_to_verma_matrix(group, kl)
        return cls(rd, group, kl, rows, invert_unitriangular(rows, group))

    @property
    def lie_type(self) -> LieType:
        return self.rd.lie_type

    def elt(self, w: WeylElt | str | Sequence[int]) -> WeylElt:
        return w if isinstance(w, WeylElt) else self.group.from_word(w)


_BLOCKS: dict[tuple[LieType, str | None], Block] = {}


def get_block(t: LieType | str, cache_dir=None) -> Block:
    """Build once per (type, cache dir) and reuse."""
    if isinstance(t, str):
        t = LieType.parse(t)
    key = (t, str(cache_dir) if cache_dir else None)
    if key not in _BLOCKS:
        _BLOCKS[key] = Block.build(t, cache_dir)
    return _BLOCKS[key]


def class_of_verma(block: Block, w) -> K0Class:
    return K0Class.basis_vector(VERMA, block.elt(w))


def class_of_simple(block: Block, w) -> K0Class:
    w = block.elt(w)
    row = block.to_verma[w.index]
    return K0Class(VERMA, {block.group[y]: c for y, c in row.items()})


def parabolic_subgroup(block: Block, subset: Iterable[int]) -> list[WeylElt]:
    subset = set(subset)
    return [y for y in block.group if set(y.word) <= subset]


def is_min_coset_rep(block: Block, subset: Iterable[int], w: WeylElt) -> bool:
    """True iff s_i w > w for every i in the subset."""
    g = block.group
    return all(g[g.left[i - 1][w.index]].length > w.length for i in subset)


def class_of_parabolic_verma(block: Block, subset: Iterable[int], w) -> K0Class:
    """Alternating sum over the parabolic subgroup of Verma classes at y*w."""
    subset = sorted(set(subset))
    w = block.elt(w)
    for i in subset:
        if not 1 <= i <= block.rd.rank:
            raise InvalidCosetRepresentative(f"simple index {i} out of range")
    if not is_min_coset_rep(block, subset, w):
        raise InvalidCosetRepresentative(
            f"{w} is not a minimal coset representative for the parabolic subgroup {subset}"
        )
    g = block.group
    return K0Class(VERMA, {g.multiply(y, w): g.sign(y) for y in parabolic_subgroup(block, subset)})


def change_basis(block: Block, c: K0Class, target: str) -> K0Class:
    if target not in (VERMA, SIMPLE):
        raise ValueError(f"unknown basis {target!r}")
    if c.basis == target:
        return c
    table = block.to_verma if target == VERMA else block.to_simple
    out: dict[WeylElt, Fraction] = {}
    g = block.group
    for w, a in c.coeffs.items():
        for y, b in table[w.index].items():
            e = g[y]
            out[e] = out.get(e, 0) + a * b
    return K0Class(target, out)


def weyl_act_k0(block: Block, y, c: K0Class) -> K0Class:
    """Right regular action on Verma labels, w -> w*y."""
    y = block.elt(y)
    c = change_basis(block, c, VERMA)
    g = block.group
    return K0Class(VERMA, {g.multiply(w, y): a for w, a in c.coeffs.items()})


BraidWord = tuple[int, ...]


def braid_image(block: Block, word: BraidWord) -> WeylElt:
    """Weyl image of a braid word; generators are +i, inverses -i."""
    return block.group.from_word([abs(g) for g in word])


def braid_act(block: Block, word: BraidWord, c: K0Class) -> K0Class:
    """K0 shadow of a braid word acting on a class.

    The rightmost generator acts first and each generator acts by right
    multiplication with its simple reflection, so the word acts through the
    inverse of its Weyl image.
    """
    return weyl_act_k0(block, block.group.inverse(braid_image(block, word)), c)


@dataclass(frozen=True)
class GKStratification:
    gk_of_simple: dict[WeylElt, int]
    strata: dict[int, tuple[WeylElt, ...]]

    def stratum(self, d: int) -> tuple[WeylElt, ...]:
        return self.strata.get(d, ())

    def nonempty(self) -> list[int]:
        return sorted(d for d, s in self.strata.items() if s)

    def sizes(self) -> dict[int, int]:
        return {d: len(s) for d, s in sorted(self.strata.items())}


def gk_stratify(block: Block) -> GKStratification:
    if block._strat is None:
        from .charge import gk_dimension

        gk = {w: gk_dimension(block, class_of_simple(block, w)) for w in block.group}
        strata: dict[int, list[WeylElt]] = {}
        for w in block.group:
            strata.setdefault(gk[w], []).append(w)
        block._strat = GKStratification(gk, {d: tuple(v) for d, v in sorted(strata.items())})
    return block._strat


def project_to_stratum(block: Block, c: K0Class, d: int) -> K0Class:
    """Image in the subquotient of GK dimension d, in the simple basis."""
    c = change_basis(block, c, SIMPLE)
    gk = gk_stratify(block).gk_of_simple
    over = [w for w in c.coeffs if gk[w] > d]
    if over:
        w = min(over, key=lambda e: e.index)
        raise StratumViolation(f"L({w}) has GK dimension {gk[w]} > {d}")
    return K0Class(SIMPLE, {w: a for w, a in c.coeffs.items() if gk[w] == d})
