"""Weyl group elements, Bruhat order and Kazhdan-Lusztig polynomials.

Elements are enumerated breadth-first by length. Each carries its ShortLex
minimal reduced word and its integer matrix on fundamental-weight
coordinates; equality is decided by the matrix.

KL polynomials are tuples of integers, lowest degree first.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import IncompleteCache, NotComparable
from .rootsys import LieType, Matrix, RootDatum, mat_mul

log = logging.getLogger(__name__)

Poly = tuple[int, ...]

CACHE_FORMAT = "gkstab-klcache 1"


@dataclass(frozen=True, eq=False)
class WeylElt:
    word: tuple[int, ...]
    matrix: Matrix = field(repr=False)
    index: int = field(repr=False, default=-1)

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other):
        if not isinstance(other, WeylElt):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __lt__(self, other: "WeylElt") -> bool:
        return (self.length, self.word) < (other.length, other.word)

    def __str__(self):
        return format_word(self.word)


def format_word(word: Sequence[int]) -> str:
    return "".join(f"s{i}" for i in word) if word else "e"


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("e", "1", ""):
        return ()
    if not re.fullmatch(r"(s\d)+", text):
        raise ValueError(f"cannot parse Weyl word {text!r}")
    return tuple(int(c) for c in text[1::2])


class WeylGroup:
    """The Weyl group of a root datum, fully enumerated.

    ``elements`` is ordered by (length, ShortLex word): identity first,
    longest element last.
    """

    def __init__(self, rd: RootDatum):
        self.rd = rd
        r = rd.rank
        gens = [rd.reflection_matrix(i) for i in range(1, r + 1)]
        ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        words = [()]
        mats = [ident]
        lookup = {ident: 0}
        level = [0]
        while level:
            nxt = []
            # level is in ShortLex order and generators ascend, so first hit is minimal
            for idx in level:
                for i in range(r):
                    m = mat_mul(mats[idx], gens[i])
                    if m not in lookup:
                        lookup[m] = len(mats)
                        mats.append(m)
                        words.append(words[idx] + (i + 1,))
                        nxt.append(lookup[m])
            level = nxt
        self.elements: list[WeylElt] = [
            WeylElt(w, m, k) for k, (w, m) in enumerate(zip(words, mats))
        ]
        self._lookup = lookup
        self._gens = gens
        n = len(mats)
        self.right = [[lookup[mat_mul(mats[k], gens[i])] for k in range(n)] for i in range(r)]
        self.left = [[lookup[mat_mul(gens[i], mats[k])] for k in range(n)] for i in range(r)]
        self._below: list[int] | None = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k: int) -> WeylElt:
        return self.elements[k]

    @property
    def identity(self) -> WeylElt:
        return self.elements[0]

    @property
    def longest(self) -> WeylElt:
        return self.elements[-1]

    @property
    def rank(self) -> int:
        return self.rd.rank

    def s(self, i: int) -> WeylElt:
        return self.elements[self.right[i - 1][0]]

    def from_matrix(self, m: Matrix) -> WeylElt:
        return self.elements[self._lookup[m]]

    def from_word(self, word: Iterable[int] | str) -> WeylElt:
        if isinstance(word, str):
            word = parse_word(word)
        k = 0
        for i in word:
            k = self.right[i - 1][k]
        return self.elements[k]

    def multiply(self, a: WeylElt, b: WeylElt) -> WeylElt:
        k = a.index
        for i in b.word:
            k = self.right[i - 1][k]
        return self.elements[k]

    def inverse(self, a: WeylElt) -> WeylElt:
        return self.from_word(reversed(a.word))

    def right_mul(self, w: WeylElt, i: int) -> WeylElt:
        return self.elements[self.right[i - 1][w.index]]

    def is_right_descent(self, w: WeylElt, i: int) -> bool:
        return self.right[i - 1][w.index] < w.index

    def sign(self, w: WeylElt) -> int:
        return -1 if w.length % 2 else 1

    def _bruhat_sets(self) -> list[int]:
        # below(w) = below(ws) | below(ws)*s for any right descent s
        if self._below is None:
            below = [0] * len(self)
            below[0] = 1
            for w in self.elements[1:]:
                i = w.word[-1] - 1
                v = self.right[i][w.index]
                bv = below[v]
                bits = bv
                k = 0
                while bv:
                    if bv & 1:
                        bits |= 1 << self.right[i][k]
                    bv >>= 1
                    k += 1
                below[w.index] = bits
            self._below = below
        return self._below

    def bruhat_leq(self, y: WeylElt, w: WeylElt) -> bool:
        return bool(self._bruhat_sets()[w.index] >> y.index & 1)

    def interval_below(self, w: WeylElt) -> list[WeylElt]:
        bits = self._bruhat_sets()[w.index]
        return [e for e in self.elements if bits >> e.index & 1]


def enumerate_weyl(rd: RootDatum) -> list[WeylElt]:
    return WeylGroup(rd).elements


# polynomial helpers on coefficient tuples

def _padd(a: Poly, b: Poly) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _shift(p: Poly, k: int) -> Poly:
    return (0,) * k + tuple(p) if p else ()


def poly_at(p: Poly, q) -> int:
    return sum(c * q ** i for i, c in enumerate(p))


@dataclass
class KLTable:
    lie_type: LieType
    entries: dict[tuple[int, int], Poly]
    group: WeylGroup = field(repr=False)

    def get(self, y: WeylElt, w: WeylElt) -> Poly:
        try:
            return self.entries[y.index, w.index]
        except KeyError:
            if not self.group.bruhat_leq(y, w):
                raise NotComparable(f"{y} is not below {w} in Bruhat order") from None
            raise IncompleteCache(f"no entry for ({y}, {w})") from None

    def mu(self, y: WeylElt, w: WeylElt) -> int:
        """Coefficient of q^((l(w)-l(y)-1)/2) in P_{y,w}, zero unless y < w with odd gap."""
        gap = w.length - y.length
        if gap <= 0 or gap % 2 == 0:
            return 0
        p = self.entries.get((y.index, w.index), ())
        k = (gap - 1) // 2
        return p[k] if k < len(p) else 0

    def is_complete(self) -> bool:
        g = self.group
        return all(
            (y.index, w.index) in self.entries
            for w in g for y in g.interval_below(w)
        )

    def dumps(self) -> str:
        g = self.group
        lines = [f"{CACHE_FORMAT} {self.lie_type.family} {self.lie_type.rank}"]
        for (yi, wi) in sorted(self.entries, key=lambda k: (k[1], k[0])):
            p = self.entries[yi, wi]
            lines.append(
                f"{format_word(g[yi].word)}\t{format_word(g[wi].word)}\t"
                + ",".join(str(c) for c in p)
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, group: WeylGroup) -> "KLTable":
        lines = text.splitlines()
        t = group.rd.lie_type
        if not lines or lines[0] != f"{CACHE_FORMAT} {t.family} {t.rank}":
            raise ValueError("cache header does not match")
        entries = {}
        for line in lines[1:]:
            yw, ww, cs = line.split("\t")
            y = group.from_word(parse_word(yw))
            w = group.from_word(parse_word(ww))
            if y.word != parse_word(yw) or w.word != parse_word(ww):
                raise ValueError(f"non-canonical word in cache line {line!r}")
            entries[y.index, w.index] = tuple(int(c) for c in cs.split(","))
        return cls(t, entries, group)


def compute_kl_table(group: WeylGroup) -> KLTable:
    """All P_{y,w} with y <= w by the right-descent recursion.

    For a right descent s of w and v = ws,
    P_{x,w} = q^(1-c) P_{xs,v} + q^c P_{x,v} - sum_z mu(z,v) q^((l(w)-l(z))/2) P_{x,z}
    with c = 1 if xs < x else 0, the sum over z < v having zs < z.
    """
    els = group.elements
    below = group._bruhat_sets()
    P: dict[tuple[int, int], Poly] = {}
    mu_lists: dict[int, list[tuple[int, int]]] = {}

    def get(x: int, w: int) -> Poly:
        return P.get((x, w), ())

    for w in els:
        wi = w.index
        if wi == 0:
            P[0, 0] = (1,)
            mu_lists[0] = []
            continue
        i = w.word[-1] - 1
        right = group.right[i]
        vi = right[wi]
        zs = [(zi, m) for zi, m in mu_lists[vi] if right[zi] < zi]
        lw = w.length
        for x in els:
            xi = x.index
            if not below[wi] >> xi & 1:
                continue
            xs = right[xi]
            c = 1 if xs < xi else 0
            acc = _padd(_shift(get(xs, vi), 1 - c), _shift(get(xi, vi), c))
            for zi, m in zs:
                pz = get(xi, zi)
                if pz:
                    sh = (lw - els[zi].length) // 2
                    acc = _padd(acc, [-m * a for a in _shift(pz, sh)])
            P[xi, wi] = _trim(acc)
        ml = []
        for zi in range(wi):
            if below[wi] >> zi & 1:
                gap = lw - els[zi].length
                if gap % 2 == 1:
                    p = P[zi, wi]
                    k = (gap - 1) // 2
                    if k < len(p) and p[k]:
                        ml.append((zi, p[k]))
        mu_lists[wi] = ml
    return KLTable(group.rd.lie_type, P, group)


def kl_polynomial(y: WeylElt, w: WeylElt, cache: KLTable) -> Poly:
    return cache.get(y, w)


def load_or_build(group: WeylGroup, cache_dir: str | os.PathLike | None = None) -> KLTable:
    """KL table for the group, read from ``cache_dir`` when a valid file exists.

    Corrupt or stale files are rebuilt and overwritten, never trusted.
    """
    t = group.rd.lie_type
    path = Path(cache_dir) / f"kl_{t.family}{t.rank}.txt" if cache_dir else None
    if path is not None and path.exists():
        try:
            table = KLTable.loads(path.read_text(), group)
            if table.is_complete():
                return table
            log.warning("incomplete KL cache %s; rebuilding", path)
        except (ValueError, KeyError, IndexError) as exc:
            log.warning("corrupt KL cache %s (%s); rebuilding", path, exc)
    table = compute_kl_table(group)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(table.dumps())
    return table


def simple_to_verma_matrix(group: WeylGroup, kl: KLTable) -> list[dict[int, int]]:
    """Row w lists the Verma coefficients of [L(w.0)].

    With the dominant weight 0 labelled by the identity,
    [L(w.0)] = sum over y >= w of (-1)^(l(y)-l(w)) P_{w0 y, w0 w}(1) [Delta(y.0)].
    """
    w0 = group.longest
    rows = []
    for w in group:
        w0w = group.multiply(w0, w)
        row = {}
        for y in group:
            if not group.bruhat_leq(w, y):
                continue
            w0y = group.multiply(w0, y)
            try:
                p = kl.entries[w0y.index, w0w.index]
            except KeyError:
                raise IncompleteCache(f"missing P({w0y}, {w0w})") from None
            val = poly_at(p, 1)
            if val:
                row[y.index] = (-1) ** ((y.length - w.length) % 2) * val
        rows.append(row)
    return rows


def invert_unitriangular(rows: list[dict[int, int]], group: WeylGroup) -> list[dict[int, Fraction]]:
    """Invert the simple-to-Verma matrix: row y gives [Delta(y)] in simples."""
    n = len(rows)
    inv: list[dict[int, Fraction] | None] = [None] * n
    # rows[w] = Delta(w) + sum_{y > w} a_y Delta(y); solve from the top of Bruhat order
    for w in reversed(group.elements):
        row = rows[w.index]
        diag = row[w.index]
        acc: dict[int, Fraction] = {w.index: Fraction(1, diag)}
        for y, a in row.items():
            if y == w.index:
                continue
            for z, c in inv[y].items():
                acc[z] = acc.get(z, Fraction(0)) - Fraction(a, diag) * c
        inv[w.index] = {k: v for k, v in acc.items() if v}
    return inv
