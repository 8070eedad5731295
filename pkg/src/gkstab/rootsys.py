"""Root data for small-rank semisimple Lie algebras.

Simple roots are numbered as in Bourbaki and simple-reflection labels are
1-based throughout the public API (``s1`` is the reflection in ``alpha_1``).
The Cartan matrix follows the convention ``cartan[i][j] = <alpha_j, coroot_i>``,
so column ``j`` holds the fundamental-weight coordinates of ``alpha_j``.

Everything is exact: integers for root and coroot coordinates, ``Fraction``
for weights.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, UnsupportedType

SUPPORTED = {
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3),
    ("C", 3),
    ("D", 4),
    ("G", 2),
}

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class LieType:
    family: str
    rank: int

    def __post_init__(self):
        if (self.family, self.rank) not in SUPPORTED:
            raise UnsupportedType(
                f"{self.family}{self.rank} is not supported; "
                f"choose one of {', '.join(sorted(f + str(r) for f, r in SUPPORTED))}"
            )

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> "LieType":
        """Parse ``"A2"`` or a bare family letter combined with ``rank``."""
        m = re.fullmatch(r"\s*([A-Za-z])\s*(\d*)\s*", text)
        if not m:
            raise UnsupportedType(f"cannot parse Lie type {text!r}")
        family = m.group(1).upper()
        if m.group(2):
            r = int(m.group(2))
            if rank is not None and rank != r:
                raise UnsupportedType(f"type {text!r} conflicts with rank {rank}")
        elif rank is not None:
            r = rank
        else:
            raise UnsupportedType(f"type {text!r} needs a rank")
        return cls(family, r)

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(t: LieType) -> Matrix:
    r = t.rank
    a = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    if t.family in "ABC":
        for i in range(r - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if t.family == "B":
            # alpha_r short
            a[r - 1][r - 2] = -2
        elif t.family == "C":
            # alpha_r long
            a[r - 2][r - 1] = -2
    elif t.family == "D":
        for i in range(r - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[r - 3][r - 1] = a[r - 1][r - 3] = -1
    elif t.family == "G":
        # alpha_1 short, alpha_2 long
        a[0][1] = -3
        a[1][0] = -1
    return tuple(tuple(row) for row in a)


def _invert(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


@dataclass(frozen=True)
class Weight:
    """A weight stored in both the fundamental-weight and simple-root bases."""

    omega: tuple[Fraction, ...]
    alpha: tuple[Fraction, ...]

    def __add__(self, other: "Weight") -> "Weight":
        _check_len(self.omega, other.omega)
        return Weight(tuple(a + b for a, b in zip(self.omega, other.omega)),
                      tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.omega), tuple(-a for a in self.alpha))

    def __mul__(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * a for a in self.omega), tuple(c * a for a in self.alpha))

    __rmul__ = __mul__

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.omega) + ")"


@dataclass(frozen=True)
class Coweight:
    """An element x of the Cartan, recorded by its values <alpha_i, x>."""

    values: tuple[Fraction, ...]


def _check_len(a, b):
    if len(a) != len(b):
        raise DimensionMismatch(f"rank {len(a)} vs rank {len(b)}")


def pairing(mu: Weight, x: Coweight) -> Fraction:
    _check_len(mu.alpha, x.values)
    return sum((a * v for a, v in zip(mu.alpha, x.values)), Fraction(0))


@dataclass(frozen=True)
class RootDatum:
    lie_type: LieType
    cartan: Matrix
    cartan_inv: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    positive_roots: tuple[tuple[int, ...], ...]
    coroots: tuple[tuple[int, ...], ...]
    rho: Weight
    rho_check: Coweight

    @property
    def rank(self) -> int:
        return self.lie_type.rank

    @property
    def n_pos(self) -> int:
        return len(self.positive_roots)

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(sum(b) for b in self.positive_roots)

    def weight(self, omega: Sequence) -> Weight:
        """Weight with the given fundamental-weight coordinates."""
        if len(omega) != self.rank:
            raise DimensionMismatch(f"expected {self.rank} coordinates, got {len(omega)}")
        om = tuple(Fraction(x) for x in omega)
        return Weight(om, mat_vec(self.cartan_inv, om))

    def weight_from_alpha(self, alpha: Sequence) -> Weight:
        if len(alpha) != self.rank:
            raise DimensionMismatch(f"expected {self.rank} coordinates, got {len(alpha)}")
        al = tuple(Fraction(x) for x in alpha)
        return Weight(mat_vec(self.cartan, al), al)

    def zero(self) -> Weight:
        return self.weight([0] * self.rank)

    def simple_root(self, i: int) -> Weight:
        return self.weight_from_alpha([int(j == i - 1) for j in range(self.rank)])

    def fundamental_weight(self, i: int) -> Weight:
        return self.weight([int(j == i - 1) for j in range(self.rank)])

    def coweight(self, values: Sequence) -> Coweight:
        if len(values) != self.rank:
            raise DimensionMismatch(f"expected {self.rank} values, got {len(values)}")
        return Coweight(tuple(Fraction(v) for v in values))

    def reflection_matrix(self, i: int) -> Matrix:
        """Matrix of s_i acting on fundamental-weight coordinates."""
        r = self.rank
        col = [self.cartan[k][i - 1] for k in range(r)]
        return tuple(
            tuple(int(k == j) - (col[k] if j == i - 1 else 0) for j in range(r))
            for k in range(r)
        )

    def act(self, matrix: Matrix, mu: Weight) -> Weight:
        return self.weight(mat_vec(matrix, mu.omega))

    def coroot_pairing(self, mu: Weight, coroot: Sequence[int]) -> Fraction:
        """<mu, beta_check> for a coroot given in the simple-coroot basis."""
        return sum((c * m for c, m in zip(coroot, mu.omega)), Fraction(0))

    def is_consistent(self, mu: Weight) -> bool:
        return mat_vec(self.cartan, mu.alpha) == mu.omega


def _positive_system(cartan: Matrix):
    """Close the simple roots under simple reflections, tracking coroots alongside."""
    r = len(cartan)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    found = {s: s for s in simple}
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            cob = found[beta]
            for j in range(r):
                if beta == simple[j]:
                    continue
                k = sum(beta[i] * cartan[j][i] for i in range(r))  # <beta, coroot_j>
                kc = sum(cob[i] * cartan[i][j] for i in range(r))  # <alpha_j, beta_check>
                new = tuple(b - (k if i == j else 0) for i, b in enumerate(beta))
                newc = tuple(b - (kc if i == j else 0) for i, b in enumerate(cob))
                if new not in found:
                    found[new] = newc
                    nxt.append(new)
        frontier = nxt
    roots = sorted(found, key=lambda b: (sum(b), tuple(-c for c in b)))
    return tuple(roots), tuple(found[b] for b in roots)


def build_root_datum(t: LieType | str) -> RootDatum:
    if isinstance(t, str):
        t = LieType.parse(t)
    cartan = cartan_matrix(t)
    inv = _invert(cartan)
    roots, coroots = _positive_system(cartan)
    r = t.rank
    rho_omega = tuple(Fraction(1) for _ in range(r))
    rho = Weight(rho_omega, mat_vec(inv, rho_omega))
    rho_check = Coweight(tuple(Fraction(1) for _ in range(r)))
    return RootDatum(t, cartan, inv, roots, coroots, rho, rho_check)


def m_coordinates(rd: RootDatum, lam: Weight) -> tuple[Fraction, ...]:
    """Wall coordinates m_i = <lambda + rho, coroot_i>."""
    return tuple(x + 1 for x in lam.omega)


def dot_action(rd: RootDatum, w, lam: Weight) -> Weight:
    """w . lambda = w(lambda + rho) - rho, for any w carrying an omega-basis ``matrix``."""
    return rd.act(w.matrix, lam + rd.rho) - rd.rho
