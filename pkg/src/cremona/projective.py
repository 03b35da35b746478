"""Projective points, linear subspaces, automorphisms, projections and sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import linalg
from .errors import DegeneratePosition, InputError, RejectionExhausted
from .poly import Form, Q


class Point:
    """A point of P^r, normalized so the first nonzero coordinate is 1."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        c = [Q(x) for x in coords]
        lead = next((x for x in c if x), None)
        if lead is None:
            raise InputError("all coordinates are zero")
        self.coords = tuple(x / lead for x in c)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Point) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "Point([" + ", ".join(str(x) for x in self.coords) + "])"

    @classmethod
    def coordinate(cls, i: int, r: int) -> "Point":
        return cls([int(j == i) for j in range(r + 1)])


def as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(p)


@dataclass(frozen=True)
class LinearSubspace:
    basis: tuple[Point, ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def ambient_dim(self) -> int:
        return self.basis[0].dim

    def contains(self, p) -> bool:
        p = as_point(p)
        rows = [b.coords for b in self.basis]
        return linalg.rank(rows + [p.coords]) == len(rows)

    def __contains__(self, p) -> bool:
        return self.contains(p)

    def equations(self) -> list[Form]:
        """Linear forms cutting out the subspace (a basis of its annihilator)."""
        n = self.ambient_dim + 1
        return [Form.linear(v) for v in linalg.nullspace([b.coords for b in self.basis], n)]


def span(points: Sequence) -> LinearSubspace:
    pts = [as_point(p) for p in points]
    if not pts:
        raise InputError("span of an empty set")
    basis: list[Point] = []
    for p in pts:
        if linalg.rank([b.coords for b in basis] + [p.coords]) > len(basis):
            basis.append(p)
    return LinearSubspace(tuple(basis))


def are_aligned(a, b, c) -> bool:
    a, b, c = as_point(a), as_point(b), as_point(c)
    if len({a, b, c}) < 3:
        raise InputError("alignment test needs three distinct points")
    return linalg.rank([a.coords, b.coords, c.coords]) <= 2


@dataclass(frozen=True)
class LinearAutomorphism:
    """Invertible matrix acting on column vectors: ``y = M x``."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(Q(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if any(len(row) != len(m) for row in m):
            raise InputError("automorphism matrix must be square")
        if linalg.det(m) == 0:
            raise DegeneratePosition("automorphism matrix is singular")

    @classmethod
    def identity(cls, n: int) -> "LinearAutomorphism":
        return cls(tuple(tuple(row) for row in linalg.identity(n)))

    @classmethod
    def from_rows(cls, rows) -> "LinearAutomorphism":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def apply(self, p) -> Point:
        return Point(linalg.matvec(self.matrix, as_point(p).coords))

    def apply_vector(self, v: Sequence) -> list[Fraction]:
        return linalg.matvec(self.matrix, v)

    def inverse(self) -> "LinearAutomorphism":
        return LinearAutomorphism.from_rows(linalg.inverse(self.matrix))

    def __matmul__(self, other: "LinearAutomorphism") -> "LinearAutomorphism":
        return LinearAutomorphism.from_rows(linalg.matmul(self.matrix, other.matrix))

    def forms(self) -> list[Form]:
        """The rows as linear forms, i.e. the substitution ``x -> M x``."""
        return [Form.linear(row) for row in self.matrix]

    def is_identity(self) -> bool:
        return self.matrix == tuple(tuple(r) for r in linalg.identity(self.size))


def apply_to_forms(m: LinearAutomorphism, forms: Sequence[Form]) -> list[Form]:
    """Left action on a tuple of forms: output ``i`` is ``sum_j M[i][j] forms[j]``."""
    out = []
    for row in m.matrix:
        acc = None
        for c, f in zip(row, forms):
            if c and f:
                acc = f.scale(c) if acc is None else acc + f.scale(c)
        out.append(acc if acc is not None else Form.zero(forms[0].nvars, forms[0].degree))
    return out


def adapted_frame(placements: Sequence[tuple[Point, int]], r: int) -> LinearAutomorphism:
    """Automorphism sending each given point to the given coordinate point.

    The remaining columns of the inverse matrix are filled with standard basis
    vectors, preferring ``e_j`` in column ``j`` and otherwise the smallest
    unused index, so untouched coordinates keep their relative order.
    """
    n = r + 1
    cols: dict[int, tuple] = {}
    for p, idx in placements:
        p = as_point(p)
        if len(p) != n:
            raise InputError("point dimension does not match ambient space")
        cols[idx] = p.coords
    if linalg.rank(list(cols.values())) < len(cols):
        raise DegeneratePosition("frame points are linearly dependent")
    used: set[int] = set()
    for j in range(n):
        if j in cols:
            continue
        chosen = None
        for k in [j] + [k for k in range(n) if k != j]:
            if k in used:
                continue
            e = tuple(Fraction(int(i == k)) for i in range(n))
            if linalg.rank(list(cols.values()) + [e]) == len(cols) + 1:
                chosen = k
                cols[j] = e
                break
        if chosen is None:
            raise DegeneratePosition("cannot complete frame")
        used.add(chosen)
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    return LinearAutomorphism.from_rows(linalg.inverse(m))


def projection_from(sub: LinearSubspace, target_frame: LinearAutomorphism | None = None) -> list[Form]:
    """Linear forms realizing the projection from ``sub``."""
    if sub.dim >= sub.ambient_dim:
        raise InputError("cannot project from the whole space")
    forms = sub.equations()
    if target_frame is not None:
        forms = apply_to_forms(target_frame, forms)
    return forms


def _frame_matrix(points: Sequence[Point]) -> list[list[Fraction]]:
    n = len(points) - 1
    for sub in combinations(points, n):
        if linalg.rank([p.coords for p in sub]) < n:
            raise DegeneratePosition("points are not in general position")
    cols = [p.coords for p in points[:n]]
    lam = linalg.solve(linalg.transpose(cols), points[n].coords)
    return [[lam[j] * cols[j][i] for j in range(n)] for i in range(n)]


def frame_map(src: Sequence, dst: Sequence) -> LinearAutomorphism:
    """The automorphism taking the projective frame ``src`` to ``dst``."""
    src = [as_point(p) for p in src]
    dst = [as_point(p) for p in dst]
    if len(src) != len(dst) or len(src) != len(src[0]) + 1:
        raise InputError("a frame of P^r has r+2 points")
    ms, md = _frame_matrix(src), _frame_matrix(dst)
    return LinearAutomorphism.from_rows(linalg.matmul(md, linalg.inverse(ms)))


class Sampler:
    """Seeded source of every "general" choice.  Single owner, not thread safe."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._rng = random.Random(self.seed)
        self.counter = 0

    def integer(self, lo: int, hi: int) -> int:
        self.counter += 1
        return self._rng.randint(lo, hi)

    def nonzero(self, bound: int) -> int:
        while True:
            v = self.integer(-bound, bound)
            if v:
                return v

    def vector(self, n: int, bound: int) -> list[Fraction]:
        return [Fraction(self.integer(-bound, bound)) for _ in range(n)]

    def spawn(self) -> "Sampler":
        """Independent child sampler (deterministic in the parent's state)."""
        return Sampler(self.integer(0, 2**63 - 1))


Predicate = Callable[[Point], bool]


def sample_point(s: Sampler, r: int, avoid: Sequence[Predicate] = (), box: int = 4, budget: int = 64) -> Point:
    """Draw from ``{-box..box}^(r+1)``, rejecting while any ``avoid`` predicate holds."""
    for _ in range(budget):
        v = s.vector(r + 1, box)
        if not any(v):
            continue
        p = Point(v)
        if not any(bad(p) for bad in avoid):
            return p
    raise RejectionExhausted(f"no acceptable point in box {box} after {budget} draws")


def general_point(s: Sampler, r: int, avoid: Sequence[Predicate] = (), box: int = 4, budget: int = 64, max_box: int = 1 << 20) -> Point:
    """``sample_point`` with the coordinate box doubled after each exhaustion."""
    while True:
        try:
            return sample_point(s, r, avoid, box, budget)
        except RejectionExhausted:
            box *= 2
            if box > max_box:
                raise


def random_automorphism(s: Sampler, n: int, box: int = 3) -> LinearAutomorphism:
    while True:
        rows = [s.vector(n, box) for _ in range(n)]
        if linalg.det(rows) != 0:
            return LinearAutomorphism.from_rows(rows)


def on_hyperplane(form: Form) -> Predicate:
    return lambda p: form(p.coords) == 0
