"""de Jonquières maps in Möbius normal form.

In frame coordinates ``y = A x`` with the center at ``[1, 0, ..., 0]`` the map is

    [y0*F0 + G0, y1*(y0*F + G), ..., yr*(y0*F + G)]

with ``F0, G0, F, G`` forms in ``y1..yr`` of degrees ``d-1, d, d-2, d-1``.  On
each line through the center it acts as ``y0 -> (y0*F0 + G0) / (y0*F + G)``,
so the inverse has data ``(G, -G0, -F, F0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import (
    DegeneratePosition,
    DegreeEscalationExhausted,
    GenericityExhausted,
    IndeterminacyPoint,
    InputError,
    NoSolutionAtDegree,
    WrongSystemDimension,
    ZeroDeterminant,
)
from .poly import Form, monomials, substitute_all
from .projective import (
    LinearAutomorphism,
    LinearSubspace,
    Point,
    Sampler,
    adapted_frame,
    apply_to_forms,
    as_point,
)
from .ratmap import InverseCertificate, RationalMap, map_apply, verify_inverse_pair


def _fit(f: Form | None, nvars: int, degree: int, name: str) -> Form:
    if f is None or not f:
        return Form.zero(nvars, max(degree, 0))
    if f.nvars != nvars:
        raise InputError(f"{name} must be a form in {nvars} variables")
    if f.degree != degree:
        raise InputError(f"{name} must have degree {degree}, got {f.degree}")
    return f


@dataclass(frozen=True)
class DeJonquieresMap:
    r: int
    d: int
    frame: LinearAutomorphism
    F0: Form
    G0: Form
    F: Form
    G: Form

    def __post_init__(self):
        if self.d < 1:
            raise InputError("degree must be positive")
        n = self.r
        object.__setattr__(self, "F0", _fit(self.F0, n, self.d - 1, "F0"))
        object.__setattr__(self, "G0", _fit(self.G0, n, self.d, "G0"))
        object.__setattr__(self, "F", _fit(self.F, n, self.d - 2, "F"))
        object.__setattr__(self, "G", _fit(self.G, n, self.d - 1, "G"))
        if self.frame.size != n + 1:
            raise InputError("frame size does not match ambient dimension")

    @property
    def center(self) -> Point:
        return self.frame.inverse().apply(Point.coordinate(0, self.r))

    def determinant(self) -> Form:
        """``F0*G - F*G0``; the map is birational iff this is nonzero."""
        return self.F0 * self.G - self.F * self.G0

    def normal_tuple(self) -> list[Form]:
        n = self.r + 1
        pos = list(range(1, n))
        y0 = Form.var(0, n)
        F0, G0, F, G = (h.embed(n, pos) for h in (self.F0, self.G0, self.F, self.G))
        num = y0 * F0 + G0 if F0 else G0
        den = y0 * F + G if F else G
        return [num] + [Form.var(i, n) * den for i in range(1, n)]

    def forward(self) -> RationalMap:
        return dj_forward(self)

    def inverse(self) -> "DeJonquieresMap":
        return dj_inverse(self)


def dj_forward(m: DeJonquieresMap) -> RationalMap:
    if not m.determinant():
        raise ZeroDeterminant("F0*G - F*G0 vanishes identically")
    normal = m.normal_tuple()
    if m.frame.is_identity():
        return RationalMap(normal)
    pulled = substitute_all(normal, m.frame.forms())
    return RationalMap(apply_to_forms(m.frame.inverse(), pulled))


def dj_inverse(m: DeJonquieresMap) -> DeJonquieresMap:
    if not m.determinant():
        raise ZeroDeterminant("F0*G - F*G0 vanishes identically")
    return DeJonquieresMap(m.r, m.d, m.frame, m.G, -m.G0, -m.F, m.F0)


def dj_certificate(m: DeJonquieresMap) -> InverseCertificate:
    return verify_inverse_pair(dj_forward(m), dj_forward(dj_inverse(m)))


# -- constraint solving ---------------------------------------------------


def _layout(r: int, d: int) -> list[tuple[str, tuple]]:
    out = []
    for name, deg in (("F0", d - 1), ("G0", d), ("F", d - 2), ("G", d - 1)):
        out += [(name, e) for e in monomials(r, deg)]
    return out


def _mono_value(e: tuple, a: Sequence[Fraction]) -> Fraction:
    v = Fraction(1)
    for x, k in zip(a, e):
        if k:
            v *= x**k
    return v


def _normalized_pair(A: LinearAutomorphism, p: Point, q: Point) -> tuple[list[Fraction], list[Fraction]]:
    """Frame vectors of ``p`` and ``q`` scaled to share the tail ``(x1..xr)``."""
    a = A.apply_vector(p.coords)
    b = A.apply_vector(q.coords)
    k = next((i for i in range(1, len(a)) if a[i]), None)
    if k is None:
        raise InputError(f"{p} coincides with the center")
    if not b[k]:
        raise InputError(f"{q} is not aligned with {p} and the center")
    lam = a[k] / b[k]
    b = [x * lam for x in b]
    if b[1:] != a[1:]:
        raise InputError(f"{q} is not aligned with {p} and the center")
    return a, b


def constraint_system(vertex, moves, fixed, d: int):
    """Linear conditions on the Möbius coefficients; returns ``(frame, layout, rows, pairs)``."""
    vertex = as_point(vertex)
    r = vertex.dim
    A = adapted_frame([(vertex, 0)], r)
    pairs = [(as_point(p), as_point(q)) for p, q in moves] + [(as_point(p), as_point(p)) for p in fixed]
    targets: dict[Point, Point] = {}
    for p, q in pairs:
        if p == vertex or q == vertex:
            raise InputError("constrained points must differ from the center")
        if targets.setdefault(p, q) != q:
            raise InputError(f"{p} is constrained to two different images")
    if len(set(targets.values())) != len(targets):
        raise InputError("two constrained points share an image")
    layout = _layout(r, d)
    rows = []
    vecs = []
    for p, q in pairs:
        a, b = _normalized_pair(A, p, q)
        tail = a[1:]
        a0, b0 = a[0], b[0]
        row = []
        for name, e in layout:
            v = _mono_value(e, tail)
            row.append({"F0": a0 * v, "G0": v, "F": -b0 * a0 * v, "G": -b0 * v}[name])
        rows.append(row)
        vecs.append((a, b))
    return A, layout, rows, vecs


def _assemble(r: int, d: int, frame, layout, coeffs) -> DeJonquieresMap:
    parts: dict[str, dict] = {"F0": {}, "G0": {}, "F": {}, "G": {}}
    for (name, e), c in zip(layout, coeffs):
        if c:
            parts[name][e] = c
    degs = {"F0": d - 1, "G0": d, "F": d - 2, "G": d - 1}
    forms = {k: Form(r, max(degs[k], 0), v) if v else None for k, v in parts.items()}
    return DeJonquieresMap(r, d, frame, forms["F0"], forms["G0"], forms["F"], forms["G"])


def dj_from_constraints(
    vertex,
    moves: Sequence[tuple] = (),
    fixed: Sequence = (),
    d: int = 2,
    sampler: Sampler | None = None,
    tries: int = 16,
    box: int = 5,
) -> DeJonquieresMap:
    """A random degree-``d`` de Jonquières map centered at ``vertex`` with
    ``p -> q`` for each move and every fixed point fixed.

    The returned map is checked to be defined and locally invertible at every
    constrained point: the forward denominator ``y0*F + G`` is nonzero at each
    source point, the inverse denominator ``F0 - y0*F`` is nonzero at each
    target, and both round trips are confirmed by evaluation.
    """
    vertex = as_point(vertex)
    r = vertex.dim
    sampler = sampler or Sampler(0)
    for i, p in enumerate(fixed):
        for p2 in list(fixed)[i + 1 :]:
            if as_point(p) != as_point(p2) and _aligned(vertex, as_point(p), as_point(p2)):
                raise DegeneratePosition("two fixed points are aligned with the center")
    A, layout, rows, vecs = constraint_system(vertex, moves, fixed, d)
    basis = linalg.nullspace(rows, len(layout)) if rows else [
        [Fraction(int(i == j)) for j in range(len(layout))] for i in range(len(layout))
    ]
    if not basis:
        raise NoSolutionAtDegree(f"no de Jonquières map of degree {d} satisfies the constraints")
    pairs = [(as_point(p), as_point(q)) for p, q in moves] + [(as_point(p), as_point(p)) for p in fixed]
    for _ in range(tries):
        w = [sampler.integer(-box, box) for _ in basis]
        coeffs = [sum((wi * v[j] for wi, v in zip(w, basis)), Fraction(0)) for j in range(len(layout))]
        if not any(coeffs):
            continue
        m = _assemble(r, d, A, layout, coeffs)
        if _generic_enough(m, vecs) and _round_trips(m, pairs):
            return m
    raise GenericityExhausted(f"no generic member found at degree {d} after {tries} draws")


def _aligned(a: Point, b: Point, c: Point) -> bool:
    return linalg.rank([a.coords, b.coords, c.coords]) <= 2


def _generic_enough(m: DeJonquieresMap, vecs) -> bool:
    if not m.determinant():
        return False
    for a, b in vecs:
        tail = a[1:]
        fwd_den = a[0] * m.F(tail) + m.G(tail) if m.F else m.G(tail)
        inv_den = m.F0(tail) - b[0] * m.F(tail) if m.F else m.F0(tail)
        if not fwd_den or not inv_den:
            return False
    return True


def _round_trips(m: DeJonquieresMap, pairs) -> bool:
    fwd, inv = dj_forward(m), dj_forward(dj_inverse(m))
    try:
        return all(map_apply(fwd, p) == q and map_apply(inv, q) == p for p, q in pairs)
    except IndeterminacyPoint:
        return False


def find_dejonquieres(
    vertex,
    moves: Sequence[tuple] = (),
    fixed: Sequence = (),
    sampler: Sampler | None = None,
    d_min: int = 2,
    d_max: int = 10,
    tries: int = 16,
) -> DeJonquieresMap:
    """``dj_from_constraints`` with the degree raised until a map exists."""
    sampler = sampler or Sampler(0)
    for d in range(d_min, d_max + 1):
        try:
            return dj_from_constraints(vertex, moves, fixed, d, sampler, tries)
        except (NoSolutionAtDegree, GenericityExhausted):
            continue
    raise DegreeEscalationExhausted(f"no suitable de Jonquières map up to degree {d_max}")


# -- quadro-quadric maps ---------------------------------------------------


@dataclass(frozen=True)
class QuadroQuadric:
    """Degree-2 Cremona map given by the quadrics through ``p`` and ``Q``."""

    forward: RationalMap
    inverse: RationalMap
    certificate: InverseCertificate
    dejonquieres: DeJonquieresMap


def _quadric_rank(q: Form) -> int:
    n = q.nvars
    m = [[Fraction(0)] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            m[i][i] += 2 * c
        else:
            m[i][j] += c
            m[j][i] += c
    return linalg.rank(m)


def quadro_quadric(p, q_plane: LinearSubspace, q_eq: Form) -> QuadroQuadric:
    """Cremona map of the linear system of quadrics through ``p`` and ``Q``.

    ``Q`` lies in the hyperplane ``q_plane``; ``q_eq`` is a quadratic form in
    the hyperplane's basis coordinates, i.e. ``Q = {sum t_j b_j : q_eq(t) = 0}``.
    """
    p = as_point(p)
    r = p.dim
    if q_plane.dim != r - 1 or q_plane.ambient_dim != r:
        raise InputError("Q must span a hyperplane of the ambient space")
    if q_plane.contains(p):
        raise DegeneratePosition("p lies on the hyperplane of Q")
    if q_eq.nvars != r or q_eq.degree != 2 or not q_eq:
        raise InputError("q_eq must be a nonzero quadratic form in the hyperplane coordinates")
    if _quadric_rank(q_eq) < 2:
        raise DegeneratePosition("Q is not reduced")

    n = r + 1
    quad_mons = monomials(n, 2)
    plane_param = [Form.linear([b[i] for b in q_plane.basis]) for i in range(n)]
    pulled = substitute_all([Form.monomial(e) for e in quad_mons], plane_param)
    t_mons = monomials(r, 2)
    # unknowns: quadric coefficients, then the multiplier of q_eq
    rows = []
    for tm in t_mons:
        rows.append([f.coefficient(tm) for f in pulled] + [-q_eq.coefficient(tm)])
    rows.append([Form.monomial(e)(p.coords) for e in quad_mons] + [Fraction(0)])
    sols = linalg.nullspace(rows, len(quad_mons) + 1)
    basis = [Form(n, 2, {e: c for e, c in zip(quad_mons, v[:-1]) if c}) for v in sols]
    basis = [b for b in basis if b]
    if len(basis) != r + 1:
        raise WrongSystemDimension(f"system of quadrics has projective dimension {len(basis) - 1}, expected {r}")

    cols = [[p[i]] + [b[i] for b in q_plane.basis] for i in range(n)]
    frame = LinearAutomorphism.from_rows(linalg.inverse(cols))
    dj = DeJonquieresMap(r, 2, frame, None, q_eq, Form.const(1, r), None)
    dj_fwd = dj_forward(dj)
    # express the computed basis in terms of the normal-form tuple
    mons = quad_mons
    mat = [[f.coefficient(e) for f in dj_fwd.forms] for e in mons]
    T = []
    for b in basis:
        row = linalg.solve(mat, [b.coefficient(e) for e in mons])
        if row is None:
            raise WrongSystemDimension("interpolated system differs from the de Jonquières span")
        T.append(row)
    t_inv = LinearAutomorphism.from_rows(linalg.inverse(T))
    inv_normal = dj_forward(dj_inverse(dj))
    inverse = RationalMap(substitute_all(inv_normal.forms, t_inv.forms()))
    forward = RationalMap(basis)
    cert = verify_inverse_pair(forward, inverse)
    return QuadroQuadric(forward, inverse, cert, dj)
