"""Monoid hypersurfaces, stereographic projection and double projection."""

from __future__ import annotations

from dataclasses import dataclass

from .dejonquieres import DeJonquieresMap
from .errors import DegenerateDenominator, InputError, WrongMultiplicity
from .poly import Form, substitute_all
from .projective import LinearAutomorphism, Point, adapted_frame, apply_to_forms, as_point
from .ratmap import InverseCertificate, RationalMap, verify_inverse_pair


def _to_frame(eq: Form, frame: LinearAutomorphism) -> Form:
    """The equation in frame coordinates ``y = A x``, i.e. ``eq(A^-1 y)``."""
    if frame.is_identity():
        return eq
    return eq.substitute(frame.inverse().forms())


def _from_frame(eq_frame: Form, frame: LinearAutomorphism) -> Form:
    if frame.is_identity():
        return eq_frame
    return eq_frame.substitute(frame.forms())


@dataclass(frozen=True)
class Monoid:
    """``y0*f_low(y1..yr) + f_high(y1..yr) = 0`` in frame coordinates ``y = frame x``."""

    r: int
    d: int
    frame: LinearAutomorphism
    f_low: Form
    f_high: Form

    def __post_init__(self):
        if not self.f_low:
            raise WrongMultiplicity("f_low must be nonzero: vertex multiplicity would exceed d-1")
        if self.f_low.nvars != self.r or self.f_low.degree != self.d - 1:
            raise InputError(f"f_low must be a form of degree {self.d - 1} in {self.r} variables")
        if self.f_high.nvars != self.r or (self.f_high and self.f_high.degree != self.d):
            raise InputError(f"f_high must be a form of degree {self.d} in {self.r} variables")

    @property
    def vertex(self) -> Point:
        return self.frame.inverse().apply(Point.coordinate(0, self.r))

    def frame_equation(self) -> Form:
        n = self.r + 1
        pos = list(range(1, n))
        return Form.var(0, n) * self.f_low.embed(n, pos) + self.f_high.embed(n, pos)

    def equation(self) -> Form:
        return _from_frame(self.frame_equation(), self.frame)


def monoid_from_equation(eq: Form, vertex) -> Monoid:
    if not eq:
        raise InputError("zero equation")
    vertex = as_point(vertex)
    r = eq.nvars - 1
    if vertex.dim != r:
        raise InputError("vertex lives in a different space")
    frame = adapted_frame([(vertex, 0)], r)
    layers = _to_frame(eq, frame).layers(0)
    if any(k >= 2 for k in layers) or 1 not in layers:
        mult = eq.degree - max(layers)
        raise WrongMultiplicity(f"vertex has multiplicity {mult}, expected {eq.degree - 1}")
    low = layers[1].drop_var(0)
    high = layers[0].drop_var(0) if 0 in layers else Form.zero(r, eq.degree)
    return Monoid(r, eq.degree, frame, low, high)


def stereographic(m: Monoid) -> tuple[RationalMap, RationalMap]:
    """Projection from the vertex onto ``{y0 = 0}`` and its inverse."""
    proj = RationalMap(m.frame.forms()[1:])
    ys = [Form.var(i, m.r) for i in range(m.r)]
    inv_frame = [-m.f_high] + [m.f_low * y for y in ys]
    if m.frame.is_identity():
        return proj, RationalMap(inv_frame)
    return proj, RationalMap(apply_to_forms(m.frame.inverse(), inv_frame))


def linearizing_dejonquieres(x: Monoid, y: Monoid) -> DeJonquieresMap:
    if x.frame != y.frame or x.r != y.r:
        raise InputError("monoids must share vertex and frame")
    if y.d != x.d - 1:
        raise InputError("second monoid must have degree one less")
    return DeJonquieresMap(x.r, x.d, x.frame, x.f_low, x.f_high, y.f_low, y.f_high)


def monoid_linearize(x: Monoid, y: Monoid) -> RationalMap:
    """``[X, Y*y1, ..., Y*yr]`` (output in frame coordinates); sends ``X`` into ``{y0 = 0}``."""
    dj = linearizing_dejonquieres(x, y)
    normal = dj.normal_tuple()
    if x.frame.is_identity():
        return RationalMap(normal)
    return RationalMap(substitute_all(normal, x.frame.forms()))


def linearize_with_inverse(x: Monoid, y: Monoid) -> tuple[RationalMap, RationalMap, InverseCertificate]:
    dj = linearizing_dejonquieres(x, y)
    fwd = monoid_linearize(x, y)
    inv_normal = RationalMap(dj.inverse().normal_tuple())
    inv = RationalMap(apply_to_forms(x.frame.inverse(), list(inv_normal.forms)))
    return fwd, inv, verify_inverse_pair(fwd, inv)


@dataclass(frozen=True)
class BiVertexMonoid:
    """``F_d + y_{r-1}*G + y_r*F1 + y_r*y_{r-1}*F2 = 0`` in frame coordinates.

    The frame sends the first vertex to ``e_r`` and the second to ``e_{r-1}``;
    ``F_d, G, F1, F2`` are forms of degrees ``d, d-1, d-1, d-2`` in ``y0..y_{r-2}``.
    """

    r: int
    d: int
    frame: LinearAutomorphism
    F_d: Form
    G: Form
    F1: Form
    F2: Form

    def __post_init__(self):
        n = self.r - 1
        for name, f, deg in (("F_d", self.F_d, self.d), ("G", self.G, self.d - 1), ("F1", self.F1, self.d - 1), ("F2", self.F2, self.d - 2)):
            if f.nvars != n:
                raise InputError(f"{name} must be a form in {n} variables")
            if f and f.degree != deg:
                raise InputError(f"{name} must have degree {deg}")
        if not (self.F_d or self.G or self.F1 or self.F2):
            raise InputError("bi-vertex monoid equation is identically zero")

    @property
    def vertices(self) -> tuple[Point, Point]:
        inv = self.frame.inverse()
        return inv.apply(Point.coordinate(self.r, self.r)), inv.apply(Point.coordinate(self.r - 1, self.r))

    def frame_equation(self) -> Form:
        n = self.r + 1
        pos = list(range(self.r - 1))
        a, b = Form.var(self.r - 1, n), Form.var(self.r, n)
        F_d, G, F1, F2 = (f.embed(n, pos) for f in (self.F_d, self.G, self.F1, self.F2))
        return F_d + a * G + b * F1 + a * b * F2

    def equation(self) -> Form:
        return _from_frame(self.frame_equation(), self.frame)


def bivertex_from_equation(eq: Form, p1, p2) -> BiVertexMonoid:
    r = eq.nvars - 1
    if r < 2:
        raise InputError("bi-vertex monoids need r >= 2")
    p1, p2 = as_point(p1), as_point(p2)
    frame = adapted_frame([(p1, r), (p2, r - 1)], r)
    parts: dict[tuple[int, int], dict] = {}
    for e, c in _to_frame(eq, frame).terms.items():
        key = (e[r - 1], e[r])
        if key not in {(0, 0), (1, 0), (0, 1), (1, 1)}:
            raise WrongMultiplicity("equation is not a monoid with vertices at both points")
        parts.setdefault(key, {})[e[: r - 1]] = c
    d = eq.degree

    def part(key, deg):
        return Form(r - 1, deg, parts[key]) if key in parts else Form.zero(r - 1, max(deg, 0))

    return BiVertexMonoid(r, d, frame, part((0, 0), d), part((1, 0), d - 1), part((0, 1), d - 1), part((1, 1), d - 2))


def _pieces(w: BiVertexMonoid):
    n = w.r
    pos = list(range(n - 1))
    z = Form.var(n - 1, n)
    F_d, G, F1, F2 = (f.embed(n, pos) for f in (w.F_d, w.G, w.F1, w.F2))
    return n, z, F_d, G, F1, F2


def double_projection(w: BiVertexMonoid) -> RationalMap:
    """``H1 --> H2`` in frame coordinates: ``(y0..y_{r-1}) -> (y0..y_{r-2}, y_r)``."""
    n, z, F_d, G, F1, F2 = _pieces(w)
    den = z * F2 + F1 if F2 else F1
    if not den:
        raise DegenerateDenominator("F2*y_{r-1} + F1 vanishes identically")
    last = -F_d - z * G if G else -F_d
    return RationalMap([den * Form.var(j, n) for j in range(n - 1)] + [last])


def double_projection_inverse(w: BiVertexMonoid) -> RationalMap:
    """The double projection with the vertices exchanged: ``H2 --> H1``."""
    n, z, F_d, G, F1, F2 = _pieces(w)
    den = z * F2 + G if F2 else G
    if not den:
        raise DegenerateDenominator("F2*y_r + G vanishes identically")
    last = -F_d - z * F1 if F1 else -F_d
    return RationalMap([den * Form.var(j, n) for j in range(n - 1)] + [last])


def double_projection_dejonquieres(w: BiVertexMonoid) -> DeJonquieresMap:
    """The double projection as a de Jonquières map centered at ``e_{r-1}`` of ``H1``."""
    n = w.r
    m = n - 1
    pos = [m - 1] + list(range(m - 1))
    swap = [[int(i == j) for j in range(n)] for i in range(n)]
    swap[0][0] = swap[n - 1][n - 1] = 0
    swap[0][n - 1] = swap[n - 1][0] = 1
    relabel = lambda f: f.embed(m, pos)  # noqa: E731
    return DeJonquieresMap(
        m,
        w.d,
        LinearAutomorphism.from_rows(swap),
        -relabel(w.G),
        -relabel(w.F_d),
        relabel(w.F2),
        relabel(w.F1),
    )


def double_projection_certificate(w: BiVertexMonoid) -> InverseCertificate:
    return verify_inverse_pair(double_projection(w), double_projection_inverse(w))
