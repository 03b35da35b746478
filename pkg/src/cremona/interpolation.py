"""Linear systems of monoids containing a parametrized scheme.

Containment is imposed coefficient-wise: a candidate equation is pulled back
along every component parametrization and each coefficient of the pulled-back
polynomial must vanish.  The unknowns are the coefficients of the monoid's
parts in vertex-adapted frame coordinates, so every member automatically has
the required vertex structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import AvoidanceExhausted, InputError, VertexOnScheme
from .monoid import BiVertexMonoid, Monoid
from .poly import Form, monomials, substitute_all, tuple_gcd
from .projective import LinearAutomorphism, Point, Sampler, adapted_frame, apply_to_forms, as_point
from .ratmap import Component, ParamScheme


@dataclass(frozen=True)
class MonoidSystem:
    """Basis of the monoids of degree ``d`` with the given vertex data containing a scheme.

    ``kind`` is ``"monoid"`` (one vertex, parts ``f_low, f_high``) or
    ``"bivertex"`` (parts ``F_d, G, F1, F2``).  ``layout`` lists, per unknown,
    its part name and exponent vector inside that part; ``basis`` holds
    primitive integer coefficient vectors.
    """

    kind: str
    r: int
    d: int
    frame: LinearAutomorphism
    vertices: tuple[Point, ...]
    layout: tuple[tuple[str, tuple], ...]
    basis: tuple[tuple[Fraction, ...], ...]

    def frame_monomial(self, part: str, e: tuple) -> tuple:
        if self.kind == "monoid":
            return ((1,) if part == "f_low" else (0,)) + e
        tail = {"F_d": (0, 0), "G": (1, 0), "F1": (0, 1), "F2": (1, 1)}[part]
        return e + tail

    def frame_equation(self, coeffs: Sequence) -> Form:
        n = self.r + 1
        terms = {}
        for (part, e), c in zip(self.layout, coeffs):
            if c:
                terms[self.frame_monomial(part, e)] = Fraction(c)
        return Form(n, self.d, terms)

    def equation(self, coeffs: Sequence) -> Form:
        eq = self.frame_equation(coeffs)
        if self.frame.is_identity():
            return eq
        return eq.substitute(self.frame.forms())

    def parts(self, coeffs: Sequence) -> dict[str, Form]:
        degs = _part_degrees(self.kind, self.d)
        nv = self.r if self.kind == "monoid" else self.r - 1
        acc: dict[str, dict] = {k: {} for k in degs}
        for (part, e), c in zip(self.layout, coeffs):
            if c:
                acc[part][e] = Fraction(c)
        return {k: Form(nv, max(degs[k], 0), v) if v else Form.zero(nv, max(degs[k], 0)) for k, v in acc.items()}

    def monoid(self, coeffs: Sequence) -> Monoid | BiVertexMonoid:
        p = self.parts(coeffs)
        if self.kind == "monoid":
            return Monoid(self.r, self.d, self.frame, p["f_low"], p["f_high"])
        return BiVertexMonoid(self.r, self.d, self.frame, p["F_d"], p["G"], p["F1"], p["F2"])

    def members(self) -> list[Form]:
        return [self.equation(v) for v in self.basis]


def _part_degrees(kind: str, d: int) -> dict[str, int]:
    if kind == "monoid":
        return {"f_low": d - 1, "f_high": d}
    return {"F_d": d, "G": d - 1, "F1": d - 1, "F2": d - 2}


def _layout(kind: str, r: int, d: int) -> list[tuple[str, tuple]]:
    nv = r if kind == "monoid" else r - 1
    return [(part, e) for part, deg in _part_degrees(kind, d).items() for e in monomials(nv, deg)]


def point_on_component(pt, comp: Component) -> bool | None:
    """Exact membership of ``pt`` in the closure of a curve or point component.

    Returns ``None`` for components of dimension two or more, where the
    toolkit does not decide membership.
    """
    pt = as_point(pt)
    if comp.arity == 1:
        return comp.at([1]) == pt
    if comp.arity != 2:
        return None
    base = tuple_gcd(comp.forms)
    eqs = [f for f in (Form.linear(v) for v in _annihilator(pt)) if f]
    pulled = [g for g in substitute_all(eqs, comp.forms) if g]
    if not pulled:
        return True
    common = tuple_gcd(pulled)
    return common.degree > base.degree


def _annihilator(pt: Point) -> list[list[Fraction]]:
    return linalg.nullspace([pt.coords], len(pt))


def _check_vertex(z: ParamScheme, v: Point) -> None:
    for j, comp in enumerate(z):
        if point_on_component(v, comp):
            raise VertexOnScheme(f"vertex {v} lies on component {j}")


def _conditions(kind: str, r: int, d: int, frame: LinearAutomorphism, layout, z: ParamScheme) -> list[list[Fraction]]:
    monos = [Form.monomial(_frame_mono(kind, part, e)) for part, e in layout]
    rows: list[list[Fraction]] = []
    for comp in z:
        gamma = comp.forms if frame.is_identity() else apply_to_forms(frame, list(comp.forms))
        pulled = substitute_all(monos, gamma)
        support = sorted({e for f in pulled for e in f.terms}, reverse=True)
        for e in support:
            rows.append([f.terms.get(e, Fraction(0)) for f in pulled])
    return rows


def _frame_mono(kind: str, part: str, e: tuple) -> tuple:
    if kind == "monoid":
        return ((1,) if part == "f_low" else (0,)) + e
    return e + {"F_d": (0, 0), "G": (1, 0), "F1": (0, 1), "F2": (1, 1)}[part]


def _system(kind: str, z: ParamScheme, frame, vertices, r: int, d: int) -> MonoidSystem:
    layout = _layout(kind, r, d)
    rows = _conditions(kind, r, d, frame, layout, z) if len(z) else []
    if rows:
        basis = linalg.nullspace(rows, len(layout))
    else:
        basis = [[Fraction(int(i == j)) for j in range(len(layout))] for i in range(len(layout))]
    return MonoidSystem(kind, r, d, frame, tuple(vertices), tuple(layout), tuple(tuple(v) for v in basis))


def monoid_system(z: ParamScheme | Sequence[Component], vertex, d: int) -> MonoidSystem:
    """Monoids of degree ``d`` with vertex ``vertex`` containing every component of ``z``."""
    z = z if isinstance(z, ParamScheme) else ParamScheme(tuple(z))
    vertex = as_point(vertex)
    r = vertex.dim
    if d < 1:
        raise InputError("degree must be positive")
    if len(z) and z.ambient_dim != r:
        raise InputError("scheme and vertex live in different spaces")
    _check_vertex(z, vertex)
    frame = adapted_frame([(vertex, 0)], r)
    return _system("monoid", z, frame, (vertex,), r, d)


def bivertex_system(z: ParamScheme | Sequence[Component], p1, p2, d: int, check_vertices: bool = True) -> MonoidSystem:
    """Monoids of degree ``d`` with vertices ``p1`` (sent to ``e_r``) and ``p2`` (sent to ``e_{r-1}``).

    ``check_vertices=False`` skips the vertex-on-scheme precondition; callers
    that do so must verify the resulting maps themselves.
    """
    z = z if isinstance(z, ParamScheme) else ParamScheme(tuple(z))
    p1, p2 = as_point(p1), as_point(p2)
    r = p1.dim
    if p1 == p2:
        raise InputError("the two vertices must differ")
    if d < 1:
        raise InputError("degree must be positive")
    if len(z) and z.ambient_dim != r:
        raise InputError("scheme and vertices live in different spaces")
    if check_vertices:
        _check_vertex(z, p1)
        _check_vertex(z, p2)
    frame = adapted_frame([(p1, r), (p2, r - 1)], r)
    return _system("bivertex", z, frame, (p1, p2), r, d)


def system_dimension(s: MonoidSystem) -> int:
    return len(s.basis) - 1


def ambient_dimension(kind: str, r: int, d: int) -> int:
    """Projective dimension of the full system (no containment conditions)."""
    return len(_layout(kind, r, d)) - 1


def cone_parametrization(vertex, comp: Component) -> Component:
    """``(s, u) -> s^e * vertex + gamma(u)``, a parametrization of the cone over ``comp``."""
    vertex = as_point(vertex)
    if len(vertex) != len(comp.forms):
        raise InputError("vertex and component live in different spaces")
    k = comp.arity
    forms = list(comp.forms)
    e = comp.degree
    if e == 0:
        u = Form.var(0, k)
        forms = [f * u for f in forms]
        e = 1
    pos = list(range(1, k + 1))
    s_pow = Form.var(0, k + 1) ** e
    out = [s_pow.scale(c) + f.embed(k + 1, pos) for c, f in zip(vertex.coords, forms)]
    return Component(k + 1, tuple(out))


def contains_component(eq: Form, comp: Component, sampler: Sampler | None = None, witnesses: int = 3) -> bool:
    """Exact test ``eq o comp == 0``; random evaluations only ever short-cut a ``False``."""
    if sampler is not None:
        for _ in range(witnesses):
            t = [Fraction(sampler.integer(-9, 9)) for _ in range(comp.arity)]
            if eq(comp.values(t)):
                return False
    return not eq.substitute(comp.forms)


def _layers_ok(s: MonoidSystem, coeffs) -> bool:
    p = s.parts(coeffs)
    if s.kind == "monoid":
        return bool(p["f_low"])
    return bool(p["F1"] or p["F2"]) and bool(p["G"] or p["F2"])


def pick_member(s: MonoidSystem, z: ParamScheme, sampler: Sampler, tries: int = 16, box: int = 5) -> list[Fraction]:
    """Coefficients of a random member avoiding every cone ``C_v(Z_j)``."""
    if not s.basis:
        raise AvoidanceExhausted("the system is empty")
    cones = [cone_parametrization(v, comp) for v in s.vertices for comp in z]
    for _ in range(tries):
        w = [sampler.integer(-box, box) for _ in s.basis]
        coeffs = [sum((wi * v[j] for wi, v in zip(w, s.basis)), Fraction(0)) for j in range(len(s.layout))]
        if not any(coeffs) or not _layers_ok(s, coeffs):
            continue
        eq = s.equation(coeffs)
        if all(not contains_component(eq, c, sampler) for c in cones):
            return coeffs
    raise AvoidanceExhausted(f"no member of degree {s.d} avoids the cones after {tries} draws")


def pick_cone_avoiding(s: MonoidSystem, z: ParamScheme | Sequence[Component], sampler: Sampler, tries: int = 16) -> Form:
    z = z if isinstance(z, ParamScheme) else ParamScheme(tuple(z))
    return s.equation(pick_member(s, z, sampler, tries))
