"""Rational maps as tuples of equal-degree forms, and inverse certificates.

Composition never cancels common factors: a de Jonquières map composed with
its inverse gives ``Phi * (x0, ..., xr)``, and ``Phi`` is exactly what
:func:`verify_inverse_pair` extracts and returns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import IndeterminacyPoint, InputError, NotInverse
from .poly import Form, check_tuple, remove_common_factor, substitute_all, tuple_degree, variables
from .projective import LinearAutomorphism, Point, as_point


class RationalMap:
    """``P^source_dim --> P^target_dim`` given by ``target_dim + 1`` forms."""

    __slots__ = ("forms",)

    def __init__(self, forms: Sequence[Form]):
        try:
            self.forms = check_tuple(forms)
        except ValueError as exc:
            raise InputError(str(exc)) from None

    @property
    def source_dim(self) -> int:
        return self.forms[0].nvars - 1

    @property
    def target_dim(self) -> int:
        return len(self.forms) - 1

    @property
    def degree(self) -> int:
        return tuple_degree(self.forms)

    @classmethod
    def identity(cls, r: int) -> "RationalMap":
        return cls(variables(r + 1))

    @classmethod
    def linear(cls, m: LinearAutomorphism | Sequence[Sequence]) -> "RationalMap":
        rows = m.matrix if isinstance(m, LinearAutomorphism) else m
        return cls([Form.linear(row) for row in rows])

    def __call__(self, p) -> Point:
        return map_apply(self, p)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMap) and self.forms == other.forms

    def __hash__(self) -> int:
        return hash(self.forms)

    def __repr__(self) -> str:
        return "RationalMap([" + ", ".join(str(f) for f in self.forms) + "])"

    def reduced(self) -> "RationalMap":
        """Same map with the GCD of the entries divided out."""
        return RationalMap(remove_common_factor(self.forms)[0])


def map_apply(m: RationalMap, p) -> Point:
    p = as_point(p)
    if len(p) != m.source_dim + 1:
        raise InputError("point does not live in the source space")
    vals = [f(p.coords) for f in m.forms]
    if not any(vals):
        raise IndeterminacyPoint(f"{p} lies in the indeterminacy locus")
    return Point(vals)


def map_values(m: RationalMap, vec: Sequence) -> list[Fraction]:
    """Evaluate the tuple on a raw coordinate vector (no normalization)."""
    return [f(vec) for f in m.forms]


def map_compose(g: RationalMap, f: RationalMap) -> RationalMap:
    """``g o f``; degrees multiply, nothing is cancelled."""
    if f.target_dim != g.source_dim:
        raise InputError(f"cannot compose: target P^{f.target_dim} vs source P^{g.source_dim}")
    out = substitute_all(g.forms, f.forms)
    if not any(out):
        raise InputError("composite is identically zero")
    return RationalMap(out)


def compose_chain(maps: Sequence[RationalMap]) -> RationalMap:
    """``maps[-1] o ... o maps[0]``."""
    out = maps[0]
    for m in maps[1:]:
        out = map_compose(m, out)
    return out


def maps_projectively_equal(f: RationalMap, g: RationalMap) -> bool:
    if f.source_dim != g.source_dim or f.target_dim != g.target_dim:
        raise InputError("maps have different source or target dimensions")
    a, b = f.forms, g.forms
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


@dataclass(frozen=True)
class InverseCertificate:
    """``(g o f)_i = phi * x_i`` with ``deg phi = delta * delta_prime - 1``."""

    phi: Form
    delta: int
    delta_prime: int

    def __post_init__(self):
        if not self.phi:
            raise NotInverse("fundamental polynomial is zero")
        if self.phi.degree != self.delta * self.delta_prime - 1:
            raise NotInverse(
                f"deg phi = {self.phi.degree}, expected {self.delta * self.delta_prime - 1}"
            )


def verify_inverse_pair(f: RationalMap, g: RationalMap) -> InverseCertificate:
    """Certify ``g o f`` is a form multiple of the identity and return the multiplier."""
    if f.source_dim != f.target_dim or g.source_dim != g.target_dim or f.source_dim != g.source_dim:
        raise InputError("inverse pairs must be self-maps of one P^r")
    comp = map_compose(g, f)
    n = f.source_dim + 1
    xs = variables(n)
    # phi from the first entry; every entry must equal phi * x_i
    c0 = comp.forms[0]
    if not c0:
        raise NotInverse("first coordinate of the composite vanishes")
    phi_terms = {}
    for e, c in c0.terms.items():
        if e[0] == 0:
            raise NotInverse("composite is not a multiple of the identity tuple")
        phi_terms[(e[0] - 1,) + e[1:]] = c
    phi = Form._raw(n, c0.degree - 1, phi_terms)
    for i in range(1, n):
        if comp.forms[i] != phi * xs[i]:
            raise NotInverse(f"coordinate {i} of the composite is not phi * x{i}")
    return InverseCertificate(phi, f.degree, g.degree)


@dataclass(frozen=True)
class Component:
    """One parametrized component: ``arity`` parameters, ``r + 1`` forms in them."""

    arity: int
    forms: tuple[Form, ...]

    def __post_init__(self):
        forms = check_tuple(self.forms)
        if forms[0].nvars != self.arity:
            raise InputError("component forms must be in `arity` variables")
        object.__setattr__(self, "forms", forms)

    @property
    def ambient_dim(self) -> int:
        return len(self.forms) - 1

    @property
    def degree(self) -> int:
        return tuple_degree(self.forms)

    def at(self, t: Sequence) -> Point:
        vals = [f(t) for f in self.forms]
        if not any(vals):
            raise IndeterminacyPoint(f"parameter {list(t)} is a base point of the parametrization")
        return Point(vals)

    def values(self, t: Sequence) -> list[Fraction]:
        return [f(t) for f in self.forms]

    def mapped(self, m: RationalMap) -> "Component":
        return Component(self.arity, tuple(substitute_all(m.forms, self.forms)))

    @classmethod
    def point(cls, p) -> "Component":
        """A point as a degree-0 component in one parameter."""
        p = as_point(p)
        return cls(1, tuple(Form.const(c, 1) for c in p.coords))

    @classmethod
    def linear_span(cls, points: Sequence) -> "Component":
        """Linear parametrization ``t -> sum t_k * points[k]``."""
        pts = [as_point(p) for p in points]
        k = len(pts)
        forms = tuple(Form.linear([pts[j][i] for j in range(k)]) for i in range(len(pts[0])))
        return cls(k, forms)


@dataclass(frozen=True)
class ParamScheme:
    """A reduced scheme given by its component parametrizations."""

    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        dims = {c.ambient_dim for c in comps}
        if len(dims) > 1:
            raise InputError("components live in different ambient spaces")

    @property
    def ambient_dim(self) -> int:
        return self.components[0].ambient_dim

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def mapped(self, m: RationalMap) -> "ParamScheme":
        return ParamScheme(tuple(c.mapped(m) for c in self.components))


def coefficient_matrix(forms: Sequence[Form]) -> list[list[Fraction]]:
    """Rows are tuple entries, columns are the monomials that occur."""
    mons = sorted({e for f in forms for e in f.terms}, reverse=True)
    return [[f.terms.get(e, Fraction(0)) for e in mons] for f in forms]


def image_rank(component_image: Sequence[Form] | Component) -> int:
    """Rank of the coefficient matrix; 1 means the image is a single point."""
    forms = component_image.forms if isinstance(component_image, Component) else component_image
    if not any(forms):
        raise InputError("zero tuple has no image")
    return linalg.rank(coefficient_matrix(forms))
