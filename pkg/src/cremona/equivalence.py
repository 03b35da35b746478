"""End-to-end constructions: point-set equivalence, the double-projection
pipeline for parametrized schemes, and contraction of unions of rational
varieties.  Every construction returns a :class:`CremonaChain` whose claims
can be re-checked by :func:`verify_chain` without any search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .dejonquieres import dj_forward, dj_inverse, find_dejonquieres, quadro_quadric
from .errors import (
    AvoidanceExhausted,
    DegenerateDenominator,
    DegeneratePosition,
    GenericityExhausted,
    IndeterminacyPoint,
    InjectivityScreenFailed,
    InputError,
    MonoidSearchExhausted,
    NotInverse,
    RejectionExhausted,
    StepVerificationFailed,
    VerificationFailed,
)
from .interpolation import bivertex_system, pick_member
from .monoid import double_projection, double_projection_inverse
from .poly import Form, monomials, substitute_all
from .projective import (
    LinearAutomorphism,
    LinearSubspace,
    Point,
    Sampler,
    apply_to_forms,
    as_point,
    random_automorphism,
    span,
)
from .ratmap import (
    Component,
    InverseCertificate,
    ParamScheme,
    RationalMap,
    image_rank,
    map_apply,
    map_compose,
    verify_inverse_pair,
)

DEFAULT_SAMPLES = 25
DEFAULT_MAX_DEGREE = 10
SCREEN_TRIES = 16
PARAM_BOX = 997


# -- chains ------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    provenance: str
    forward: RationalMap
    inverse: RationalMap
    certificate: InverseCertificate


@dataclass
class Track:
    """Trajectory of one point through the chain: ``points[k+1] = step_k(points[k])``.

    Steps listed in ``contracting`` are not expected to be invertible at the
    tracked point, so the inverse check is skipped there.
    """

    label: str
    points: list[Point]
    contracting: list[int] = field(default_factory=list)


@dataclass
class CremonaChain:
    ambient_dim: int
    kind: str = "chain"
    seed: int | None = None
    steps: list[ChainStep] = field(default_factory=list)
    tracks: list[Track] = field(default_factory=list)
    source: list[Point] = field(default_factory=list)
    target: list[Point] = field(default_factory=list)
    stages: list[list[Component]] | None = None
    sample_params: list[list[tuple]] | None = None
    images: list[Point] = field(default_factory=list)
    final_stage: list[Component] | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def append(self, provenance: str, forward: RationalMap, inverse: RationalMap, cert: InverseCertificate | None = None) -> ChainStep:
        r = self.ambient_dim
        for m in (forward, inverse):
            if m.source_dim != r or m.target_dim != r:
                raise InputError("chain steps must be self-maps of the ambient space")
        step = ChainStep(provenance, forward, inverse, cert or verify_inverse_pair(forward, inverse))
        self.steps.append(step)
        return step

    def append_linear(self, m: LinearAutomorphism) -> ChainStep:
        return self.append("linear", RationalMap.linear(m), RationalMap.linear(m.inverse()))

    def extend(self, other: "CremonaChain") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise InputError("chains live in different spaces")
        self.steps.extend(other.steps)

    def forward_point(self, p, start: int = 0, stop: int | None = None) -> Point:
        p = as_point(p)
        for step in self.steps[start:stop]:
            p = map_apply(step.forward, p)
        return p

    def inverse_point(self, q) -> Point:
        q = as_point(q)
        for step in reversed(self.steps):
            q = map_apply(step.inverse, q)
        return q

    def trajectory(self, p) -> list[Point]:
        pts = [as_point(p)]
        for step in self.steps:
            pts.append(map_apply(step.forward, pts[-1]))
        return pts


def chain_from_steps(r: int, steps: Sequence[tuple[str, RationalMap, RationalMap]]) -> CremonaChain:
    chain = CremonaChain(r, kind="composition")
    for prov, f, g in steps:
        chain.append(prov, f, g)
    return chain


# -- point sets -----------------------------------------------------------------


def _general_position(src: Sequence[Point], dst: Sequence[Point]) -> bool:
    everything = set(src) | set(dst)
    for i, a in enumerate(src):
        for j, b in enumerate(dst):
            if i != j and a == b:
                return False
    for a, b in zip(src, dst):
        if a == b:
            continue
        line = span([a, b])
        if any(q != a and q != b and line.contains(q) for q in everything):
            return False
    return True


def _random_hyperplane_avoiding(sampler: Sampler, r: int, avoid: Sequence[Point], box: int = 5) -> list[Fraction]:
    for _ in range(64):
        h = sampler.vector(r + 1, box)
        if any(h) and all(sum(c * x for c, x in zip(h, p.coords)) != 0 for p in avoid):
            return h
    raise RejectionExhausted("no hyperplane avoiding the given points")


def _hyperplane_subspace(h: Sequence[Fraction]) -> LinearSubspace:
    return LinearSubspace(tuple(Point(v) for v in linalg.nullspace([list(h)], len(h))))


def _random_point_avoiding(sampler: Sampler, r: int, avoid: Sequence[Point], on=None, box: int = 5, budget: int = 64) -> Point:
    """Random point of ``P^r`` (or of the span of the points ``on``) outside ``avoid``."""
    for _ in range(budget):
        if on is None:
            v = sampler.vector(r + 1, box)
        else:
            w = sampler.vector(len(on), box)
            v = [sum((wk * p[i] for wk, p in zip(w, on)), Fraction(0)) for i in range(r + 1)]
        if any(v) and Point(v) not in avoid:
            return Point(v)
    raise RejectionExhausted(f"no acceptable point after {budget} draws")


def _generic_quadro_quadric(sampler: Sampler, r: int, avoid: Sequence[Point]) -> tuple[RationalMap, RationalMap, InverseCertificate]:
    """A seeded quadro-quadric map with base locus away from ``avoid``, followed by a random automorphism."""
    h = _random_hyperplane_avoiding(sampler, r, avoid)
    plane = _hyperplane_subspace(h)
    p = _random_point_avoiding(sampler, r, list(avoid), box=5)
    while plane.contains(p):
        p = _random_point_avoiding(sampler, r, list(avoid), box=5)
    for _ in range(SCREEN_TRIES):
        q_eq = Form(r, 2, {e: c for e, c in zip(monomials(r, 2), sampler.vector(len(monomials(r, 2)), 5)) if c})
        if not q_eq:
            continue
        try:
            qq = quadro_quadric(p, plane, q_eq)
        except DegeneratePosition:
            continue
        mix = random_automorphism(sampler, r + 1)
        fwd = RationalMap(apply_to_forms(mix, list(qq.forward.forms)))
        inv = map_compose(qq.inverse, RationalMap.linear(mix.inverse()))
        return fwd, inv, verify_inverse_pair(fwd, inv)
    raise GenericityExhausted("no reduced quadric found")


def _step_is_local_iso(fwd: RationalMap, inv: RationalMap, pts: Sequence[Point]) -> list[Point] | None:
    try:
        images = [map_apply(fwd, p) for p in pts]
        if any(map_apply(inv, q) != p for p, q in zip(pts, images)):
            return None
    except IndeterminacyPoint:
        return None
    if len(set(images)) != len(set(pts)):
        return None
    return images


def _vertex_on_line(sampler: Sampler, a: Point, b: Point, fixed: Sequence[Point], others: Sequence[Point]) -> Point:
    for _ in range(64):
        lam = Fraction(sampler.nonzero(9), sampler.nonzero(9))
        v = Point([x + lam * y for x, y in zip(a.coords, b.coords)])
        if v in others:
            continue
        if any(linalg.rank([v.coords, f.coords, g.coords]) <= 2 for i, f in enumerate(fixed) for g in fixed[i + 1 :]):
            continue
        return v
    raise RejectionExhausted("no admissible center on the line")


def points_equivalence(
    z: Sequence,
    z_prime: Sequence,
    sampler: Sampler,
    max_degree: int = DEFAULT_MAX_DEGREE,
    seed: int | None = None,
) -> CremonaChain:
    """A chain of de Jonquières maps sending ``z[i]`` to ``z_prime[i]`` for every ``i``."""
    src = [as_point(p) for p in z]
    dst = [as_point(p) for p in z_prime]
    if len(src) != len(dst):
        raise InputError("point lists have different lengths")
    if not src:
        raise InputError("empty point lists")
    r = src[0].dim
    if r < 2 or any(p.dim != r for p in src + dst):
        raise InputError("points must live in one P^r with r >= 2")
    if len(set(src)) != len(src) or len(set(dst)) != len(dst):
        raise InputError("point lists must be reduced (pairwise distinct)")

    chain = CremonaChain(r, kind="points", seed=seed, source=list(src), target=list(dst))
    cur = list(src)
    if not _general_position(cur, dst):
        for _ in range(SCREEN_TRIES):
            fwd, inv, cert = _generic_quadro_quadric(sampler, r, cur + dst)
            images = _step_is_local_iso(fwd, inv, cur)
            if images is not None and _general_position(images, dst):
                chain.append("quadro-quadric", fwd, inv, cert)
                cur = images
                break
        else:
            raise GenericityExhausted("no quadro-quadric modification reached general position")

    for i in range(len(cur)):
        if cur[i] == dst[i]:
            continue
        fixed = list(dict.fromkeys(dst[:i] + [q for h in range(i + 1, len(cur)) for q in (cur[h], dst[h])]))
        v = _vertex_on_line(sampler, cur[i], dst[i], fixed, fixed + [cur[i], dst[i]])
        m = find_dejonquieres(v, [(cur[i], dst[i])], fixed, sampler, d_min=2, d_max=max_degree)
        fwd, inv = dj_forward(m), dj_forward(dj_inverse(m))
        chain.append("dejonquieres", fwd, inv)
        cur[i] = dst[i]

    chain.tracks = [Track(f"p{i}", chain.trajectory(p)) for i, p in enumerate(src)]
    for i, t in enumerate(chain.tracks):
        if t.points[-1] != dst[i]:
            raise StepVerificationFailed(f"point {i} does not reach its target")
        if chain.inverse_point(t.points[-1]) != src[i]:
            raise StepVerificationFailed(f"inverse chain does not return point {i}")
    return chain


# -- the double-projection pipeline -----------------------------------------


def _as_scheme(z) -> ParamScheme:
    return z if isinstance(z, ParamScheme) else ParamScheme(tuple(z))


def _random_linear_param_form(sampler: Sampler, arity: int) -> Form:
    return Form.linear([sampler.nonzero(5) for _ in range(arity)])


def equalize_degrees(phi: ParamScheme, psi: ParamScheme, sampler: Sampler) -> tuple[ParamScheme, ParamScheme]:
    """Multiply the lower-degree tuple of each matched pair by a power of a seeded linear form."""
    a_out, b_out = [], []
    for a, b in zip(phi, psi):
        diff = a.degree - b.degree
        if diff:
            ell = _random_linear_param_form(sampler, a.arity) ** abs(diff)
            if diff > 0:
                b = Component(b.arity, tuple(f * ell for f in b.forms))
            else:
                a = Component(a.arity, tuple(f * ell for f in a.forms))
        a_out.append(a)
        b_out.append(b)
    return ParamScheme(tuple(a_out)), ParamScheme(tuple(b_out))


def _sample_params(sampler: Sampler, comps: Sequence[Component], count: int) -> list[list[tuple]]:
    out = []
    for group in comps:
        ts: list[tuple] = []
        guard = 0
        while len(ts) < count:
            guard += 1
            if guard > 64 * count:
                raise RejectionExhausted("parameter sampling keeps hitting base points")
            t = tuple(Fraction(sampler.nonzero(PARAM_BOX)) for _ in range(group[0].arity))
            if any(not any(c.values(t)) for c in group):
                continue
            if group[0].arity == 1 and ts:
                break
            ts.append(t)
        out.append(ts)
    return out


def _pipeline_frame(p: Point, k: int, R: int) -> LinearAutomorphism:
    """Frame sending ``p`` to ``e_{R-1}`` and ``e_R`` to itself, keeping the tail coordinates in order.

    ``p`` lies in the span of ``e_0..e_{k-1}`` with ``p_{k-1} != 0``; the
    coordinates ``k..R-1`` move down by one and ``x_R`` is untouched.
    """
    n = R + 1
    cols: list[list[Fraction]] = []
    unit = lambda j: [Fraction(int(i == j)) for i in range(n)]  # noqa: E731
    for j in range(k - 1):
        cols.append(unit(j))
    for j in range(k, R):
        cols.append(unit(j))
    cols.append(list(p.coords))
    cols.append(unit(R))
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    return LinearAutomorphism.from_rows(linalg.inverse(m))


def _screen_line_projection(frame: LinearAutomorphism, comps: Sequence[Component], params: Sequence[Sequence[tuple]], R: int) -> bool:
    """Sampled injectivity of the projection from ``<p, e_R>`` restricted to the scheme."""
    seen: dict[Point, Point] = {}
    for comp, ts in zip(comps, params):
        for t in ts:
            z = comp.at(t)
            img = frame.apply_vector(z.coords)[: R - 1]
            if not any(img):
                return False
            key = Point(img)
            if seen.setdefault(key, z) != z:
                return False
    return True


def _top_block(a: LinearAutomorphism) -> LinearAutomorphism:
    n = a.size
    for i in range(n - 1):
        if a.matrix[i][n - 1] or a.matrix[n - 1][i]:
            raise DegeneratePosition("frame is not block diagonal")
    return LinearAutomorphism.from_rows([row[: n - 1] for row in a.matrix[: n - 1]])


@dataclass(frozen=True)
class Round:
    forward: RationalMap
    inverse: RationalMap
    certificate: InverseCertificate
    degree: int
    vertex: Point
    next_components: tuple[Component, ...]


def _project_components(frame: LinearAutomorphism, comps: Sequence[Component], R: int) -> list[Component]:
    out = []
    for c in comps:
        y = apply_to_forms(frame, list(c.forms))
        out.append(Component(c.arity, tuple(y[: R - 1] + [y[R]])))
    return out


def _check_round(fwd: RationalMap, inv: RationalMap, cur, nxt, params, i: int) -> bool:
    """Pointwise check of one round; ``False`` means a sample hit a special locus."""
    for j, (a, b, ts) in enumerate(zip(cur, nxt, params)):
        for t in ts:
            x, y = a.at(t), b.at(t)
            try:
                fx = map_apply(fwd, x)
                gy = map_apply(inv, y)
            except IndeterminacyPoint:
                return False
            if fx != y or gy != x:
                raise StepVerificationFailed(f"round {i}: component {j} sample {list(t)} does not round-trip")
    return True


def _double_projection_round(
    cur: Sequence[Component],
    appended: Sequence[Component],
    params,
    i: int,
    r: int,
    sampler: Sampler,
    max_degree: int,
) -> Round:
    R = r + 1
    k = r + 1 - i
    zs = [Component(c.arity, tuple(c.forms) + (a.forms[i],)) for c, a in zip(cur, appended)]
    e_R = Point.coordinate(R, R)
    last_err: Exception | None = None
    for _ in range(SCREEN_TRIES):
        if k == 1:
            p = Point.coordinate(0, R)
        else:
            coords = sampler.vector(k, 5) + [Fraction(0)] * (R + 1 - k)
            coords[k - 1] = Fraction(sampler.nonzero(5))
            p = Point(coords)
        frame = _pipeline_frame(p, k, R)
        if not _screen_line_projection(frame, zs, params, R):
            last_err = InjectivityScreenFailed(f"round {i}: projection from <p, e_R> failed the injectivity screen")
            continue
        break
    else:
        raise last_err or InjectivityScreenFailed(f"round {i}: no admissible second vertex")

    scheme = ParamScheme(tuple(zs))
    nxt = _project_components(frame, zs, R)
    block = _top_block(frame)
    lin, lin_inv = RationalMap.linear(block), block.inverse()
    for d in range(1, max_degree + 1):
        # base points of the padded tuples can put a vertex on the closure of Z;
        # the round is verified on samples and by its certificate instead
        system = bivertex_system(scheme, e_R, p, d, check_vertices=False)
        if system.frame != frame:
            raise DegeneratePosition("bi-vertex frame differs from the pipeline frame")
        if not system.basis:
            continue
        for _ in range(4):
            try:
                coeffs = pick_member(system, scheme, sampler)
            except AvoidanceExhausted:
                break
            w = system.monoid(coeffs)
            try:
                dp, dpi = double_projection(w), double_projection_inverse(w)
                fwd = map_compose(dp, lin)
                inv = RationalMap(apply_to_forms(lin_inv, list(dpi.forms)))
                cert = verify_inverse_pair(fwd, inv)
            except (DegenerateDenominator, NotInverse, InputError):
                continue
            if _check_round(fwd, inv, cur, nxt, params, i):
                return Round(fwd, inv, cert, d, p, tuple(nxt))
    raise MonoidSearchExhausted(f"round {i}: no usable bi-vertex monoid up to degree {max_degree}")


def pipeline_equivalence(
    phi,
    psi,
    sampler: Sampler,
    r: int | None = None,
    samples: int = DEFAULT_SAMPLES,
    max_degree: int = DEFAULT_MAX_DEGREE,
    seed: int | None = None,
) -> CremonaChain:
    """Cremona equivalence between ``phi(Z)`` and ``psi(Z)`` by ``r + 1`` double projections.

    ``phi`` and ``psi`` are component-matched parametrizations over shared
    parameter spaces.  The chain is ``g``, then the double projections, then
    ``h^-1``, where ``g, h`` are seeded random automorphisms making the
    coordinate projections general.
    """
    phi, psi = _as_scheme(phi), _as_scheme(psi)
    if len(phi) != len(psi) or not len(phi):
        raise InputError("phi and psi must have the same positive number of components")
    r = phi.ambient_dim if r is None else r
    if phi.ambient_dim != r or psi.ambient_dim != r:
        raise InputError("parametrizations must live in P^r")
    if r < 3:
        raise InputError("the pipeline needs r >= 3")
    for j, (a, b) in enumerate(zip(phi, psi)):
        if a.arity != b.arity:
            raise InputError(f"component {j}: parameter spaces differ")
        if a.arity - 1 > r - 2:
            raise InputError(f"component {j}: dimension exceeds r - 2")

    phi_eq, psi_eq = equalize_degrees(phi, psi, sampler)
    g = random_automorphism(sampler, r + 1)
    h = random_automorphism(sampler, r + 1)
    x0 = [Component(c.arity, tuple(apply_to_forms(g, list(c.forms)))) for c in phi_eq]
    y0 = [Component(c.arity, tuple(apply_to_forms(h, list(c.forms)))) for c in psi_eq]
    params = _sample_params(sampler, list(zip(phi_eq, psi_eq, x0, y0)), samples)

    chain = CremonaChain(r, kind="pipeline", seed=seed)
    chain.append_linear(g)
    stages: list[list[Component]] = [list(phi_eq), list(x0)]
    cur = list(x0)
    for i in range(r + 1):
        rnd = _double_projection_round(cur, y0, params, i, r, sampler, max_degree)
        chain.append("double-projection", rnd.forward, rnd.inverse, rnd.certificate)
        cur = list(rnd.next_components)
        for j, (c, y) in enumerate(zip(cur, y0)):
            if tuple(c.forms[r - i :]) != tuple(y.forms[: i + 1]):
                raise StepVerificationFailed(f"round {i}: component {j} lost the appended coordinates")
        stages.append(cur)
    chain.append_linear(h.inverse())
    stages.append(list(psi_eq))

    chain.stages = stages
    chain.sample_params = params
    chain.tracks = []
    for j, (c, ts) in enumerate(zip(phi_eq, params)):
        for s, t in enumerate(ts):
            traj = chain.trajectory(c.at(t))
            if traj[-1] != psi_eq[j].at(t):
                raise StepVerificationFailed(f"component {j} sample {s} misses its target")
            chain.tracks.append(Track(f"component {j} sample {s}", traj))
    return chain


# -- contraction -------------------------------------------------------------


def _is_point(c: Component) -> bool:
    return c.arity == 1


def _dim(c: Component) -> int:
    return c.arity - 1


def _linear_span(c: Component) -> LinearSubspace | None:
    """The span of a linearly parametrized component, or ``None`` if the tuple is not linear."""
    if c.degree != 1 or image_rank(c) != c.arity:
        return None
    pts = []
    for k in range(c.arity):
        e = tuple(int(i == k) for i in range(c.arity))
        pts.append(Point([f.coefficient(e) for f in c.forms]))
    return LinearSubspace(tuple(pts))


def _intersection(subs: Sequence[LinearSubspace], n: int) -> list[Point]:
    rows = [f.linear_coeffs() for s in subs for f in s.equations()]
    if not rows:
        return [Point.coordinate(i, n - 1) for i in range(n)]
    return [Point(v) for v in linalg.nullspace(rows, n)]


def _quadric_through(plane: LinearSubspace, subs: Sequence[Sequence[Point]], sampler: Sampler) -> Form | None:
    """A random quadric of the hyperplane (in its basis coordinates) containing the given spaces."""
    r = plane.ambient_dim
    basis = [b.coords for b in plane.basis]
    mons = monomials(r, 2)
    rows = []
    for pts in subs:
        locals_ = []
        for p in pts:
            t = linalg.solve(linalg.transpose(basis), list(p.coords))
            if t is None:
                return None
            locals_.append(t)
        # the restriction of the quadric to the span must vanish identically
        param = [Form.linear([v[i] for v in locals_]) for i in range(r)]
        pulled = substitute_all([Form.monomial(e) for e in mons], param)
        support = sorted({e for f in pulled for e in f.terms})
        for e in support:
            rows.append([f.coefficient(e) for f in pulled])
    sols = linalg.nullspace(rows, len(mons)) if rows else [[Fraction(int(i == j)) for j in range(len(mons))] for i in range(len(mons))]
    if not sols:
        return None
    for _ in range(SCREEN_TRIES):
        w = [sampler.integer(-5, 5) for _ in sols]
        coeffs = [sum((wk * v[j] for wk, v in zip(w, sols)), Fraction(0)) for j in range(len(mons))]
        q = Form(r, 2, {e: c for e, c in zip(mons, coeffs) if c})
        if q and _reduced_quadric(q):
            return q
    return None


def _reduced_quadric(q: Form) -> bool:
    from .dejonquieres import _quadric_rank

    return _quadric_rank(q) >= 2


def _to_ambient(plane: LinearSubspace, t: Sequence[Fraction]) -> Point:
    return Point([sum((tk * b[i] for tk, b in zip(t, plane.basis)), Fraction(0)) for i in range(plane.ambient_dim + 1)])


def _quadric_with_points(plane: LinearSubspace, count: int, sampler: Sampler) -> tuple[Form, list[Point]]:
    """A random reduced quadric of the hyperplane together with ``count`` distinct rational points on it.

    The quadric is forced through a random point ``a0``; every other point is
    the residual intersection of ``Q`` with a random line through ``a0``.
    """
    n = plane.ambient_dim
    mons = monomials(n, 2)
    for _ in range(SCREEN_TRIES):
        a0 = sampler.vector(n, 5)
        if not any(a0):
            continue
        coeffs = dict(zip(mons, sampler.vector(len(mons), 5)))
        q = Form(n, 2, {e: c for e, c in coeffs.items() if c})
        if not q:
            continue
        # shift one coefficient so that q(a0) = 0
        pivot = next((e for e in mons if Form.monomial(e)(a0)), None)
        if pivot is None:
            continue
        val = q(a0)
        q = q - Form.monomial(pivot, val / Form.monomial(pivot)(a0))
        if not q or not _reduced_quadric(q):
            continue
        pts = {Point(a0)}
        guard = 0
        while len(pts) < count and guard < 64 * count:
            guard += 1
            w = sampler.vector(n, 7)
            qw = q(w)
            if not qw:
                continue
            # q(a0 + s w) = s * (B(a0, w) + s * q(w)) with B the polar form
            lam = q([x + y for x, y in zip(a0, w)]) - qw
            s = -lam / qw
            if not s:
                continue
            pts.add(Point([x + s * y for x, y in zip(a0, w)]))
        if len(pts) >= count:
            ordered = sorted(pts, key=lambda p: p.coords)[:count]
            return q, [_to_ambient(plane, p.coords) for p in ordered]
    raise GenericityExhausted("could not build a quadric with enough rational points")


def _random_subspace_in(plane: LinearSubspace, dim: int, sampler: Sampler) -> list[Point]:
    n = plane.ambient_dim
    while True:
        pts = [_to_ambient(plane, sampler.vector(n, 5)) for _ in range(dim + 1)]
        if linalg.rank([p.coords for p in pts]) == dim + 1:
            return pts


def _choose_h_q(r: int, top_spaces, m: int, sampler: Sampler, avoid: Sequence[Point], center: Point):
    """Hyperplane ``H`` avoiding ``center`` and a reduced quadric ``Q ⊂ H`` containing every ``A_j``.

    ``top_spaces`` is either a list of spans meeting at ``center`` (the
    ``A_j`` are then their traces on ``H``) or an integer count, in which case
    fresh ``A_j`` are chosen inside ``Q``.
    """
    for _ in range(SCREEN_TRIES):
        h = _random_hyperplane_avoiding(sampler, r, list(avoid) + [center])
        plane = _hyperplane_subspace(h)
        if isinstance(top_spaces, int):
            if m == 1:
                q, pts = _quadric_with_points(plane, top_spaces, sampler)
                a_sets = [[p] for p in pts]
            else:
                a_sets = [_random_subspace_in(plane, m - 1, sampler) for _ in range(top_spaces)]
                q = _quadric_through(plane, a_sets, sampler)
                if q is None:
                    continue
        else:
            a_sets = []
            for sub in top_spaces:
                trace = _intersection([sub, plane], r + 1)
                a_sets.append(trace)
            q = _quadric_through(plane, a_sets, sampler)
            if q is None:
                continue
        return plane, q, a_sets
    raise GenericityExhausted("no hyperplane and quadric in the required position")


def _cone_component(center: Point, a_pts: Sequence[Point]) -> Component:
    return Component.linear_span([center] + list(a_pts))


def _samples_on(c: Component, sampler: Sampler, count: int) -> list[Point]:
    out = []
    guard = 0
    while len(out) < count and guard < 64 * count:
        guard += 1
        t = [Fraction(sampler.nonzero(PARAM_BOX)) for _ in range(c.arity)]
        if any(c.values(t)):
            out.append(c.at(t))
        if _is_point(c):
            break
    return out


def contract_union(
    z,
    sampler: Sampler,
    samples: int = DEFAULT_SAMPLES,
    max_degree: int = DEFAULT_MAX_DEGREE,
    seed: int | None = None,
) -> CremonaChain:
    """A chain contracting every component of ``z`` to a point, the points pairwise distinct."""
    z = _as_scheme(z)
    if not len(z):
        raise InputError("empty scheme")
    r = z.ambient_dim
    for j, c in enumerate(z):
        if _dim(c) > r - 2:
            raise InputError(f"component {j} has dimension above r - 2")
    chain = CremonaChain(r, kind="contract", seed=seed)
    original = list(z)
    sample_sets = [_samples_on(c, sampler, samples) for c in original]
    cur = list(original)
    contracting: dict[int, list[int]] = {j: [] for j in range(len(cur))}

    while max(_dim(c) for c in cur) > 0:
        m = max(_dim(c) for c in cur)
        top = [j for j, c in enumerate(cur) if _dim(c) == m]
        point_comps = [c.at([1]) for c in cur if _is_point(c)]
        spans = [_linear_span(cur[j]) for j in top]
        direct = None
        if all(s is not None for s in spans):
            common = _intersection(spans, r + 1)
            if common:
                others = [c for j, c in enumerate(cur) if j not in top]
                center = _random_point_avoiding(sampler, r, point_comps, on=common)
                try:
                    if any(_dim(c) > 0 and _contains(c, center) for c in others):
                        raise GenericityExhausted("center lies on a lower-dimensional component")
                    direct = (center, _choose_h_q(r, spans, m, sampler, point_comps, center))
                except (GenericityExhausted, RejectionExhausted):
                    direct = None
        if direct is not None:
            center, (plane, q, a_sets) = direct
            stage_in = list(cur)
        else:
            if r < 3:
                raise InputError("contracting non-concurrent components needs r >= 3")
            center = _random_point_avoiding(sampler, r, point_comps)
            plane, q, a_sets = _choose_h_q(r, len(top), m, sampler, point_comps, center)
            targets = list(cur)
            for j, a in zip(top, a_sets):
                targets[j] = _match_arity(_cone_component(center, a), cur[j].arity)
            sub = pipeline_equivalence(cur, targets, sampler, r=r, samples=max(3, samples // 5), max_degree=max_degree)
            chain.extend(sub)
            stage_in = targets
        qq = quadro_quadric(center, plane, q)
        step_index = len(chain.steps)
        chain.append("quadro-quadric", qq.forward, qq.inverse, qq.certificate)
        for j in top:
            contracting[j].append(step_index)
        nxt = []
        for j, c in enumerate(stage_in):
            if j in top:
                nxt.append(_image_space(c, qq.forward, m, sampler))
            elif _is_point(c):
                nxt.append(Component.point(map_apply(qq.forward, c.at([1]))))
            else:
                nxt.append(c.mapped(qq.forward))
        if max(_dim(c) for c in nxt) == 0:
            chain.final_stage = list(stage_in)
        cur = nxt

    images = [c.at([1]) for c in cur]
    if len(set(images)) != len(images):
        raise StepVerificationFailed("contracted images are not pairwise distinct")
    if chain.final_stage is not None:
        last = chain.steps[-1].forward
        for j, c in enumerate(chain.final_stage):
            if image_rank(c.mapped(last)) != 1:
                raise StepVerificationFailed(f"component {j} is not contracted to a point")
    chain.images = images
    chain.tracks = []
    for j, pts in enumerate(sample_sets):
        for s, p in enumerate(pts):
            traj = chain.trajectory(p)
            if traj[-1] != images[j]:
                raise StepVerificationFailed(f"component {j} sample {s} does not reach its image point")
            chain.tracks.append(Track(f"component {j} sample {s}", traj, list(contracting[j])))
    return chain


def _contains(c: Component, p: Point) -> bool:
    from .interpolation import point_on_component

    return bool(point_on_component(p, c))


def _match_arity(c: Component, arity: int) -> Component:
    if c.arity != arity:
        raise InputError("target space has the wrong dimension")
    return c


def _image_space(c: Component, fwd: RationalMap, m: int, sampler: Sampler) -> Component:
    """Linear reparametrization of ``fwd(c)``, which is a linear space of dimension ``m - 1``."""
    if m == 1:
        return Component.point(_single_image(c, fwd))
    pts = []
    for p in _samples_on(c, sampler, 4 * m):
        try:
            pts.append(map_apply(fwd, p))
        except IndeterminacyPoint:
            continue
    sub = span(pts)
    if sub.dim != m - 1:
        raise StepVerificationFailed(f"image of a {m}-dimensional component has dimension {sub.dim}")
    return Component.linear_span(sub.basis)


def _single_image(c: Component, fwd: RationalMap) -> Point:
    img = c.mapped(fwd)
    if image_rank(img) != 1:
        raise StepVerificationFailed("component is not contracted to a point")
    for f in img.forms:
        if f:
            lead = f.leading_term()[0]
            return Point([g.coefficient(lead) for g in img.forms])
    raise StepVerificationFailed("image tuple vanishes")


# -- search-free verification ----------------------------------------------------


@dataclass
class VerificationReport:
    steps: int
    tracks: int
    stage_checks: int
    kind: str

    def summary(self) -> str:
        return f"OK {self.kind}: {self.steps} steps, {self.tracks} tracks, {self.stage_checks} stage checks"


def verify_chain(chain: CremonaChain) -> VerificationReport:
    """Re-check every certificate and every recorded claim by evaluation only."""
    r = chain.ambient_dim
    for k, step in enumerate(chain.steps):
        for m in (step.forward, step.inverse):
            if m.source_dim != r or m.target_dim != r:
                raise VerificationFailed(f"step {k}: not a self-map of P^{r}")
        try:
            cert = verify_inverse_pair(step.forward, step.inverse)
        except (NotInverse, InputError) as exc:
            raise VerificationFailed(f"step {k}: {exc}") from None
        if cert != step.certificate:
            raise VerificationFailed(f"step {k}: recorded certificate differs from the recomputed one")

    for t in chain.tracks:
        if len(t.points) != len(chain.steps) + 1:
            raise VerificationFailed(f"{t.label}: trajectory length does not match the chain")
        for k, step in enumerate(chain.steps):
            a, b = t.points[k], t.points[k + 1]
            try:
                if map_apply(step.forward, a) != b:
                    raise VerificationFailed(f"{t.label}: step {k} forward image differs")
                if k not in t.contracting and map_apply(step.inverse, b) != a:
                    raise VerificationFailed(f"{t.label}: step {k} inverse image differs")
            except IndeterminacyPoint as exc:
                raise VerificationFailed(f"{t.label}: step {k}: {exc}") from None

    stage_checks = 0
    if chain.kind == "points":
        if len(chain.tracks) != len(chain.source) or len(chain.source) != len(chain.target):
            raise VerificationFailed("point chain: source, target and tracks disagree in length")
        for t, p, q in zip(chain.tracks, chain.source, chain.target):
            if t.points[0] != p or t.points[-1] != q:
                raise VerificationFailed(f"{t.label}: endpoints differ from the claimed pair")
    if chain.stages is not None:
        # stage k parametrizes the scheme at boundary k, i.e. before step k
        if len(chain.stages) != len(chain.steps) + 1 or chain.sample_params is None:
            raise VerificationFailed("stage list does not match the chain")
        tracks = iter(chain.tracks)
        for j, ts in enumerate(chain.sample_params):
            for t in ts:
                tr = next(tracks, None)
                if tr is None:
                    raise VerificationFailed("fewer tracks than sample parameters")
                for k, stage in enumerate(chain.stages):
                    if stage[j].at(t) != tr.points[k]:
                        raise VerificationFailed(f"{tr.label}: stage {k} parametrization disagrees")
                    stage_checks += 1
    if chain.kind == "contract":
        if len(set(chain.images)) != len(chain.images):
            raise VerificationFailed("contracted images are not pairwise distinct")
        for t in chain.tracks:
            j = int(t.label.split()[1])
            if t.points[-1] != chain.images[j]:
                raise VerificationFailed(f"{t.label}: does not end at image {j}")
        if chain.final_stage is not None:
            last = chain.steps[-1].forward
            for j, c in enumerate(chain.final_stage):
                img = c.mapped(last)
                if image_rank(img) != 1:
                    raise VerificationFailed(f"component {j}: final image is not a point")
                stage_checks += 1
    return VerificationReport(len(chain.steps), len(chain.tracks), stage_checks, chain.kind)
