"""JSON encoding of forms, maps, schemes, systems and chains.

Rationals are always written as ``"p/q"`` strings.  On input, forms may also
be given as expression strings such as ``"x0*x1 - x2^2"`` (variables
``x0, x1, ...`` for points of ``P^r``, ``t0, t1, ...`` for parameters).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .equivalence import ChainStep, CremonaChain, Track
from .errors import InputError
from .interpolation import MonoidSystem
from .poly import Form, Q, parse_form, qstr
from .projective import LinearAutomorphism, Point
from .ratmap import Component, InverseCertificate, ParamScheme, RationalMap

FORMAT = "cremona-chain/1"


def dumps(obj: Any) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def rational(x) -> Fraction:
    try:
        return Q(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {x!r}") from None


# -- forms and points ----------------------------------------------------------


def form_to_json(f: Form) -> dict:
    return {
        "nvars": f.nvars,
        "degree": f.degree,
        "terms": [{"exps": list(e), "coeff": qstr(c)} for e, c in f.items()],
    }


def form_from_json(obj, nvars: int | None = None, var: str = "x") -> Form:
    if isinstance(obj, str):
        if nvars is None:
            raise InputError("expression strings need a known variable count")
        try:
            return parse_form(obj, nvars, var)
        except (SyntaxError, ValueError, TypeError) as exc:
            raise InputError(f"cannot parse {obj!r}: {exc}") from None
    if isinstance(obj, (int, float)) and nvars is not None:
        return Form.const(rational(obj), nvars)
    try:
        n = int(obj["nvars"])
        terms = {tuple(int(k) for k in t["exps"]): rational(t["coeff"]) for t in obj["terms"]}
        return Form(n, int(obj["degree"]), terms)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed form: {exc}") from None


def point_to_json(p: Point) -> list[str]:
    return [qstr(c) for c in p.coords]


def point_from_json(obj) -> Point:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError:
            raise InputError(f"malformed point: {obj!r}") from None
    if not isinstance(obj, list):
        raise InputError(f"a point is a list of coordinates, got {obj!r}")
    return Point([rational(c) for c in obj])


# -- maps and certificates -----------------------------------------------------


def map_to_json(m: RationalMap) -> dict:
    return {"degree": m.degree, "nvars": m.source_dim + 1, "forms": [form_to_json(f) for f in m.forms]}


def map_from_json(obj) -> RationalMap:
    if isinstance(obj, list):
        obj = {"forms": obj}
    forms = obj["forms"]
    n = obj.get("nvars")
    if n is None:
        n = next((f["nvars"] for f in forms if isinstance(f, dict)), None)
    if n is None:
        n = len(forms)
    return RationalMap([form_from_json(f, n) for f in forms])


def certificate_to_json(c: InverseCertificate) -> dict:
    return {"phi": form_to_json(c.phi), "delta": c.delta, "delta_prime": c.delta_prime}


def certificate_from_json(obj) -> InverseCertificate:
    return InverseCertificate(form_from_json(obj["phi"]), int(obj["delta"]), int(obj["delta_prime"]))


def triple_to_json(fwd: RationalMap, inv: RationalMap, cert: InverseCertificate) -> dict:
    return {"forward": map_to_json(fwd), "inverse": map_to_json(inv), "certificate": certificate_to_json(cert)}


def automorphism_to_json(m: LinearAutomorphism) -> list[list[str]]:
    return [[qstr(c) for c in row] for row in m.matrix]


# -- components and schemes ------------------------------------------------------


def component_to_json(c: Component) -> dict:
    return {"arity": c.arity, "forms": [form_to_json(f) for f in c.forms]}


def component_from_json(obj) -> Component:
    """Accepts ``{"arity", "forms"}``, ``{"point": [...]}`` or ``{"span": [[...], ...]}``."""
    if isinstance(obj, dict) and "point" in obj:
        return Component.point(point_from_json(obj["point"]))
    if isinstance(obj, dict) and "span" in obj:
        return Component.linear_span([point_from_json(p) for p in obj["span"]])
    try:
        k = int(obj["arity"])
        return Component(k, tuple(form_from_json(f, k, "t") for f in obj["forms"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed component: {exc}") from None


def scheme_to_json(z) -> dict:
    comps = list(z)
    return {"ambient_dim": comps[0].ambient_dim if comps else None, "components": [component_to_json(c) for c in comps]}


def scheme_from_json(obj) -> ParamScheme:
    comps = obj["components"] if isinstance(obj, dict) else obj
    z = ParamScheme(tuple(component_from_json(c) for c in comps))
    if isinstance(obj, dict) and obj.get("ambient_dim") is not None and len(z) and z.ambient_dim != int(obj["ambient_dim"]):
        raise InputError("ambient_dim does not match the components")
    return z


def system_to_json(s: MonoidSystem) -> dict:
    return {
        "kind": s.kind,
        "ambient_dim": s.r,
        "degree": s.d,
        "vertices": [point_to_json(v) for v in s.vertices],
        "frame": automorphism_to_json(s.frame),
        "layout": [{"part": part, "exps": list(e)} for part, e in s.layout],
        "basis": [[qstr(c) for c in v] for v in s.basis],
        "dimension": len(s.basis) - 1,
    }


# -- chains -------------------------------------------------------------------------


def chain_to_json(chain: CremonaChain) -> dict:
    out: dict[str, Any] = {
        "format": FORMAT,
        "kind": chain.kind,
        "seed": chain.seed,
        "ambient_dim": chain.ambient_dim,
        "steps": [
            {"provenance": s.provenance, **triple_to_json(s.forward, s.inverse, s.certificate)} for s in chain.steps
        ],
        "tracks": [
            {"label": t.label, "points": [point_to_json(p) for p in t.points], "contracting": list(t.contracting)}
            for t in chain.tracks
        ],
    }
    if chain.source or chain.target:
        out["source"] = [point_to_json(p) for p in chain.source]
        out["target"] = [point_to_json(p) for p in chain.target]
    if chain.stages is not None:
        out["stages"] = [[component_to_json(c) for c in stage] for stage in chain.stages]
        out["sample_params"] = [[[qstr(x) for x in t] for t in ts] for ts in chain.sample_params or []]
    if chain.images:
        out["images"] = [point_to_json(p) for p in chain.images]
    if chain.final_stage is not None:
        out["final_stage"] = [component_to_json(c) for c in chain.final_stage]
    return out


def chain_from_json(obj) -> CremonaChain:
    if obj.get("format") != FORMAT:
        raise InputError(f"not a chain file (format {obj.get('format')!r})")
    try:
        chain = CremonaChain(int(obj["ambient_dim"]), kind=obj["kind"], seed=obj.get("seed"))
        for s in obj["steps"]:
            chain.steps.append(
                ChainStep(
                    s["provenance"],
                    map_from_json(s["forward"]),
                    map_from_json(s["inverse"]),
                    certificate_from_json(s["certificate"]),
                )
            )
        chain.tracks = [
            Track(t["label"], [point_from_json(p) for p in t["points"]], [int(k) for k in t.get("contracting", [])])
            for t in obj["tracks"]
        ]
        chain.source = [point_from_json(p) for p in obj.get("source", [])]
        chain.target = [point_from_json(p) for p in obj.get("target", [])]
        if "stages" in obj:
            chain.stages = [[component_from_json(c) for c in stage] for stage in obj["stages"]]
            chain.sample_params = [[tuple(rational(x) for x in t) for t in ts] for ts in obj["sample_params"]]
        chain.images = [point_from_json(p) for p in obj.get("images", [])]
        if "final_stage" in obj:
            chain.final_stage = [component_from_json(c) for c in obj["final_stage"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed chain file: {exc}") from None
    return chain
