"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 a bounded search gave up,
4 a verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import serialize as ser
from .dejonquieres import dj_forward, dj_inverse, find_dejonquieres, quadro_quadric
from .equivalence import (
    DEFAULT_MAX_DEGREE,
    DEFAULT_SAMPLES,
    contract_union,
    pipeline_equivalence,
    points_equivalence,
    verify_chain,
)
from .errors import AvoidanceExhausted, CremonaError, InputError, MonoidSearchExhausted
from .interpolation import bivertex_system, monoid_system, pick_member, system_dimension
from .monoid import bivertex_from_equation, double_projection, double_projection_inverse, monoid_from_equation, stereographic
from .projective import LinearSubspace, Sampler
from .ratmap import compose_chain, verify_inverse_pair


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _emit(obj, out: str | None) -> None:
    text = ser.dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _equation(text: str, n: int):
    return ser.form_from_json(text, n)


# -- commands -------------------------------------------------------------------


def cmd_points_equiv(a) -> int:
    data = _load(a.input)
    src = [ser.point_from_json(p) for p in data["source"]]
    dst = [ser.point_from_json(p) for p in data["target"]]
    chain = points_equivalence(src, dst, Sampler(a.seed), max_degree=a.max_degree, seed=a.seed)
    _emit(ser.chain_to_json(chain), a.out)
    if a.out:
        print(f"chain with {len(chain)} steps written to {a.out}")
    return 0


def cmd_pipeline_equiv(a) -> int:
    data = _load(a.input)
    phi, psi = ser.scheme_from_json(data["phi"]), ser.scheme_from_json(data["psi"])
    chain = pipeline_equivalence(phi, psi, Sampler(a.seed), samples=a.samples, max_degree=a.max_degree, seed=a.seed)
    _emit(ser.chain_to_json(chain), a.out)
    if a.out:
        print(f"chain with {len(chain)} steps written to {a.out}")
    return 0


def cmd_contract(a) -> int:
    z = ser.scheme_from_json(_load(a.scheme))
    chain = contract_union(z, Sampler(a.seed), samples=a.samples, max_degree=a.max_degree, seed=a.seed)
    if a.out:
        _emit(ser.chain_to_json(chain), a.out)
    print(f"{len(chain.images)} distinct points")
    for j, p in enumerate(chain.images):
        print(f"component {j} -> [{', '.join(ser.point_to_json(p))}]")
    return 0


def _system(a, z, d):
    vertex = ser.point_from_json(a.vertex)
    if a.vertex2:
        return bivertex_system(z, vertex, ser.point_from_json(a.vertex2), d)
    return monoid_system(z, vertex, d)


def cmd_monoid_dim(a) -> int:
    z = ser.scheme_from_json(_load(a.scheme))
    s = _system(a, z, a.d)
    if a.out:
        _emit(ser.system_to_json(s), a.out)
    print(system_dimension(s))
    return 0


def cmd_monoid_find(a) -> int:
    z = ser.scheme_from_json(_load(a.scheme))
    sampler = Sampler(a.seed)
    for d in range(1, a.max_degree + 1):
        s = _system(a, z, d)
        if not s.basis:
            continue
        try:
            coeffs = pick_member(s, z, sampler)
        except AvoidanceExhausted:
            continue
        _emit(
            {"seed": a.seed, "degree": d, "dimension": system_dimension(s), "equation": ser.form_to_json(s.equation(coeffs))},
            a.out,
        )
        return 0
    raise MonoidSearchExhausted(f"no cone-avoiding monoid up to degree {a.max_degree}")


def cmd_dejonquieres(a) -> int:
    data = _load(a.input)
    vertex = ser.point_from_json(data["vertex"])
    moves = [(ser.point_from_json(p), ser.point_from_json(q)) for p, q in data.get("moves", [])]
    fixed = [ser.point_from_json(p) for p in data.get("fixed", [])]
    m = find_dejonquieres(vertex, moves, fixed, Sampler(a.seed), d_min=data.get("min_degree", 2), d_max=a.max_degree)
    fwd, inv = dj_forward(m), dj_forward(dj_inverse(m))
    out = {"seed": a.seed, "degree": m.d, "center": ser.point_to_json(m.center), **ser.triple_to_json(fwd, inv, verify_inverse_pair(fwd, inv))}
    _emit(out, a.out)
    return 0


def cmd_quadro_quadric(a) -> int:
    data = _load(a.input)
    p = ser.point_from_json(data["p"])
    plane = LinearSubspace(tuple(ser.point_from_json(b) for b in data["plane"]))
    q_eq = ser.form_from_json(data["quadric"], len(plane.basis), "t")
    qq = quadro_quadric(p, plane, q_eq)
    _emit(ser.triple_to_json(qq.forward, qq.inverse, qq.certificate), a.out)
    return 0


def cmd_stereographic(a) -> int:
    vertex = ser.point_from_json(a.vertex)
    m = monoid_from_equation(_equation(a.equation, len(vertex)), vertex)
    proj, inv = stereographic(m)
    _emit({"projection": ser.map_to_json(proj), "inverse": ser.map_to_json(inv)}, a.out)
    return 0


def cmd_double_projection(a) -> int:
    p1, p2 = ser.point_from_json(a.p1), ser.point_from_json(a.p2)
    w = bivertex_from_equation(_equation(a.equation, len(p1)), p1, p2)
    fwd, inv = double_projection(w), double_projection_inverse(w)
    _emit(ser.triple_to_json(fwd, inv, verify_inverse_pair(fwd, inv)), a.out)
    return 0


def _maps_in(obj):
    if "steps" in obj:
        return [ser.map_from_json(s["forward"]) for s in obj["steps"]]
    if "forward" in obj:
        return [ser.map_from_json(obj["forward"])]
    return [ser.map_from_json(obj)]


def cmd_compose(a) -> int:
    maps = [m for path in a.maps for m in _maps_in(_load(path))]
    if not maps:
        raise InputError("nothing to compose")
    _emit({"composite": ser.map_to_json(compose_chain(maps))}, a.out)
    return 0


def cmd_verify(a) -> int:
    chain = ser.chain_from_json(_load(a.chain))
    print(verify_chain(chain).summary())
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cremona", description="Construct and verify Cremona transformations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, seed=False, out=True):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        if seed:
            p.add_argument("--seed", type=int, required=True, help="seed for every random choice")
            p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
        if out:
            p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = add("points-equiv", cmd_points_equiv, "chain of de Jonquières maps between two point sets", seed=True)
    p.add_argument("--in", dest="input", required=True, help='JSON {"source": [...], "target": [...]}')

    p = add("pipeline-equiv", cmd_pipeline_equiv, "double-projection pipeline between two parametrized schemes", seed=True)
    p.add_argument("--in", dest="input", required=True, help='JSON {"phi": scheme, "psi": scheme}')
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    p = add("contract", cmd_contract, "contract every component of a scheme to a point", seed=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    p = add("monoid-dim", cmd_monoid_dim, "projective dimension of a monoid system")
    p.add_argument("--scheme", required=True)
    p.add_argument("--vertex", required=True)
    p.add_argument("--vertex2", help="second vertex (bi-vertex system)")
    p.add_argument("--d", type=int, required=True)

    p = add("monoid-find", cmd_monoid_find, "seeded cone-avoiding monoid containing a scheme", seed=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--vertex", required=True)
    p.add_argument("--vertex2", help="second vertex (bi-vertex monoid)")

    p = add("dejonquieres", cmd_dejonquieres, "de Jonquières map from point constraints", seed=True)
    p.add_argument("--in", dest="input", required=True, help='JSON {"vertex", "moves": [[p, q]], "fixed": [...]}')

    p = add("quadro-quadric", cmd_quadro_quadric, "quadro-quadric map with base p and Q")
    p.add_argument("--in", dest="input", required=True, help='JSON {"p", "plane": [basis], "quadric": "t0*t1 - t2^2"}')

    p = add("stereographic", cmd_stereographic, "stereographic projection of a monoid and its inverse")
    p.add_argument("--equation", required=True)
    p.add_argument("--vertex", required=True)

    p = add("double-projection", cmd_double_projection, "double projection of a bi-vertex monoid")
    p.add_argument("--equation", required=True)
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)

    p = add("compose", cmd_compose, "compose maps (applied in the order given)")
    p.add_argument("--maps", nargs="+", required=True)

    p = add("verify", cmd_verify, "re-check a chain file without any search", out=False)
    p.add_argument("--chain", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CremonaError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error [input]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
