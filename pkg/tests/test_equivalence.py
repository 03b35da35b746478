import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T, line, scheme, twisted_cubic
from cremona.equivalence import (
    contract_union,
    pipeline_equivalence,
    points_equivalence,
    verify_chain,
)
from cremona.errors import IndeterminacyPoint, VerificationFailed
from cremona.poly import Form
from cremona.projective import Point, Sampler, general_point, sample_point
from cremona.ratmap import Component, RationalMap, compose_chain, image_rank, maps_projectively_equal

E = [Point.coordinate(i, 3) for i in range(4)]


def random_points(s, r, count):
    pts = []
    while len(pts) < count:
        p = sample_point(s, r, box=6)
        if p not in pts:
            pts.append(p)
    return pts


def test_equal_point_sets_give_empty_chain():
    pts = [[1, 2, 3], [0, 1, 5]]
    chain = points_equivalence(pts, pts, Sampler(0), seed=0)
    assert len(chain) == 0
    verify_chain(chain)


def test_single_point_is_one_de_jonquieres_step():
    chain = points_equivalence([[1, 2, 3]], [[3, -1, 2]], Sampler(0), seed=0)
    assert [s.provenance for s in chain.steps] == ["dejonquieres"]
    assert chain.forward_point([1, 2, 3]) == Point([3, -1, 2])


@pytest.mark.parametrize("r,seed", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_five_points(r, seed):
    s = Sampler(seed)
    src, dst = random_points(s, r, 5), random_points(s, r, 5)
    chain = points_equivalence(src, dst, s, seed=seed)
    for p, q in zip(src, dst):
        assert chain.forward_point(p) == q
        assert chain.inverse_point(q) == p
    assert verify_chain(chain).tracks == 5


def chain_soundness(chain, sampler, r, count=5):
    """Forward then inverse through every step returns each general sample point."""
    checked = 0
    for _ in range(4 * count):
        p = general_point(sampler, r, box=50)
        try:
            q = chain.forward_point(p)
            back = chain.inverse_point(q)
        except IndeterminacyPoint:
            continue
        if back == p:
            checked += 1
        else:  # a general point must come back; a special one may land on a fundamental locus
            assert False, f"{p} came back as {back}"
        if checked == count:
            break
    assert checked == count


def test_points_chain_soundness():
    s = Sampler(9)
    src, dst = random_points(s, 2, 4), random_points(s, 2, 4)
    chain = points_equivalence(src, dst, s, seed=9)
    chain_soundness(chain, Sampler(90), 2)


CUBIC = scheme(twisted_cubic())
PADDED_LINE = scheme(Component(2, (T("t0^3"), T("t0^2*t1"), Form.zero(2, 3), Form.zero(2, 3))))


def test_identical_schemes_need_only_linear_steps():
    chain = pipeline_equivalence(CUBIC, CUBIC, Sampler(2), seed=2)
    assert all(step.forward.degree == 1 for step in chain.steps)
    composite = compose_chain([step.forward for step in chain.steps])
    assert maps_projectively_equal(composite, RationalMap.identity(3))
    verify_chain(chain)


def test_twisted_cubic_to_line():
    chain = pipeline_equivalence(CUBIC, PADDED_LINE, Sampler(4), samples=8, seed=4)
    for t in chain.sample_params[0]:
        assert chain.forward_point(CUBIC[0].at(t)) == PADDED_LINE[0].at(t)
    assert len(chain.stages) == len(chain.steps) + 1
    # the structural invariant: stage i ends with the first i+1 coordinates of psi
    report = verify_chain(chain)
    assert report.stage_checks > 0
    chain_soundness(chain, Sampler(40), 3, count=3)


def test_skew_lines_to_concurrent_lines():
    skew = scheme(line(E[0], E[1]), line(E[2], E[3]))
    concurrent = scheme(line(E[0], E[1]), line(E[0], E[2]))
    chain = pipeline_equivalence(skew, concurrent, Sampler(6), samples=8, seed=6)
    for j in range(2):
        for t in chain.sample_params[j]:
            assert chain.forward_point(skew[j].at(t)) == concurrent[j].at(t)
    verify_chain(chain)


THREE_LINES = scheme(line(E[0], E[1]), line(E[0], E[2]), line(E[0], E[3]))


def test_three_concurrent_lines_contract():
    chain = contract_union(THREE_LINES, Sampler(3), seed=3)
    assert len(chain.images) == 3 and len(set(chain.images)) == 3
    last = chain.steps[-1].forward
    assert [image_rank(c.mapped(last)) for c in chain.final_stage] == [1, 1, 1]
    verify_chain(chain)


def test_single_line_contracts_to_a_point():
    chain = contract_union(scheme(line([1, 2, 0, 1], [0, 1, 1, 3])), Sampler(5), seed=5)
    assert len(chain.images) == 1
    assert image_rank(chain.final_stage[0].mapped(chain.steps[-1].forward)) == 1
    verify_chain(chain)


def test_points_need_no_contraction():
    z = scheme(Component.point([1, 0, 0, 0]), Component.point([1, 2, 3, 4]))
    chain = contract_union(z, Sampler(1), seed=1)
    assert len(chain) == 0
    assert chain.images == [Point([1, 0, 0, 0]), Point([1, 2, 3, 4])]


def test_skew_lines_and_point_contract():
    z = scheme(line(E[0], E[1]), line(E[2], E[3]), Component.point([1, 1, 1, 1]))
    chain = contract_union(z, Sampler(7), seed=7)
    assert len(set(chain.images)) == 3
    verify_chain(chain)


def test_verification_catches_tampering():
    s = Sampler(5)
    src, dst = random_points(s, 2, 3), random_points(s, 2, 3)
    chain = points_equivalence(src, dst, s, seed=5)
    bad_track = copy.deepcopy(chain)
    pts = bad_track.tracks[0].points
    pts[-1] = Point([c + 1 for c in pts[-1].coords]) if pts[-1] != Point([1, 1, 1]) else Point([1, 2, 3])
    with pytest.raises(VerificationFailed):
        verify_chain(bad_track)
    bad_target = copy.deepcopy(chain)
    bad_target.target[0] = Point([7, 7, 1])
    with pytest.raises(VerificationFailed):
        verify_chain(bad_target)


@settings(max_examples=8)
@given(st.integers(0, 10_000))
def test_point_sets_property(seed):
    s = Sampler(seed)
    r = 2 + seed % 2
    src, dst = random_points(s, r, 3), random_points(s, r, 3)
    chain = points_equivalence(src, dst, s, seed=seed)
    for p, q in zip(src, dst):
        assert chain.forward_point(p) == q
