"""Lifting problems: trivial fibration checks and the collapse counterexample."""

import pytest

from thetalift import lifting, ncat, presheaf, theta
from thetalift.sites import ThetaSite


SITE = ThetaSite(2, max_width=2)
OBJS = SITE.objects()


def test_counterexample_square_has_no_lift():
    p, site, objs = lifting.counterexample_square(2, 2)
    rep = lifting.find_lift(p, site, objs)
    assert rep.status == "nolift"
    assert lifting.count_lifts(p, site, objs) == 0


def test_verify_counterexample_full_report():
    rep = lifting.verify_counterexample(2, 2)
    assert rep["boundary_square"] == "nolift"
    assert rep["lift_count"] == 0
    assert rep["truncation_iso_fibration"] is True
    assert rep["anodyne_rlp"] is True
    assert rep["anodyne_squares"] > 0
    assert rep["verified"] is True


def test_collapse_is_not_trivial_fibration():
    J2, j2, _, _ = ncat.build_interval(2)
    rep = lifting.check_trivial_fibration(presheaf.nerve_map(j2, 2), 2)
    assert rep.positive is False
    assert rep.witness is not None
    assert rep.generator.startswith("cell:")


def test_contractible_nerve_over_point_is_trivial_fibration():
    NJ = lifting.interval_nerve(2)
    rep = lifting.check_trivial_fibration(presheaf.terminal_map(NJ), 2)
    assert rep.positive is True
    assert rep.squares_checked > 0


def test_check_not_2qcat():
    rep = lifting.check_not_2qcat(max_width=2)
    assert rep["confirmed_not_fibrant"] is True


def test_find_lift_rejects_non_commuting_square():
    NJ = lifting.interval_nerve(2)
    t = theta.point()
    e0 = lifting.interval_endpoint(2, 0)
    e1 = lifting.interval_endpoint(2, 1)
    p = lifting.LiftingProblem(
        presheaf.identity_map(e0.source), presheaf.identity_map(NJ), e0, e1)
    with pytest.raises(presheaf.BoundExhaustion):
        lifting.find_lift(p, SITE, OBJS)


def test_has_rlp_skips_isos_and_counts_squares():
    NJ = lifting.interval_nerve(2)
    gens = [("id", presheaf.identity_map(NJ, label="id"))]
    rep = lifting.has_rlp(presheaf.terminal_map(NJ), gens, SITE, OBJS)
    assert rep.positive is True
    assert rep.squares_checked == 0  # identity legs are skipped


def test_anodyne_generator_labels():
    gens = lifting.anodyne_generators(
        lifting.spine_generators(SITE, OBJS), 2, 1, SITE, OBJS)
    labels = [label for label, _ in gens]
    assert len(labels) == len(set(labels))
    assert any("spine" in l for l in labels)
    assert any("corner" in l for l in labels)


def test_unique_lifts_for_bo_ff_squares():
    """Squares with bijective-on-objects left leg and fully faithful right
    leg have exactly one filler; checked over a pool of at least 20 squares."""
    term = ncat.terminal(1)
    D1 = ncat.globe(1, 1)
    J = ncat.walking_iso()
    P2 = ncat.simply_connected_groupoid(2)

    def bo(u):
        vals = set(u.maps[0].values())
        return len(vals) == len(u.source.cells[0]) \
            and vals == set(u.target.cells[0])

    lefts, rights = [], []
    for A, B in [(D1, J), (J, P2), (D1, D1)]:
        for u in ncat.enumerate_functors(A, B):
            if bo(u) and not ncat.is_fully_faithful(u):
                lefts.append(u)
    for C, D in [(term, D1), (term, J), (D1, P2), (J, J)]:
        for v in ncat.enumerate_functors(C, D):
            if ncat.is_fully_faithful(v):
                rights.append(v)

    checked = 0
    for u in lefts:
        for v in rights:
            tops = list(ncat.enumerate_functors(u.source, v.source))
            bottoms = list(ncat.enumerate_functors(u.target, v.target))
            for top in tops:
                vt = ncat.compose(v, top)
                for bottom in bottoms:
                    if ncat.compose(bottom, u).encoding != vt.encoding:
                        continue
                    verdict, h = ncat.unique_lift(u, v, top, bottom)
                    assert verdict == "unique"
                    assert ncat.compose(v, h) == bottom
                    assert ncat.compose(h, u) == top
                    checked += 1
    assert checked >= 20
