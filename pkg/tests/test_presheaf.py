"""Presheaf evaluation, map enumeration, and the strictification criterion."""

from thetalift import ncat, presheaf, theta
from thetalift.sites import ThetaSite


SITE = ThetaSite(2, max_width=2)
OBJS = SITE.objects()

G0 = theta.point()
G1 = theta.globe_table(1)
G2 = theta.globe_table(2)


def nerve(cat):
    return presheaf.NerveTheta(cat, 2)


def test_site_objects_match_enumeration():
    assert tuple(OBJS) == theta.enumerate_objects(2, 2)
    assert len(OBJS) == 8


def test_representable_counts():
    R = presheaf.Representable(SITE, G1)
    # elements at T are maps T -> (1)
    for t in OBJS:
        assert len(R.evaluate(t)) == len(theta.hom(t, G1, 2))


def test_nerve_counts_frozen():
    J2 = ncat.build_interval(2)[0]
    N = nerve(J2)
    assert len(N.evaluate(G0)) == 2
    assert len(N.evaluate(G1)) == 4
    NJ = nerve(ncat.raise_level(ncat.walking_iso(), 2))
    assert len(NJ.evaluate(G1)) == 4
    assert len(NJ.evaluate(G2)) == 4


def test_nerve_functoriality():
    for cat in [ncat.build_interval(2)[0], ncat.globe(2, 2)]:
        assert presheaf.functoriality_violations(nerve(cat), SITE, OBJS) == []


def test_boundary_and_spine_shapes():
    B = presheaf.BoundaryTheta(SITE, G1)
    R = presheaf.Representable(SITE, G1)
    assert len(B.evaluate(G0)) == 2
    # boundary omits exactly the classes hitting the full cell
    assert len(B.evaluate(G1)) == len(R.evaluate(G1)) - 1
    two_col = theta.parse_table("1 1 / 0")
    S = presheaf.SpineTheta(SITE, two_col)
    Rep = presheaf.Representable(SITE, two_col)
    assert len(S.evaluate(G1)) == 5
    assert len(Rep.evaluate(G1)) == 6


def test_enumerate_maps_counts_and_determinism():
    B = presheaf.BoundaryTheta(SITE, G1)
    NJ = nerve(ncat.raise_level(ncat.walking_iso(), 2))
    maps1 = list(presheaf.enumerate_maps(B, NJ, SITE, OBJS))
    maps2 = list(presheaf.enumerate_maps(B, NJ, SITE, OBJS))
    assert len(maps1) == 4
    assert [m.encoding(OBJS) for m in maps1] == [m.encoding(OBJS) for m in maps2]
    assert [m.label for m in maps1] == [m.label for m in maps2]
    assert len({m.label for m in maps1}) == 4


def test_enumerate_maps_respects_constraints():
    R = presheaf.Representable(SITE, G1)
    NJ = nerve(ncat.raise_level(ncat.walking_iso(), 2))
    free = list(presheaf.enumerate_maps(R, NJ, SITE, OBJS))
    x0 = R.evaluate(G0)[0]
    pinned = list(presheaf.enumerate_maps(
        R, NJ, SITE, OBJS, constraints={(G0, x0): free[0].at(G0)[x0]}))
    assert 0 < len(pinned) <= len(free)
    assert all(m.at(G0)[x0] == free[0].at(G0)[x0] for m in pinned)


def test_pullback_truncation_matches_simplicial_nerve():
    J = ncat.walking_iso()
    X = presheaf.pullback_t(presheaf.NerveDelta(J), 2)
    NJ = nerve(ncat.raise_level(J, 2))
    for t in OBJS:
        assert len(X.evaluate(t)) == len(NJ.evaluate(t))


def test_segal_check_positive():
    J2 = ncat.build_interval(2)[0]
    two_col = theta.parse_table("1 1 / 0")
    rep = presheaf.segal_check(J2, two_col, 2)
    assert rep["bijective"]
    assert rep["functors"] == rep["spine_maps"]


def test_spine_comparison_negative_control():
    # the boundary of a composite shape is not determined by its spine:
    # it has fewer fillers than compatible spine families
    two_col = theta.parse_table("1 1 / 0")
    graph_like = presheaf.BoundaryTheta(SITE, two_col)
    S = presheaf.SpineTheta(SITE, two_col)
    n_spines = len(list(presheaf.enumerate_maps(S, graph_like, SITE, OBJS)))
    n_cells = len(graph_like.evaluate(two_col))
    assert n_cells < n_spines


def test_terminal_and_empty():
    T = presheaf.TerminalPresheaf()
    E = presheaf.EmptyPresheaf()
    for t in OBJS:
        assert len(T.evaluate(t)) == 1
        assert E.evaluate(t) == ()


def test_disjoint_union_counts():
    T = presheaf.TerminalPresheaf()
    D = presheaf.DisjointUnion(T, T)
    for t in OBJS:
        assert len(D.evaluate(t)) == 2
    assert presheaf.functoriality_violations(D, SITE, OBJS) == []
