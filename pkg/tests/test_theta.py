"""Table combinatorics, hom-set counts, and the split epi / mono factorization."""

import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from thetalift import ncat, theta


# -- tables ------------------------------------------------------------------

def test_parse_and_text_roundtrip():
    for text in ["0", "2", "1 1 / 0", "2 2 / 1", "1 1 1 / 0 0"]:
        t = theta.parse_table(text)
        assert t.violations() == []
        assert theta.parse_table(t.to_text()) == t
        assert theta.parse_table(__import__("json").dumps(t.to_json())) == t


def test_parse_rejects_bad_tables():
    for text in ["", "1 1", "1 1 / 1", "0 0 / 0", "-1"]:
        with pytest.raises(theta.ThetaError):
            theta.parse_table(text)


def test_enumerate_objects_counts():
    objs = theta.enumerate_objects(2, 2)
    assert len(objs) == 8
    assert theta.point() in objs
    assert all(t.violations(2) == [] for t in objs)
    # width-1 site over n=1 is the two tables (0), (1)
    assert len(theta.enumerate_objects(1, 1)) == 2


def test_delta_table_bridge():
    for m in range(5):
        t = theta.delta_table(m)
        assert t.violations(1) == []
        assert theta.table_as_simplex_level(t) == m
    assert theta.table_as_simplex_level(theta.Table((2,), ())) is None


@given(st.lists(st.integers(min_value=1, max_value=2), min_size=1, max_size=3),
       st.data())
@settings(max_examples=40, deadline=None)
def test_segments_recompose_width(top, data):
    bottom = tuple(
        data.draw(st.integers(min_value=0,
                              max_value=min(top[k], top[k + 1]) - 1))
        for k in range(len(top) - 1))
    t = theta.Table(tuple(top), bottom)
    assert t.violations() == []
    segs = t.segments()
    assert sum(s.width for s in segs) == t.width
    assert all(s.violations() == [] for s in segs)


# -- free categories -----------------------------------------------------------

def test_free_ncat_counts():
    assert theta.free_ncat(theta.globe_table(2), 2).cell_counts() == (2, 4, 5)
    assert theta.free_ncat(theta.point(), 2).cell_counts() == (1, 1, 1)
    # the free category on (1 1 / 0) is the poset 0 < 1 < 2 up a level
    assert theta.free_ncat(theta.delta_table(2), 2).cell_counts() == (3, 6, 6)


def test_free_ncat_valid_and_generated():
    for t in theta.enumerate_objects(2, 2):
        cat = theta.free_ncat(t, 2)
        assert ncat.validate(cat) == []
        assert cat.gens is not None


# -- hom sets -------------------------------------------------------------------

def monotone_map_count(m, k):
    """Oracle: monotone maps [m] -> [k] counted by brute force."""
    return sum(1 for f in itertools.product(range(k + 1), repeat=m + 1)
               if all(f[i] <= f[i + 1] for i in range(m)))


def test_width_one_dimension_one_homs_are_monotone_maps():
    for m in range(4):
        for k in range(4):
            got = len(theta.hom(theta.delta_table(m), theta.delta_table(k), 1))
            assert got == monotone_map_count(m, k)
            assert got == comb(m + k + 1, m + 1)


def test_hom_counts_frozen():
    g1 = theta.globe_table(1)
    g2 = theta.globe_table(2)
    assert len(theta.hom(g1, g2, 2)) == 4
    assert len(theta.hom(g2, g1, 2)) == 3
    assert len(theta.hom(theta.point(), g2, 2)) == 2
    two_col = theta.parse_table("1 1 / 0")
    assert len(theta.hom(g1, two_col, 2)) == 6


def test_compose_identity_laws():
    g1, g2 = theta.globe_table(1), theta.globe_table(2)
    for f in theta.hom(g1, g2, 2):
        assert theta.compose_morphisms(theta.identity_morphism(g2, 2), f) == f
        assert theta.compose_morphisms(f, theta.identity_morphism(g1, 2)) == f


# -- factorization ---------------------------------------------------------------

def test_ez_factorization_exhaustive_small():
    objs = theta.enumerate_objects(2, 2)
    seen = 0
    for s in objs:
        for t in objs:
            for f in theta.hom(s, t, 2):
                e, m = theta.ez_factorize(f)
                assert theta.is_split_epi(e)
                assert theta.is_mono(m)
                assert theta.compose_morphisms(m, e) == f
                seen += 1
    assert seen > 500


def test_mono_epi_classification():
    g1 = theta.globe_table(1)
    ident = theta.identity_morphism(g1, 2)
    assert theta.is_mono(ident) and theta.is_split_epi(ident)
    legs, _ = theta.spine_inclusions(theta.parse_table("1 1 / 0"), 2)
    for leg in legs:
        assert theta.is_mono(leg)


def test_boundary_monos_counts():
    # the two endpoints of the 1-globe
    bd = theta.boundary_monos(theta.globe_table(1), 2)
    assert len([m for m in bd if m.source == theta.point()]) == 2
    assert theta.boundary_monos(theta.point(), 2) == []


def test_globular_graph_shapes():
    g = theta.globular_graph(theta.parse_table("2 1 / 0"), 2)
    assert g.violations() == []
    # objects 0..2, one generating arrow per column plus the 2-source/target
    assert tuple(len(c) for c in g.cells) == (3, 3, 1)
    g2 = theta.globular_graph(theta.globe_table(2), 2)
    assert tuple(len(c) for c in g2.cells) == (2, 2, 1)
