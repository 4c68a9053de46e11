"""Two-variable products, divisions, and the three-way orthogonality test."""

import json

from thetalift import boxcalc, lifting, ncat, presheaf, theta


BOX = boxcalc.Box(2, max_width=2, max_level=2)

G0 = theta.point()
G1 = theta.globe_table(1)


def interval_nerve():
    return lifting.interval_nerve(2)


def test_external_product_counts():
    R = BOX.rep_t(G1)
    D1 = BOX.rep_d(1)
    P = boxcalc.external_product(R, D1)
    # |hom(T,(1))| * |monotone [m]->[1]|
    for t in BOX.tobjs:
        for m in BOX.dobjs:
            assert len(P.evaluate((t, m))) == \
                len(R.evaluate(t)) * len(D1.evaluate(m))
    assert len(P.evaluate((G0, 1))) == 6


def test_external_product_functoriality():
    small = boxcalc.Box(2, max_width=1, max_level=1)
    P = boxcalc.external_product(small.rep_t(G1), small.rep_d(1))
    assert presheaf.functoriality_violations(P, small.psite, small.pobjs) == []


def test_p_star_is_constant_in_the_simplex_variable():
    NJ = interval_nerve()
    X = boxcalc.p_star(NJ)
    for t in BOX.tobjs:
        counts = {len(X.evaluate((t, m))) for m in BOX.dobjs}
        assert counts == {len(NJ.evaluate(t))}


def test_pushout_product_corner_counts():
    u = lifting.boundary_generators(BOX.tsite, [G1])[0][1]
    v = boxcalc.simplex_inclusion(BOX, 1)
    corner = boxcalc.pushout_product(u, v, BOX)
    assert len(corner.source.evaluate((G1, 1))) == 8
    assert len(corner.target.evaluate((G1, 1))) == 9
    assert corner.is_injective_on(BOX.pobjs)


def test_left_division_by_terminal_recovers_levels():
    NJ = interval_nerve()
    X = boxcalc.p_star(NJ)
    L = boxcalc.left_division(presheaf.TerminalPresheaf(), X, BOX)
    for m in BOX.dobjs:
        # (terminal \ X)_m = maps(Delta_m, sections over the point table)
        assert len(L.evaluate(m)) == len(X.evaluate((G0, m)))


def test_adjunction_counts_agree():
    NJ = interval_nerve()
    X = boxcalc.p_star(NJ)
    R = BOX.rep_t(G0)
    D0 = BOX.rep_d(0)
    D1 = BOX.rep_d(1)
    for Y in (D0, D1):
        a, b, c = boxcalc.adjunction_counts(R, Y, X, BOX)
        assert a == b == c


def test_orthogonality_named_instance():
    u = lifting.boundary_generators(BOX.tsite, [G1])[0][1]
    v = boxcalc.simplex_inclusion(BOX, 1)
    f = boxcalc.p_star_map(presheaf.terminal_map(interval_nerve()))
    rep = boxcalc.orthogonality_equivalence_test(u, v, f, BOX)
    assert rep["agree"]
    assert rep["corner"] == rep["right_division"] == rep["left_division"]


def test_sampled_orthogonality_small():
    small = boxcalc.Box(2, max_width=1, max_level=2)
    rep = boxcalc.sampled_orthogonality(small, 5, seed=11)
    assert rep["samples"] == 5
    assert rep["all_agree"]
    # determinism: same seed, same triples
    again = boxcalc.sampled_orthogonality(small, 5, seed=11)
    assert [r["triple"] for r in rep["runs"]] == \
        [r["triple"] for r in again["runs"]]


def test_rezk_generator_labels_and_monos():
    gens = boxcalc.rezk_generators(BOX)
    labels = [label for label, _ in gens]
    assert any(l.startswith("segal:") for l in labels)
    assert "interval-to-point" in labels
    assert "disk-collapse:2" in labels
    for label, m in gens:
        if label.startswith("segal:"):
            assert m.is_injective_on(BOX.pobjs)


def test_resolution_check():
    rep = boxcalc.resolution_check(2, 2, max_width=2)
    assert rep["mono_clause"] is True
    assert rep["trivial_fibration"] == {0: True, 1: True, 2: True}
    assert rep["positive"] is True


def test_dict_simplicial_roundtrip_and_identities():
    doc = {
        "levels": {"0": ["a", "b"], "1": ["ia", "ib", "f"]},
        "faces": {"1": {"0": {"ia": "a", "ib": "b", "f": "b"},
                        "1": {"ia": "a", "ib": "b", "f": "a"}}},
        "degeneracies": {"0": {"0": {"a": "ia", "b": "ib"}}},
    }
    X = boxcalc.simplicial_from_json(json.dumps(doc))
    small = boxcalc.Box(2, max_width=1, max_level=1)
    assert boxcalc.simplicial_violations(X, small) == []
    assert X.evaluate(0) == ("a", "b")
    assert len(X.evaluate(1)) == 3


def test_dict_simplicial_detects_broken_identity():
    doc = {
        "levels": {"0": ["a", "b"], "1": ["ia", "ib", "f"]},
        "faces": {"1": {"0": {"ia": "a", "ib": "b", "f": "b"},
                        "1": {"ia": "b", "ib": "b", "f": "a"}}},
        "degeneracies": {"0": {"0": {"a": "ia", "b": "ib"}}},
    }
    X = boxcalc.simplicial_from_json(doc)
    small = boxcalc.Box(2, max_width=1, max_level=1)
    assert boxcalc.simplicial_violations(X, small) != []
