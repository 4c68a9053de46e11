"""Acceptance battery: twelve bounded verifications, one verdict line each.

Every criterion prints ``PASS``/``FAIL`` with its number and wall-clock time,
and enforces its own time budget.  Run with ``pytest -s`` to see the lines as
they are produced.
"""

import itertools
import time
from math import comb

from thetalift import boxcalc, lifting, ncat, presheaf, theta
from thetalift.sites import ThetaSite


def _verdict(num, desc, ok, elapsed, limit):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {desc} " \
        f"({elapsed:.1f}s, limit {limit}s)"
    print(line)
    assert ok, line
    assert elapsed < limit, line


def test_criterion_01_width_one_homs_match_monotone_maps():
    t0 = time.monotonic()
    ok = True
    for m in range(5):
        for k in range(5):
            brute = sum(
                1 for f in itertools.product(range(k + 1), repeat=m + 1)
                if all(f[i] <= f[i + 1] for i in range(m)))
            got = len(theta.hom(theta.delta_table(m), theta.delta_table(k), 1))
            ok = ok and got == brute == comb(m + k + 1, m + 1)
    _verdict(1, "width-one hom sets are the monotone maps (m,k <= 4)",
             ok, time.monotonic() - t0, 10)


def test_criterion_02_unique_split_epi_mono_factorization():
    t0 = time.monotonic()
    objs = theta.enumerate_objects(2, 2)
    ok, seen = True, 0
    for s in objs:
        for t in objs:
            for f in theta.hom(s, t, 2):
                e, mono = theta.ez_factorize(f)  # raises unless unique
                ok = ok and theta.is_split_epi(e) and theta.is_mono(mono) \
                    and theta.compose_morphisms(mono, e) == f
                seen += 1
    ok = ok and seen > 500
    _verdict(2, f"split epi/mono factorization unique on {seen} morphisms",
             ok, time.monotonic() - t0, 60)


def test_criterion_03_spine_restriction_bijective_for_strict_nerves():
    t0 = time.monotonic()
    cats = [("J2", ncat.build_interval(2)[0]),
            ("free-2-globe", ncat.globe(2, 2)),
            ("J", ncat.raise_level(ncat.walking_iso(), 2))]
    ok = True
    for _, cat in cats:
        for t in theta.enumerate_objects(2, 3):
            ok = ok and presheaf.segal_check(cat, t, 2,
                                             max_width=3)["bijective"]
    _verdict(3, "spine restriction bijective, three nerves, width <= 3",
             ok, time.monotonic() - t0, 300)


def test_criterion_04_boundary_agrees_with_representable_on_points():
    t0 = time.monotonic()
    site = ThetaSite(2, max_width=2)
    ok = True
    for t in site.objects():
        if t == theta.point():
            continue
        B = presheaf.BoundaryTheta(site, t)
        R = presheaf.Representable(site, t)
        ok = ok and len(B.evaluate(theta.point())) == \
            len(R.evaluate(theta.point()))
    _verdict(4, "boundaries keep every point of the representable",
             ok, time.monotonic() - t0, 30)


def test_criterion_05_collapse_counterexample():
    t0 = time.monotonic()
    rep = lifting.verify_counterexample(2, 2)
    _verdict(5, "parallel-pair collapse: no boundary lift, iso-fibration, "
             "interval-corner RLP", rep["verified"],
             time.monotonic() - t0, 120)


def test_criterion_06_contractible_nerves_are_trivial_fibrations():
    t0 = time.monotonic()
    NJ = lifting.interval_nerve(2)
    r1 = lifting.check_trivial_fibration(presheaf.terminal_map(NJ), 2)
    G2 = ncat.simply_connected_groupoid(2, 2)
    r2 = lifting.check_trivial_fibration(
        presheaf.terminal_map(presheaf.NerveTheta(G2, 2)), 2)
    _verdict(6, "contractible-groupoid nerves collapse by trivial fibrations",
             r1.positive and r2.positive, time.monotonic() - t0, 120)


def test_criterion_07_interval_hom_evaluation_fully_faithful():
    t0 = time.monotonic()
    J = ncat.raise_level(ncat.walking_iso(), 2)
    ok = True
    for cat in [ncat.globe(1, 2), ncat.build_interval(2)[0]]:
        H = ncat.internal_hom(J, cat)
        for obj in J.cells[0]:
            ok = ok and ncat.is_fully_faithful(ncat.internal_hom_eval(H, obj))
    _verdict(7, "evaluation of the interval hom is fully faithful",
             ok, time.monotonic() - t0, 60)


def test_criterion_08_bo_ff_squares_have_unique_fillers():
    t0 = time.monotonic()
    term, D1, J = ncat.terminal(1), ncat.globe(1, 1), ncat.walking_iso()

    def bo(u):
        vals = set(u.maps[0].values())
        return len(vals) == len(u.source.cells[0]) \
            and vals == set(u.target.cells[0])

    lefts = [u for u in ncat.enumerate_functors(D1, J)
             if bo(u) and not ncat.is_fully_faithful(u)]
    rights = [v for C, D in [(term, D1), (term, J), (J, J)]
              for v in ncat.enumerate_functors(C, D)
              if ncat.is_fully_faithful(v)]
    ok, checked = True, 0
    for u in lefts:
        for v in rights:
            for top in ncat.enumerate_functors(u.source, v.source):
                vt = ncat.compose(v, top)
                for bottom in ncat.enumerate_functors(u.target, v.target):
                    if ncat.compose(bottom, u).encoding != vt.encoding:
                        continue
                    verdict, _ = ncat.unique_lift(u, v, top, bottom)
                    ok = ok and verdict == "unique"
                    checked += 1
    ok = ok and checked >= 20
    _verdict(8, f"unique fillers for {checked} squares "
             "(objectwise-bijective vs fully-faithful)",
             ok, time.monotonic() - t0, 120)


def test_criterion_09_orthogonality_three_ways():
    t0 = time.monotonic()
    small = boxcalc.Box(2, max_width=1, max_level=2)
    rep = boxcalc.sampled_orthogonality(small, 50, seed=0)
    named_box = boxcalc.Box(2, max_width=2, max_level=2)
    u = lifting.boundary_generators(named_box.tsite,
                                    [theta.globe_table(1)])[0][1]
    v = boxcalc.simplex_inclusion(named_box, 1)
    f = boxcalc.p_star_map(presheaf.terminal_map(lifting.interval_nerve(2)))
    named = boxcalc.orthogonality_equivalence_test(u, v, f, named_box)
    ok = rep["all_agree"] and rep["samples"] == 50 and named["agree"]
    _verdict(9, "corner / right-division / left-division verdicts agree "
             "(50 samples + named instance)", ok, time.monotonic() - t0, 300)


def test_criterion_10_interval_corner_detects_nonfibrancy():
    t0 = time.monotonic()
    rep = lifting.check_not_2qcat(max_width=2)
    _verdict(10, "interval corner square with no filler over the point",
             rep["confirmed_not_fibrant"], time.monotonic() - t0, 120)


def test_criterion_11_groupoid_resolution_shadows():
    t0 = time.monotonic()
    rep = boxcalc.resolution_check(2, 2, max_width=2)
    ok = rep["mono_clause"] and rep["positive"] \
        and rep["trivial_fibration"] == {0: True, 1: True, 2: True}
    _verdict(11, "endpoint embedding monic and groupoid nerves contractible",
             ok, time.monotonic() - t0, 120)


def test_criterion_12_counting_goldens():
    t0 = time.monotonic()
    ok = len(theta.enumerate_objects(2, 2)) == 8
    ok = ok and theta.free_ncat(theta.globe_table(2), 2).cell_counts() \
        == (2, 4, 5)
    J2 = ncat.build_interval(2)[0]
    ok = ok and J2.cell_counts() == (2, 4, 6)
    N = presheaf.NerveTheta(J2, 2)
    ok = ok and len(N.evaluate(theta.globe_table(1))) == 4
    _verdict(12, "frozen object, cell, and nerve counts",
             ok, time.monotonic() - t0, 10)
