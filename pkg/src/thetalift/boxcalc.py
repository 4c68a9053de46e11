"""Two-variable calculus between table presheaves and simplicial sets.

The external product puts a table presheaf and a finite simplicial set side by
side as a presheaf on the product site; pushout products and the two division
constructions are its corner and adjoint forms.  Everything is bounded and
exhaustively enumerable, so the lifting equivalences relating the three can be
checked by brute force.
"""

from __future__ import annotations

import json
import random

from . import lifting, ncat, presheaf, sites, theta
from .presheaf import (BoundExhaustion, NerveTheta, Presheaf, PresheafMap,
                       Representable, SimplexBoundary, SimplexHorn,
                       TerminalPresheaf, _pair_dec, _pair_enc, compose_maps,
                       enumerate_maps, external_product, identity_map,
                       inclusion_map, nerve_map, pair_map, terminal_map)


class Box:
    """Bounded two-variable context: a table site, a simplex site, and their
    product, with the object lists used by every enumeration."""

    def __init__(self, n, max_dim=None, max_width=2, max_level=2):
        self.n = n
        self.tsite = sites.ThetaSite(n, max_dim=max_dim, max_width=max_width)
        self.dsite = sites.DeltaSite(max_level)
        self.psite = sites.ProductSite(self.tsite, self.dsite)
        self.tobjs = self.tsite.objects()
        self.dobjs = self.dsite.objects()
        self.pobjs = [(t, m) for t in self.tobjs for m in self.dobjs]
        self._rep_t, self._rep_d = {}, {}
        self._memo = {}

    def rep_t(self, table):
        got = self._rep_t.get(table)
        if got is None:
            got = self._rep_t[table] = Representable(self.tsite, table)
        return got

    def rep_d(self, m):
        got = self._rep_d.get(m)
        if got is None:
            got = self._rep_d[m] = Representable(self.dsite, m)
        return got

    def bounds_doc(self):
        return {"n": self.n, "max_dim": self.tsite.max_dim,
                "max_width": self.tsite.max_width,
                "max_level": self.dsite.max_level}


# -- simplicial sets -------------------------------------------------------


def simplex(box, m):
    return box.rep_d(m)


def simplex_inclusion(box, m):
    """The boundary inclusion of the m-simplex."""
    return inclusion_map(SimplexBoundary(box.dsite, m), box.rep_d(m),
                         label=f"simplex-boundary:{m}")


def horn_inclusion(box, m, spot):
    return inclusion_map(SimplexHorn(box.dsite, m, spot), box.rep_d(m),
                         label=f"horn:{m},{spot}")


def vertex_map(box, m, v):
    """The vertex Δ_0 -> Δ_m picking out ``v``."""
    alpha = sites.SimplexMap(0, m, (v,))

    def fn(a, enc):
        f = box.rep_d(0)._elts(a)[enc]
        return sites.simplex_compose(alpha, f).encoding

    return PresheafMap(box.rep_d(0), box.rep_d(m), fn, label=f"vertex:{v}")


class DictSimplicial(Presheaf):
    """A finite simplicial set given by explicit levels, faces, and
    degeneracies.  Arbitrary monotone maps act through the elementary
    factorization."""

    def __init__(self, levels, faces, degeneracies):
        super().__init__()
        self.levels = {int(k): list(v) for k, v in levels.items()}
        self.faces = {(int(m), int(i)): dict(t)
                      for m, row in faces.items()
                      for i, t in row.items()}
        self.degens = {(int(m), int(i)): dict(t)
                       for m, row in degeneracies.items()
                       for i, t in row.items()}
        self.top = max(self.levels) if self.levels else -1

    def _evaluate(self, m):
        if m > self.top:
            raise BoundExhaustion(f"simplicial data stops at level {self.top}")
        return tuple(self.levels.get(m, ()))

    def _act(self, alpha, x):
        a, b, vals = alpha.source, alpha.target, alpha.values
        if a == b and vals == tuple(range(a + 1)):
            return x
        # strip one face: a missing value i gives alpha = delta_i . alpha'
        missing = [i for i in range(b + 1) if i not in vals]
        if missing:
            i = missing[-1]
            x = self.faces[(b, i)][x]
            rest = sites.SimplexMap(a, b - 1,
                                    tuple(v - 1 if v > i else v for v in vals))
            return self._act(rest, x)
        # surjective: a repeated value at j gives alpha = alpha' . sigma_j
        j = next(k for k in range(a) if vals[k] == vals[k + 1])
        rest = sites.SimplexMap(a - 1, b, tuple(vals[:j] + vals[j + 1:]))
        return self.degens[(a - 1, j)][self._act(rest, x)]


def simplicial_from_json(doc):
    """Build a simplicial set from a level/face/degeneracy listing."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    return DictSimplicial(doc.get("levels", {}), doc.get("faces", {}),
                          doc.get("degeneracies", {}))


def simplicial_violations(X, box):
    """Simplicial identities, checked as presheaf functoriality in bounds."""
    return presheaf.functoriality_violations(X, box.dsite, box.dobjs)


# -- external product and friends -------------------------------------------


class PullbackP(Presheaf):
    """Pullback of a table presheaf along the simplex-forgetting projection."""

    def __init__(self, X):
        super().__init__()
        self.X = X

    def _evaluate(self, obj):
        return self.X.evaluate(obj[0])

    def _act(self, mor, elt):
        return self.X.act(mor[0], elt)

    def known_generators(self):
        return None


class RestrictZero(Presheaf):
    """A bipresheaf restricted to simplicial level zero."""

    def __init__(self, X, box):
        super().__init__()
        self.X = X
        self.zero = box.dsite.identity(0)

    def _evaluate(self, table):
        return self.X.evaluate((table, 0))

    def _act(self, mor, elt):
        return self.X.act((mor, self.zero), elt)


def box_product(X, Y):
    """External product of a table presheaf with a simplicial set."""
    return external_product(X, Y)


def box_product_map(u, v):
    src = external_product(u.source, v.source)
    tgt = external_product(u.target, v.target)
    return pair_map(u, v, src, tgt)


def p_star(X):
    return PullbackP(X)


def p_star_map(u, label=None):
    """Image of a table-presheaf map under the projection pullback."""
    return PresheafMap(PullbackP(u.source), PullbackP(u.target),
                       lambda obj, x: u.fn(obj[0], x),
                       label=label or f"p*({u.label})")


def pushout_product(u, v, box):
    """The corner map of ``u`` and ``v``: U□L ∪ V□K -> V□L, pointwise."""
    for side, m, objs in (("left", u, box.tobjs), ("right", v, box.dobjs)):
        if not m.is_injective_on(objs):
            raise ValueError(f"{side} leg of a pushout product must be mono")
    ambient = external_product(u.target, v.target)
    left_images = {}
    right_images = {}
    for t in box.tobjs:
        ut = set(u.at(t).values())
        for m in box.dobjs:
            left_images[(t, m)] = ut
    for m in box.dobjs:
        vm = set(v.at(m).values())
        for t in box.tobjs:
            right_images[(t, m)] = vm
    dom = lifting._PushoutProductDomain(ambient, left_images, right_images)
    return inclusion_map(dom, ambient, label=f"pp({u.label};{v.label})")


# -- divisions ---------------------------------------------------------------


class LeftDivision(Presheaf):
    """(V\\X)_m = maps from V □ Δ_m into the bipresheaf X."""

    def __init__(self, V, X, box):
        super().__init__()
        self.V = V
        self.X = X
        self.box = box
        self._domains = {}
        self._decode = {}

    def domain(self, m):
        got = self._domains.get(m)
        if got is None:
            got = self._domains[m] = external_product(self.V, self.box.rep_d(m))
        return got

    def maps_at(self, m):
        got = self._decode.get(m)
        if got is None:
            box = self.box
            got = {phi.encoding(box.pobjs): phi
                   for phi in enumerate_maps(self.domain(m), self.X,
                                             box.psite, box.pobjs)}
            self._decode[m] = got
        return got

    def _evaluate(self, m):
        return self.maps_at(m)

    def _act(self, alpha, enc):
        box = self.box
        phi = self.maps_at(alpha.target)[enc]
        shift = pair_map(identity_map(self.V), _delta_rep_map(box, alpha),
                         self.domain(alpha.source), self.domain(alpha.target))
        return compose_maps(phi, shift).encoding(box.pobjs)


class RightDivision(Presheaf):
    """(X/K)(T) = maps from rep(T) □ K into the bipresheaf X."""

    def __init__(self, X, K, box):
        super().__init__()
        self.X = X
        self.K = K
        self.box = box
        self._domains = {}
        self._decode = {}

    def domain(self, table):
        got = self._domains.get(table)
        if got is None:
            got = self._domains[table] = external_product(
                self.box.rep_t(table), self.K)
        return got

    def maps_at(self, table):
        got = self._decode.get(table)
        if got is None:
            box = self.box
            got = {phi.encoding(box.pobjs): phi
                   for phi in enumerate_maps(self.domain(table), self.X,
                                             box.psite, box.pobjs)}
            self._decode[table] = got
        return got

    def _evaluate(self, table):
        return self.maps_at(table)

    def _act(self, g, enc):
        box = self.box
        phi = self.maps_at(g.target)[enc]
        shift = pair_map(_theta_rep_map(box, g), identity_map(self.K),
                         self.domain(g.source), self.domain(g.target))
        return compose_maps(phi, shift).encoding(box.pobjs)


def _delta_rep_map(box, alpha):
    """Representable simplicial map induced by a monotone map."""
    def fn(a, enc):
        f = box.rep_d(alpha.source)._elts(a)[enc]
        return sites.simplex_compose(alpha, f).encoding
    return PresheafMap(box.rep_d(alpha.source), box.rep_d(alpha.target), fn,
                       label=f"y({alpha.encoding})")


def _theta_rep_map(box, g):
    def fn(a, enc):
        f = box.rep_t(g.source)._elts(a)[enc]
        return theta.compose_morphisms(g, f).encoding
    return PresheafMap(box.rep_t(g.source), box.rep_t(g.target), fn,
                       label="y(theta)")


class FiberProduct(Presheaf):
    """Pairs of elements with a common image under two comparison maps."""

    def __init__(self, p, q):
        super().__init__()
        self.p = p    # A -> C
        self.q = q    # B -> C

    def _evaluate(self, a):
        fibers = {}
        for y, c in self.q.at(a).items():
            fibers.setdefault(c, []).append(y)
        out = []
        for x, c in self.p.at(a).items():
            for y in fibers.get(c, ()):
                out.append(_pair_enc(x, y))
        return out

    def _act(self, mor, elt):
        x, y = _pair_dec(elt)
        return _pair_enc(self.p.source.act(mor, x),
                         self.q.source.act(mor, y))


def left_division(V, X, box):
    key = ("ld", id(V), id(X))
    got = box._memo.get(key)
    if got is None:
        got = box._memo[key] = LeftDivision(V, X, box)
    return got


def right_division(X, K, box):
    key = ("rd", id(X), id(K))
    got = box._memo.get(key)
    if got is None:
        got = box._memo[key] = RightDivision(X, K, box)
    return got


def left_division_map(u, f, box):
    """The comparison V\\X -> V\\Y ×_{U\\Y} U\\X induced by u and f."""
    key = ("ldm", id(u), id(f))
    got = box._memo.get(key)
    if got is not None:
        return got
    U, V = u.source, u.target
    X, Y = f.source, f.target
    VX = left_division(V, X, box)
    VY = left_division(V, Y, box)
    UX = left_division(U, X, box)
    UY = left_division(U, Y, box)

    def restrict(W, m, phi):
        # precompose with u □ Δ_m
        shift = pair_map(u, identity_map(box.rep_d(m)),
                         W.domain(m), phi_domain(m))
        return compose_maps(phi, shift).encoding(box.pobjs)

    def phi_domain(m):
        return VX.domain(m)

    def leg_vy_uy(m, enc):
        return restrict(UY, m, VY.maps_at(m)[enc])

    def leg_ux_uy(m, enc):
        return compose_maps(f, UX.maps_at(m)[enc]).encoding(box.pobjs)

    p = PresheafMap(VY, UY, leg_vy_uy, label="restrict-u")
    q = PresheafMap(UX, UY, leg_ux_uy, label="postcompose-f")
    fp = FiberProduct(p, q)

    def fn(m, enc):
        phi = VX.maps_at(m)[enc]
        first = compose_maps(f, phi).encoding(box.pobjs)
        second = restrict(UX, m, phi)
        return _pair_enc(first, second)

    got = PresheafMap(VX, fp, fn, label=f"<{u.label}\\{f.label}>")
    box._memo[key] = got
    return got


def right_division_map(f, v, box):
    """The comparison X/L -> Y/L ×_{Y/K} X/K induced by f and v."""
    key = ("rdm", id(f), id(v))
    got = box._memo.get(key)
    if got is not None:
        return got
    K, L = v.source, v.target
    X, Y = f.source, f.target
    XL = right_division(X, L, box)
    YL = right_division(Y, L, box)
    XK = right_division(X, K, box)
    YK = right_division(Y, K, box)

    def restrict(W, table, phi):
        shift = pair_map(identity_map(box.rep_t(table)), v,
                         W.domain(table), XL.domain(table))
        return compose_maps(phi, shift).encoding(box.pobjs)

    def leg_yl_yk(table, enc):
        phi = YL.maps_at(table)[enc]
        shift = pair_map(identity_map(box.rep_t(table)), v,
                         YK.domain(table), YL.domain(table))
        return compose_maps(phi, shift).encoding(box.pobjs)

    def leg_xk_yk(table, enc):
        return compose_maps(f, XK.maps_at(table)[enc]).encoding(box.pobjs)

    p = PresheafMap(YL, YK, leg_yl_yk, label="restrict-v")
    q = PresheafMap(XK, YK, leg_xk_yk, label="postcompose-f")
    fp = FiberProduct(p, q)

    def fn(table, enc):
        phi = XL.maps_at(table)[enc]
        first = compose_maps(f, phi).encoding(box.pobjs)
        shift = pair_map(identity_map(box.rep_t(table)), v,
                         XK.domain(table), XL.domain(table))
        second = compose_maps(phi, shift).encoding(box.pobjs)
        return _pair_enc(first, second)

    got = PresheafMap(XL, fp, fn, label=f"<{f.label}/{v.label}>")
    box._memo[key] = got
    return got


def adjunction_counts(X, Y, Z, box):
    """|maps(X□Y, Z)|, |maps(Y, X\\Z)|, |maps(X, Z/Y)| — must coincide."""
    n1 = sum(1 for _ in enumerate_maps(external_product(X, Y), Z,
                                       box.psite, box.pobjs))
    n2 = sum(1 for _ in enumerate_maps(Y, LeftDivision(X, Z, box),
                                       box.dsite, box.dobjs))
    n3 = sum(1 for _ in enumerate_maps(X, RightDivision(Z, Y, box),
                                       box.tsite, box.tobjs))
    return n1, n2, n3


# -- orthogonality -----------------------------------------------------------


def orthogonality_equivalence_test(u, v, f, box):
    """The three equivalent lifting verdicts for a bounded triple.

    Computes (u□'v) vs f over the product site, u vs <f/v> over tables, and
    v vs <u\\f> over simplices, and reports whether all three agree.
    """
    pp = pushout_product(u, v, box)
    r1 = lifting.has_rlp(f, [("corner", pp)], box.psite, box.pobjs)
    fv = right_division_map(f, v, box)
    r2 = lifting.has_rlp(fv, [("left", u)], box.tsite, box.tobjs)
    uf = left_division_map(u, f, box)
    r3 = lifting.has_rlp(uf, [("left", v)], box.dsite, box.dobjs)
    verdicts = (r1.positive, r2.positive, r3.positive)
    return {
        "corner": r1.positive,
        "right_division": r2.positive,
        "left_division": r3.positive,
        "agree": len(set(verdicts)) == 1,
        "bounds": box.bounds_doc(),
    }


def candidate_triples(box):
    """Labeled pools of bounded monos and right legs for sampling."""
    n = box.n
    us = []
    for t in box.tobjs:
        if t.width == 0:
            continue
        us.append((f"boundary:{t}", lifting.boundary_generators(
            box.tsite, [t])[0][1]))
        us.append((f"spine:{t}", lifting.spine_generators(box.tsite, [t])[0][1]))
    vs = [(f"simplex-boundary:{m}", simplex_inclusion(box, m))
          for m in box.dobjs if m >= 1]
    vs += [(f"horn:{m},{k}", horn_inclusion(box, m, k))
           for m in box.dobjs if m >= 1 for k in range(m + 1)]
    vs += [(f"vertex:{e}", vertex_map(box, 1, e)) for e in (0, 1)]
    J = ncat.raise_level(ncat.walking_iso(), n)
    NJ = NerveTheta(J, n)
    fs = [("interval-to-point", p_star_map(terminal_map(NJ)))]
    J1, j1, _, _ = ncat.build_interval(1)
    fs.append(("interval-collapse",
               p_star_map(nerve_map(ncat.raise_level_map(j1, n), n))))
    for k in range(2, n + 1):
        Jk, jk, _, _ = ncat.build_interval(k)
        mk = jk if k == n else ncat.raise_level_map(jk, n)
        fs.append((f"disk-collapse:{k}", p_star_map(nerve_map(mk, n))))
    fs.append(("interval-square-to-point",
               terminal_map(external_product(NJ, box.rep_d(1)))))
    fs.append(("point", identity_map(PullbackP(TerminalPresheaf()))))
    return us, vs, fs


def sampled_orthogonality(box, count, seed=0):
    """Run the three-way agreement test on randomly drawn bounded triples."""
    us, vs, fs = candidate_triples(box)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        lu, u = us[rng.randrange(len(us))]
        lv, v = vs[rng.randrange(len(vs))]
        lf, f = fs[rng.randrange(len(fs))]
        r = orthogonality_equivalence_test(u, v, f, box)
        r["triple"] = {"u": lu, "v": lv, "f": lf}
        out.append(r)
    return {
        "samples": len(out),
        "all_agree": all(r["agree"] for r in out),
        "runs": out,
        "bounds": box.bounds_doc(),
    }


# -- generator data and the groupoid resolution -------------------------------


def rezk_generators(box):
    """Projection images of the spine inclusions, the interval collapse to the
    point, and the higher disk collapses, with labels saying which is which."""
    n = box.n
    out = [(f"segal:{label}", p_star_map(m, label=f"p*({label})"))
           for label, m in lifting.spine_generators(box.tsite, box.tobjs)]
    NJ = lifting.interval_nerve(n)
    out.append(("interval-to-point", p_star_map(terminal_map(NJ))))
    for k in range(2, n + 1):
        Jk, jk, _, _ = ncat.build_interval(k)
        mk = jk if k == n else ncat.raise_level_map(jk, n)
        out.append((f"disk-collapse:{k}", p_star_map(nerve_map(mk, n))))
    return out


def resolution_check(n, k_max, max_dim=None, max_width=2):
    """Two finite shadows of the groupoid resolution: the two endpoints embed
    disjointly into the interval nerve, and the contractible-groupoid nerves
    collapse to the point by bounded trivial fibrations."""
    site = sites.ThetaSite(n, max_dim=max_dim, max_width=max_width)
    objs = site.objects()
    NJ = lifting.interval_nerve(n)
    N0 = NerveTheta(ncat.terminal(n), n)
    two = presheaf.DisjointUnion(N0, N0)

    def fn(table, elt):
        tag, _ = _pair_dec(elt)
        return lifting._constant_functor_enc(table, n, tag)

    endpoints = PresheafMap(two, NJ, fn, label="two-endpoints")
    mono = endpoints.is_injective_on(objs)
    fib = {}
    for k in range(k_max + 1):
        Gk = ncat.simply_connected_groupoid(k, n)
        rep = lifting.check_trivial_fibration(
            terminal_map(NerveTheta(Gk, n)), n, max_dim=max_dim,
            max_width=max_width)
        fib[k] = rep.positive
    return {
        "mono_clause": mono,
        "trivial_fibration": fib,
        "positive": mono and all(fib.values()),
        "bounds": {"n": n, "max_dim": site.max_dim,
                   "max_width": site.max_width},
    }
