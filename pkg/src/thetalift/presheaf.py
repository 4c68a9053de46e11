"""Evaluable presheaves on a finite site and maps between them.

Presheaves here are *bounded* computational objects: ``evaluate`` lists the
element encodings over one indexing object, ``act`` restricts an element
along a morphism.  Map enumeration is generator-driven: a finitely generated
presheaf is determined by images of its generating elements, and every
bounded element is decomposed through a generator once and for all, turning
naturality into per-element equality constraints.  Verdicts produced from
these enumerations are exact for the objects supplied and are always
reported together with those bounds.
"""

from __future__ import annotations

import json
from functools import lru_cache

from . import ncat, sites, theta


class BoundExhaustion(Exception):
    """An enumeration left the supplied bounds; enlarging them may help."""


def _pair_enc(x, y):
    return json.dumps([x, y], separators=(",", ":"))


def _pair_dec(enc):
    x, y = json.loads(enc)
    return x, y


class Presheaf:
    """Base class: cached evaluation and restriction."""

    def __init__(self):
        self._eval_cache = {}
        self._act_cache = {}
        self._gens_cache = {}
        self._decomp_cache = {}
        self._nondeg_cache = {}

    def evaluate(self, obj):
        got = self._eval_cache.get(obj)
        if got is None:
            got = tuple(sorted(self._evaluate(obj)))
            self._eval_cache[obj] = got
        return got

    def act(self, mor, elt):
        key = (self._mor_key(mor), elt)
        got = self._act_cache.get(key)
        if got is None:
            got = self._act(mor, elt)
            self._act_cache[key] = got
        return got

    @staticmethod
    def _mor_key(mor):
        if isinstance(mor, tuple):
            return (Presheaf._mor_key(mor[0]), Presheaf._mor_key(mor[1]))
        key = getattr(mor, "_mkey", None)
        if key is None:
            key = (str(getattr(mor, "source", "")),
                   str(getattr(mor, "target", "")), mor.encoding)
            try:
                mor._mkey = key
            except AttributeError:
                object.__setattr__(mor, "_mkey", key)
        return key

    def known_generators(self):
        """Optional certified generating elements: list of (obj, elt)."""
        return None


class TerminalPresheaf(Presheaf):
    def _evaluate(self, obj):
        return ("*",)

    def _act(self, mor, elt):
        return "*"


class EmptyPresheaf(Presheaf):
    def _evaluate(self, obj):
        return ()

    def _act(self, mor, elt):
        raise KeyError("empty presheaf has no elements")


class Representable(Presheaf):
    """The presheaf of morphisms into a fixed object of the site."""

    def __init__(self, site, obj):
        super().__init__()
        self.site = site
        self.obj = obj
        self._decode = {}

    def _elts(self, a):
        table = self._decode.get(a)
        if table is None:
            table = {self._mor_enc(f): f for f in self.site.hom(a, self.obj)}
            self._decode[a] = table
        return table

    @staticmethod
    def _mor_enc(f):
        if isinstance(f, tuple):
            return _pair_enc(f[0].encoding, f[1].encoding)
        return f.encoding

    def _evaluate(self, a):
        return self._elts(a)

    def _act(self, mor, elt):
        a = mor.source if not isinstance(mor, tuple) else (mor[0].source, mor[1].source)
        b = mor.target if not isinstance(mor, tuple) else (mor[0].target, mor[1].target)
        f = self._elts(b)[elt]
        return self._mor_enc(self.site.compose(f, mor))

    def known_generators(self):
        return [(self.obj, self._mor_enc(self.site.identity(self.obj)))]


class BoundaryTheta(Representable):
    """Morphisms into a table that factor through a proper monomorphism.

    Membership uses the split-epi/mono factorization: a table morphism misses
    the boundary exactly when it is a split epimorphism.
    """

    def __init__(self, site, obj):
        super().__init__(site, obj)

    def _evaluate(self, a):
        return {enc: f for enc, f in self._elts(a).items()
                if not self.site.is_split_epi(f)}

    def known_generators(self):
        return [(m.source, m.encoding)
                for m in theta.maximal_proper_monos(self.obj, self.site.n)]


class SpineTheta(Representable):
    """The union of the globe legs inside a representable table presheaf."""

    def __init__(self, site, obj):
        super().__init__(site, obj)
        self.legs, self.overlaps = theta.spine_inclusions(obj, site.n)

    def _evaluate(self, a):
        keep = set()
        for leg in self.legs:
            for h in self.site.hom(a, leg.source):
                keep.add(self.site.compose(leg, h).encoding)
        return {enc: f for enc, f in self._elts(a).items() if enc in keep}

    def known_generators(self):
        return [(leg.source, leg.encoding) for leg in self.legs]


class NerveTheta(Presheaf):
    """Table presheaf of strict n-functors out of the free categories."""

    def __init__(self, cat, n):
        super().__init__()
        if cat.level != n:
            raise ncat.NCatError("nerve requires a category at the ambient level")
        self.cat = cat
        self.n = n
        self._decode = {}

    def _functors(self, table):
        got = self._decode.get(table)
        if got is None:
            got = {F.encoding: F for F in
                   ncat.enumerate_functors(theta.free_ncat(table, self.n), self.cat)}
            self._decode[table] = got
        return got

    def _evaluate(self, table):
        return self._functors(table)

    def _act(self, mor, elt):
        F = self._functors(mor.target)[elt]
        return ncat.compose(F, mor.functor).encoding


def nerve_map(u, n):
    """The presheaf map of nerves induced by postcomposition with ``u``."""
    X, Y = NerveTheta(u.source, n), NerveTheta(u.target, n)

    def fn(table, elt):
        return ncat.compose(u, X._functors(table)[elt]).encoding

    return PresheafMap(X, Y, fn, label="nerve-postcompose")


@lru_cache(maxsize=None)
def poset_category(m):
    """The finite ordinal [m] as a level-1 category."""
    arrows = [(a, b) for a in range(m + 1) for b in range(a, m + 1)]
    keys = [list(range(m + 1)), arrows]
    src_k = [{(a, b): a for (a, b) in arrows}]
    tgt_k = [{(a, b): b for (a, b) in arrows}]
    ident_k = [{a: (a, a) for a in range(m + 1)}]
    comp = {(0, 1): {((b, c), (a, b2)): (a, c)
                     for (b, c) in arrows for (a, b2) in arrows if b2 == b}}
    return ncat._from_keys(1, keys, src_k, tgt_k, ident_k, comp)


@lru_cache(maxsize=None)
def poset_functor(alpha):
    """The functor [l] -> [m] induced by a monotone map."""
    P, Q = poset_category(alpha.source), poset_category(alpha.target)
    m0 = {c: ncat._key_id(Q, 0, alpha(ncat._id_key(P, 0, c))) for c in P.cells[0]}
    m1 = {}
    for c in P.cells[1]:
        a, b = ncat._id_key(P, 1, c)
        m1[c] = ncat._key_id(Q, 1, (alpha(a), alpha(b)))
    return ncat.NFunctor(P, Q, [m0, m1])


class NerveDelta(Presheaf):
    """Classical simplicial nerve of a level-1 category."""

    def __init__(self, cat):
        super().__init__()
        if cat.level != 1:
            raise ncat.NCatError("simplicial nerve expects a level-1 category")
        self.cat = cat
        self._decode = {}

    def _functors(self, m):
        got = self._decode.get(m)
        if got is None:
            got = {F.encoding: F for F in
                   ncat.enumerate_functors(poset_category(m), self.cat)}
            self._decode[m] = got
        return got

    def _evaluate(self, m):
        return self._functors(m)

    def _act(self, alpha, elt):
        F = self._functors(alpha.target)[elt]
        return ncat.compose(F, poset_functor(alpha)).encoding


class SimplexBoundary(Representable):
    """Non-surjective monotone maps into [m]."""

    def _evaluate(self, a):
        return {enc: f for enc, f in self._elts(a).items()
                if set(f.values) != set(range(self.obj + 1))}

    def known_generators(self):
        m = self.obj
        gens = []
        for skip in range(m + 1):
            face = sites.SimplexMap(m - 1, m, tuple(v for v in range(m + 1) if v != skip))
            gens.append((m - 1, face.encoding))
        return gens


class SimplexHorn(Representable):
    """Monotone maps into [m] missing some vertex other than ``spot``."""

    def __init__(self, site, m, spot):
        super().__init__(site, m)
        self.spot = spot

    def _evaluate(self, a):
        keep = {}
        for enc, f in self._elts(a).items():
            missing = set(range(self.obj + 1)) - set(f.values)
            if missing - {self.spot}:
                keep[enc] = f
        return keep

    def known_generators(self):
        m = self.obj
        gens = []
        for skip in range(m + 1):
            if skip == self.spot:
                continue
            face = sites.SimplexMap(m - 1, m, tuple(v for v in range(m + 1) if v != skip))
            gens.append((m - 1, face.encoding))
        return gens


class PairPresheaf(Presheaf):
    """Product of two presheaves; ``split`` maps a morphism to its halves."""

    def __init__(self, X, Y, split=None):
        super().__init__()
        self.parts = (X, Y)
        self.split = split or (lambda mor: (mor, mor))
        self.split_obj = (lambda obj: (obj, obj)) if split is None else (lambda obj: obj)

    def _evaluate(self, obj):
        a, b = self.split_obj(obj)
        X, Y = self.parts
        return tuple(_pair_enc(x, y) for x in X.evaluate(a) for y in Y.evaluate(b))

    def _act(self, mor, elt):
        x, y = _pair_dec(elt)
        mx, my = self.split(mor)
        return _pair_enc(self.parts[0].act(mx, x), self.parts[1].act(my, y))


def product_presheaf(X, Y):
    """Pointwise product of two presheaves on the same site."""
    return PairPresheaf(X, Y)


def external_product(X, Y):
    """Box product: a table presheaf times a simplicial presheaf."""
    return PairPresheaf(X, Y, split=lambda mor: (mor[0], mor[1]))


class DisjointUnion(Presheaf):
    def __init__(self, X, Y):
        super().__init__()
        self.parts = (X, Y)

    def _evaluate(self, obj):
        return tuple(_pair_enc(0, x) for x in self.parts[0].evaluate(obj)) + \
            tuple(_pair_enc(1, y) for y in self.parts[1].evaluate(obj))

    def _act(self, mor, elt):
        tag, x = _pair_dec(elt)
        return _pair_enc(tag, self.parts[tag].act(mor, x))


class GeneratedSub(Presheaf):
    """The subpresheaf of ``ambient`` generated by explicit elements."""

    def __init__(self, site, ambient, generators):
        super().__init__()
        self.site = site
        self.ambient = ambient
        self.generators = list(generators)

    def _evaluate(self, obj):
        out = set()
        for b, x in self.generators:
            for g in self.site.hom(obj, b):
                out.add(self.ambient.act(g, x))
        return out

    def _act(self, mor, elt):
        return self.ambient.act(mor, elt)

    def known_generators(self):
        return list(self.generators)


class UnionSub(Presheaf):
    """Union of subpresheaves of a common ambient presheaf."""

    def __init__(self, ambient, parts):
        super().__init__()
        self.ambient = ambient
        self.subparts = list(parts)

    def _evaluate(self, obj):
        out = set()
        for p in self.subparts:
            out.update(p.evaluate(obj))
        return out

    def _act(self, mor, elt):
        return self.ambient.act(mor, elt)

    def known_generators(self):
        gens = []
        for p in self.subparts:
            g = p.known_generators()
            if g is None:
                return None
            gens.extend(g)
        return gens


def union_in(ambient, parts):
    return UnionSub(ambient, parts)


def subpresheaf(site, ambient, elements):
    return GeneratedSub(site, ambient, elements)


class PullbackTruncation(Presheaf):
    """Table presheaf obtained from a simplicial one via intelligent truncation.

    The 1-truncation of the free category on a table is the finite ordinal on
    its objects, so a table is sent to its object count minus one and a table
    morphism to its monotone object map.
    """

    def __init__(self, X, n):
        super().__init__()
        self.X = X
        self.n = n

    def _level(self, table):
        return len(theta.free_ncat(table, self.n).cells[0]) - 1

    def _evaluate(self, table):
        return self.X.evaluate(self._level(table))

    def _act(self, mor, elt):
        ls, lt = self._level(mor.source), self._level(mor.target)
        alpha = sites.SimplexMap(
            ls, lt, tuple(mor.functor.maps[0][i] for i in range(ls + 1)))
        return self.X.act(alpha, elt)


def pullback_t(X, n):
    return PullbackTruncation(X, n)


# -- maps ---------------------------------------------------------------------


class PresheafMap:
    """A natural map of presheaves, stored pointwise."""

    __slots__ = ("source", "target", "fn", "label", "_at")

    def __init__(self, source, target, fn, label=""):
        self.source = source
        self.target = target
        self.fn = fn
        self.label = label
        self._at = {}

    def at(self, obj):
        got = self._at.get(obj)
        if got is None:
            got = {x: self.fn(obj, x) for x in self.source.evaluate(obj)}
            self._at[obj] = got
        return got

    def encoding(self, objs):
        return json.dumps([[str(a), sorted(self.at(a).items())] for a in objs],
                          separators=(",", ":"))

    def equal_on(self, other, objs):
        return all(self.at(a) == other.at(a) for a in objs)

    def is_injective_on(self, objs):
        return all(len(set(self.at(a).values())) == len(self.at(a)) for a in objs)

    def is_bijective_on(self, objs):
        return all(len(set(self.at(a).values())) == len(self.at(a))
                   and set(self.at(a).values()) == set(self.target.evaluate(a))
                   for a in objs)


def compose_maps(g, f):
    return PresheafMap(f.source, g.target,
                       lambda obj, x: g.fn(obj, f.fn(obj, x)),
                       label=f"{g.label}.{f.label}")


def identity_map(X, label="id"):
    return PresheafMap(X, X, lambda obj, x: x, label=label)


def inclusion_map(sub, ambient, label="incl"):
    return PresheafMap(sub, ambient, lambda obj, x: x, label=label)


def terminal_map(X):
    return PresheafMap(X, TerminalPresheaf(), lambda obj, x: "*", label="!")


def pair_map(f, g, source, target):
    """Componentwise map between pair presheaves."""
    def fn(obj, elt):
        x, y = _pair_dec(elt)
        a, b = source.split_obj(obj)
        return _pair_enc(f.fn(a, x), g.fn(b, y))
    return PresheafMap(source, target, fn, label=f"({f.label})x({g.label})")


def yoneda_map(site, rep, X, elt_at_obj):
    """The map rep(c) -> X classified by an element of X(c)."""
    def fn(obj, enc):
        return X.act(rep._elts(obj)[enc], elt_at_obj)
    return PresheafMap(rep, X, fn, label="yoneda")


# -- enumeration engine --------------------------------------------------------


def _objs_key(objs):
    return tuple(str(a) for a in objs)


def nondegenerate_cells(X, site, objs):
    """Elements not obtained by restriction along a proper split epimorphism."""
    key = _objs_key(objs)
    cached = X._nondeg_cache.get(key)
    if cached is not None:
        return cached
    out = []
    for a in objs:
        degenerate = set()
        ident = site.identity(a)
        ident_key = Presheaf._mor_key(ident)
        for b in objs:
            for e in site.hom(a, b):
                if Presheaf._mor_key(e) == ident_key:
                    continue
                if not site.is_split_epi(e):
                    continue
                for y in X.evaluate(b):
                    degenerate.add(X.act(e, y))
        out.extend((a, x) for x in X.evaluate(a) if x not in degenerate)
    X._nondeg_cache[key] = out
    return out


def generators_for(V, site, objs):
    key = _objs_key(objs)
    cached = V._gens_cache.get(key)
    if cached is not None:
        return cached
    gens = V.known_generators()
    if gens is None:
        gens = nondegenerate_cells(V, site, objs)
    else:
        objset = set(map(str, objs))
        for b, _ in gens:
            if str(b) not in objset:
                raise BoundExhaustion(
                    f"generator object {b} outside the supplied bounds")
    seen, out = set(), []
    for b, x in gens:
        if (str(b), x) not in seen:
            seen.add((str(b), x))
            out.append((b, x))
    out.sort(key=lambda bx: (str(bx[0]), bx[1]))
    V._gens_cache[key] = out
    return out


def element_decompositions(V, gens, site, objs):
    """For each bounded element, the ways it restricts from a generator."""
    key = _objs_key(objs)
    cached = V._decomp_cache.get(key)
    if cached is not None:
        return cached
    table = {}
    for a in objs:
        decomp = {x: [] for x in V.evaluate(a)}
        for i, (b, x) in enumerate(gens):
            for g in site.hom(a, b):
                val = V.act(g, x)
                if val in decomp:
                    decomp[val].append((i, g))
        for x, ds in decomp.items():
            if not ds:
                raise BoundExhaustion(
                    f"element {x!r} at {site.obj_str(a)} not generated within bounds")
        table[a] = decomp
    V._decomp_cache[key] = table
    return table


def enumerate_maps(V, X, site, objs, gen_candidates=None, constraints=None):
    """Yield all natural maps V -> X over the given objects, in canonical order.

    ``gen_candidates(i, gen)`` may prefilter images of the i-th generator;
    ``constraints`` maps ``(obj, element)`` to a required image.  Maps are
    produced as explicit pointwise dictionaries.
    """
    gens = generators_for(V, site, objs)
    decomps = element_decompositions(V, gens, site, objs)

    cand = []
    for i, (b, x) in enumerate(gens):
        pool = list(X.evaluate(b))
        if gen_candidates is not None:
            pool = [y for y in pool if gen_candidates(i, (b, x), y)]
        cand.append(pool)

    nvars = len(gens)

    # consistency groups: elements with several decompositions, or with a
    # required image.  Member action tables are precomputed over the candidate
    # pools so the search below never touches the site.
    g_vars, g_val = [], []
    vg = [[] for _ in range(nvars)]             # var -> [(group, its tables)]
    domains = [set(range(len(pool))) for pool in cand]
    for a in objs:
        for x, ds in decomps[a].items():
            req = None if constraints is None else constraints.get((a, x))
            if len(ds) <= 1 and req is None:
                continue
            byvar = {}
            for i, g in ds:
                byvar.setdefault(i, []).append([X.act(g, y) for y in cand[i]])
            if req is not None:
                # required images prune member domains up front
                for i, tabs in byvar.items():
                    domains[i] = {k for k in domains[i]
                                  if all(t[k] == req for t in tabs)}
            gi = len(g_vars)
            g_vars.append(sorted(byvar.items()))
            g_val.append(req)
            for i, tabs in byvar.items():
                vg[i].append((gi, tabs))
    if any(not d for d in domains):
        return

    nmaps = [0]
    assign = [None] * nvars

    def build():
        comp = {}
        for a in objs:
            row = {}
            for x, ds in decomps[a].items():
                i, g = ds[0]
                row[x] = X.act(g, cand[i][assign[i]])
            comp[a] = row
        return PresheafMap(V, X, lambda obj, x: comp[obj][x],
                           label=f"enumerated-{nmaps[0]}")

    free = bytearray([1]) * nvars
    nfree = [nvars]
    ones = []                       # vars whose domain was pinned to one value

    def search():
        if not nfree[0]:
            nmaps[0] += 1
            yield build()
            return
        # prefer a pinned variable; else smallest current domain
        j = -1
        while ones:
            v = ones.pop()
            if free[v] and len(domains[v]) == 1:
                j = v
                break
        if j < 0:
            best = 1 << 30
            for v in range(nvars):
                if not free[v]:
                    continue
                l = len(domains[v])
                if l < best:
                    best, j = l, v
                    if l == 1:
                        break
        free[j] = 0
        nfree[0] -= 1
        vgj = vg[j]
        for yk in sorted(domains[j]):
            assign[j] = yk
            vtrail, dtrail = [], []
            ok = True
            for gi, jtabs in vgj:
                w = jtabs[0][yk]
                for t in jtabs[1:]:
                    if t[yk] != w:
                        ok = False
                        break
                if not ok:
                    break
                val = g_val[gi]
                if val is not None:
                    if w != val:
                        ok = False
                        break
                    continue
                # first member assigned fixes the element; every other
                # member's domain narrows to the fibre of that value
                g_val[gi] = w
                vtrail.append(gi)
                for i, tabs in g_vars[gi]:
                    if free[i]:
                        di = domains[i]
                        t0 = tabs[0]
                        if len(tabs) == 1:
                            removed = {k for k in di if t0[k] != w}
                        else:
                            removed = {k for k in di
                                       if any(t[k] != w for t in tabs)}
                        if removed:
                            di -= removed
                            dtrail.append((i, removed))
                            if not di:
                                ok = False
                                break
                            if len(di) == 1:
                                ones.append(i)
                if not ok:
                    break
            if ok:
                yield from search()
            for i, removed in dtrail:
                domains[i] |= removed
            for gi in vtrail:
                g_val[gi] = None
        assign[j] = None
        free[j] = 1
        nfree[0] += 1

    yield from search()


def count_elements(X, site, objs):
    return {a: len(X.evaluate(a)) for a in objs}


def functoriality_violations(X, site, objs):
    """Identity and composition failures of a presheaf, within bounds."""
    bad = []
    for a in objs:
        ident = site.identity(a)
        for x in X.evaluate(a):
            if X.act(ident, x) != x:
                bad.append(("identity", site.obj_str(a), x))
    for a in objs:
        for b in objs:
            for f in site.hom(a, b):
                for c in objs:
                    for g in site.hom(b, c):
                        gf = site.compose(g, f)
                        for x in X.evaluate(c):
                            if X.act(gf, x) != X.act(f, X.act(g, x)):
                                bad.append(("composite", site.obj_str(a),
                                            site.obj_str(c), x))
    return bad


def presheaf_to_json(X, site, objs, bounds=None):
    doc = {
        "bounds": bounds or {},
        "objects": [{"object": site.obj_str(a),
                     "elements": list(X.evaluate(a))} for a in objs],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- representable / nerve comparisons -----------------------------------------


def segal_check(cat, table, n, max_width=None):
    """Restriction along the spine: functors out of the free category versus
    compatible families on the globe legs.  Returns a verdict dict."""
    site = sites.ThetaSite(n, max_width=max_width or max(2, table.width))
    objs = site.objects()
    if table not in objs:
        raise BoundExhaustion("table outside bounds for spine comparison")
    X = NerveTheta(cat, n)
    spine = SpineTheta(site, table)
    spine_maps = list(enumerate_maps(spine, X, site, objs))
    keys = {m.encoding(objs) for m in spine_maps}
    restrictions = set()
    injective = True
    for F in X.evaluate(table):
        r = yoneda_map(site, Representable(site, table), X, F)
        rk = compose_maps(r, inclusion_map(spine, Representable(site, table)))
        enc = PresheafMap(spine, X, rk.fn).encoding(objs)
        if enc in restrictions:
            injective = False
        restrictions.add(enc)
    return {
        "table": str(table),
        "functors": len(X.evaluate(table)),
        "spine_maps": len(spine_maps),
        "bijective": injective and restrictions == keys,
    }
