"""Finite strict n-categories and strict n-functors.

Cells are opaque integer ids, one id space per dimension.  A category of
level ``n`` stores:

* ``cells[k]`` -- sorted tuple of k-cell ids, ``0 <= k <= n``;
* ``src[k]``/``tgt[k]`` -- boundary maps ``cells[k] -> cells[k-1]`` for k >= 1;
* ``ident[k]`` -- identity maps ``cells[k] -> cells[k+1]`` for k < n;
* ``comp[(j, k)]`` -- partial composition of k-cells along dimension j < k,
  a dict ``(g, f) -> g *_j f`` defined exactly for j-composable pairs.

All structure is treated as immutable after construction.  ``validate``
checks the full axiom list (globularity, units, associativity, interchange)
and returns human-readable violation strings instead of raising, so corrupt
inputs can be reported.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache


class NCatError(Exception):
    pass


class FiniteNCat:
    """A finite strict n-category given by explicit tables."""

    __slots__ = ("level", "cells", "src", "tgt", "ident", "comp", "gens", "meta")

    def __init__(self, level, cells, src, tgt, ident, comp, gens=None, meta=None):
        if level < 0:
            raise NCatError("level must be >= 0")
        self.level = level
        self.cells = tuple(tuple(sorted(cs)) for cs in cells)
        if len(self.cells) != level + 1:
            raise NCatError("need exactly level+1 cell tables")
        self.src = tuple(dict(d) for d in src)
        self.tgt = tuple(dict(d) for d in tgt)
        self.ident = tuple(dict(d) for d in ident)
        self.comp = {jk: dict(table) for jk, table in comp.items()}
        # gens: optional per-dimension frozensets of generating cells; set by
        # the free constructions, enables fast functor enumeration.
        self.gens = None if gens is None else tuple(frozenset(g) for g in gens)
        self.meta = meta or {}

    # -- basic access -----------------------------------------------------

    def ncells(self, k):
        return len(self.cells[k])

    def cell_counts(self):
        return tuple(len(cs) for cs in self.cells)

    def source(self, k, x):
        return self.src[k - 1][x]

    def target(self, k, x):
        return self.tgt[k - 1][x]

    def boundary(self, k, x, j, side):
        """Iterated j-dimensional source ('s') or target ('t') of a k-cell."""
        table = self.src if side == "s" else self.tgt
        d = k
        while d > j:
            x = table[d - 1][x]
            d -= 1
        return x

    def idpad(self, k, x, to_dim):
        """Iterated identity of a k-cell up to dimension ``to_dim``."""
        d = k
        while d < to_dim:
            x = self.ident[d][x]
            d += 1
        return x

    def composable(self, j, k, g, f):
        return (g, f) in self.comp.get((j, k), {})

    def compose_cells(self, j, k, g, f):
        try:
            return self.comp[(j, k)][(g, f)]
        except KeyError:
            raise NCatError(f"cells not {j}-composable at dim {k}: {g}, {f}")

    def __repr__(self):
        return f"FiniteNCat(level={self.level}, cells={self.cell_counts()})"


# -- validation ------------------------------------------------------------


def validate(cat):
    """Return a list of axiom violations (empty means the tables are valid)."""
    out = []
    n = cat.level
    sets = [frozenset(cs) for cs in cat.cells]

    def has(k, x):
        return 0 <= k <= n and x in sets[k]

    # boundary maps total and well-typed
    for k in range(1, n + 1):
        for x in cat.cells[k]:
            for name, table in (("src", cat.src), ("tgt", cat.tgt)):
                if x not in table[k - 1]:
                    out.append(f"{name}[{k}] missing for cell {x}")
                elif not has(k - 1, table[k - 1][x]):
                    out.append(f"{name}[{k}] of cell {x} is not a {k-1}-cell")
        for x, y in cat.src[k - 1].items():
            if not has(k, x):
                out.append(f"src[{k}] keyed by non-cell {x}")
    # globularity: ss = st, ts = tt
    for k in range(2, n + 1):
        for x in cat.cells[k]:
            try:
                s, t = cat.src[k - 1][x], cat.tgt[k - 1][x]
                if cat.src[k - 2][s] != cat.src[k - 2][t]:
                    out.append(f"globularity (src) fails at {k}-cell {x}")
                if cat.tgt[k - 2][s] != cat.tgt[k - 2][t]:
                    out.append(f"globularity (tgt) fails at {k}-cell {x}")
            except KeyError:
                pass
    # identities: total, with trivial boundaries
    for k in range(n):
        for x in cat.cells[k]:
            if x not in cat.ident[k]:
                out.append(f"ident[{k}] missing for cell {x}")
                continue
            ix = cat.ident[k][x]
            if not has(k + 1, ix):
                out.append(f"ident[{k}] of {x} is not a {k+1}-cell")
            elif cat.src[k].get(ix) != x or cat.tgt[k].get(ix) != x:
                out.append(f"ident[{k}] of {x} has wrong boundaries")
    # composition tables: defined exactly on j-composable pairs, well-typed
    for j in range(n):
        for k in range(j + 1, n + 1):
            table = cat.comp.get((j, k), {})
            seen = set(table)
            for (g, f), h in table.items():
                if not (has(k, g) and has(k, f) and has(k, h)):
                    out.append(f"comp[{j},{k}] entry ({g},{f})->{h} out of range")
                    continue
                if cat.boundary(k, f, j, "t") != cat.boundary(k, g, j, "s"):
                    out.append(f"comp[{j},{k}] defined on non-composable ({g},{f})")
                # boundary of composite
                if j == k - 1:
                    ok = (cat.src[k - 1][h] == cat.src[k - 1][f]
                          and cat.tgt[k - 1][h] == cat.tgt[k - 1][g])
                else:
                    sub = cat.comp.get((j, k - 1), {})
                    ok = (sub.get((cat.src[k - 1][g], cat.src[k - 1][f])) == cat.src[k - 1][h]
                          and sub.get((cat.tgt[k - 1][g], cat.tgt[k - 1][f])) == cat.tgt[k - 1][h])
                if not ok:
                    out.append(f"comp[{j},{k}] boundary law fails on ({g},{f})")
    if out:
        return out  # laws below assume well-formed tables

    for j in range(n):
        for k in range(j + 1, n + 1):
            seen = set(cat.comp.get((j, k), {}))
            for g in cat.cells[k]:
                for f in cat.cells[k]:
                    if cat.boundary(k, f, j, "t") == cat.boundary(k, g, j, "s") \
                            and (g, f) not in seen:
                        out.append(f"comp[{j},{k}] missing composite for ({g},{f})")
    if out:
        return out

    # unit laws
    for j in range(n):
        for k in range(j + 1, n + 1):
            table = cat.comp[(j, k)]
            for x in cat.cells[k]:
                it = cat.idpad(j, cat.boundary(k, x, j, "t"), k)
                isrc = cat.idpad(j, cat.boundary(k, x, j, "s"), k)
                if table.get((it, x)) != x:
                    out.append(f"left unit law fails at comp[{j},{k}] cell {x}")
                if table.get((x, isrc)) != x:
                    out.append(f"right unit law fails at comp[{j},{k}] cell {x}")
    # identities are functorial for composition
    for j in range(n):
        for k in range(j + 1, n):
            for (g, f), h in cat.comp[(j, k)].items():
                lhs = cat.comp[(j, k + 1)].get((cat.ident[k][g], cat.ident[k][f]))
                if lhs != cat.ident[k][h]:
                    out.append(f"ident breaks comp[{j},{k}] on ({g},{f})")
    # associativity
    for (j, k), table in cat.comp.items():
        for (g, f), gf in table.items():
            for e in cat.cells[k]:
                if (f, e) in table:
                    if table.get((gf, e)) != table.get((g, table[(f, e)])):
                        out.append(f"associativity fails at comp[{j},{k}] ({g},{f},{e})")
    # interchange
    for jlow in range(n):
        for jhigh in range(jlow + 1, n):
            for k in range(jhigh + 1, n + 1):
                hi = cat.comp[(jhigh, k)]
                lo = cat.comp[(jlow, k)]
                for (a, b), x in hi.items():
                    for (c, d), y in hi.items():
                        if (x, y) in lo:
                            ac, bd = lo.get((a, c)), lo.get((b, d))
                            if ac is None or bd is None or hi.get((ac, bd)) != lo[(x, y)]:
                                out.append(
                                    f"interchange fails at dims ({jlow},{jhigh},{k})"
                                    f" on ({a},{b};{c},{d})")
    return out


# -- functors ---------------------------------------------------------------


class NFunctor:
    """A strict n-functor, stored as per-dimension cell maps."""

    __slots__ = ("source", "target", "maps", "_enc")

    def __init__(self, source, target, maps):
        if source.level != target.level:
            raise NCatError("functor endpoints must have equal level")
        self.source = source
        self.target = target
        self.maps = tuple(dict(m) for m in maps)
        self._enc = None

    @property
    def encoding(self):
        """Canonical string: images of the source cells in sorted id order."""
        if self._enc is None:
            self._enc = "|".join(
                ",".join(str(self.maps[k][x]) for x in self.source.cells[k])
                for k in range(self.source.level + 1))
        return self._enc

    def __call__(self, k, x):
        return self.maps[k][x]

    def __eq__(self, other):
        return (isinstance(other, NFunctor) and self.source is other.source
                and self.target is other.target and self.encoding == other.encoding)

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.encoding))

    def __repr__(self):
        return f"NFunctor({self.source!r} -> {self.target!r})"


def identity_functor(cat):
    return NFunctor(cat, cat, [{x: x for x in cs} for cs in cat.cells])


def compose(g, f):
    """Composite n-functor ``g . f`` (apply f first)."""
    if f.target is not g.source:
        raise NCatError("non-composable functors")
    return NFunctor(f.source, g.target,
                    [{x: g.maps[k][y] for x, y in f.maps[k].items()}
                     for k in range(f.source.level + 1)])


def validate_nfunctor(u):
    """Violations of strict functoriality for the cell maps of ``u``."""
    out = []
    C, D = u.source, u.target
    for k in range(C.level + 1):
        for x in C.cells[k]:
            if x not in u.maps[k]:
                out.append(f"map[{k}] missing for cell {x}")
    if out:
        return out
    for k in range(1, C.level + 1):
        for x in C.cells[k]:
            if u.maps[k - 1][C.src[k - 1][x]] != D.src[k - 1][u.maps[k][x]]:
                out.append(f"src not preserved at {k}-cell {x}")
            if u.maps[k - 1][C.tgt[k - 1][x]] != D.tgt[k - 1][u.maps[k][x]]:
                out.append(f"tgt not preserved at {k}-cell {x}")
    for k in range(C.level):
        for x in C.cells[k]:
            if u.maps[k + 1][C.ident[k][x]] != D.ident[k][u.maps[k][x]]:
                out.append(f"ident not preserved at {k}-cell {x}")
    for (j, k), table in C.comp.items():
        dtable = D.comp[(j, k)]
        for (g, f), h in table.items():
            img = dtable.get((u.maps[k][g], u.maps[k][f]))
            if img != u.maps[k][h]:
                out.append(f"comp[{j},{k}] not preserved on ({g},{f})")
    return out


def _propagate(C, D, asg):
    """Close a partial assignment under forced values; False on conflict."""
    changed = True
    while changed:
        changed = False
        for k in range(C.level):
            amap, anext = asg[k], asg[k + 1]
            for x, y in list(amap.items()):
                ix = C.ident[k][x]
                iy = D.ident[k][y]
                cur = anext.get(ix)
                if cur is None:
                    anext[ix] = iy
                    changed = True
                elif cur != iy:
                    return False
        for k in range(1, C.level + 1):
            amap, aprev = asg[k], asg[k - 1]
            for x, y in list(amap.items()):
                for table_c, table_d in ((C.src, D.src), (C.tgt, D.tgt)):
                    bx, by = table_c[k - 1][x], table_d[k - 1][y]
                    cur = aprev.get(bx)
                    if cur is None:
                        aprev[bx] = by
                        changed = True
                    elif cur != by:
                        return False
        for (j, k), table in C.comp.items():
            amap = asg[k]
            dtable = D.comp[(j, k)]
            for (g, f), h in table.items():
                ig, iff = amap.get(g), amap.get(f)
                if ig is None or iff is None:
                    continue
                ih = dtable.get((ig, iff))
                if ih is None:
                    return False
                cur = amap.get(h)
                if cur is None:
                    amap[h] = ih
                    changed = True
                elif cur != ih:
                    return False
    return True


def _verify_assignment(C, D, asg):
    for k in range(C.level + 1):
        for x in C.cells[k]:
            if x not in asg[k]:
                return False
    u = NFunctor(C, D, asg)
    return not validate_nfunctor(u)


def enumerate_functors(C, D):
    """All strict n-functors C -> D, in canonical (encoding) order.

    Backtracks over generating cells when ``C`` carries generator data
    (the free constructions), otherwise over all cells, propagating values
    forced by identities, boundaries and composition after each choice.
    """
    if C.level != D.level:
        raise NCatError("enumerate_functors requires equal levels")
    if C.gens is not None:
        order = [(k, x) for k in range(C.level + 1) for x in sorted(C.gens[k])]
    else:
        order = [(k, x) for k in range(C.level + 1) for x in C.cells[k]]
    results = []

    def search(i, asg):
        if i == len(order):
            if _verify_assignment(C, D, asg):
                results.append(NFunctor(C, D, asg))
            return
        k, x = order[i]
        if x in asg[k]:
            search(i + 1, asg)
            return
        if k == 0:
            cands = D.cells[0]
        else:
            s = asg[k - 1].get(C.src[k - 1][x])
            t = asg[k - 1].get(C.tgt[k - 1][x])
            cands = [y for y in D.cells[k]
                     if (s is None or D.src[k - 1][y] == s)
                     and (t is None or D.tgt[k - 1][y] == t)]
        for y in cands:
            trial = [dict(m) for m in asg]
            trial[k][x] = y
            if _propagate(C, D, trial):
                search(i + 1, trial)

    search(0, [{} for _ in range(C.level + 1)])
    results.sort(key=lambda u: u.encoding)
    return results


def functor_from_gen_images(C, D, gen_images):
    """Extend images of C's generators to a functor; None if inconsistent."""
    if C.gens is None:
        raise NCatError("source carries no generator data")
    asg = [{} for _ in range(C.level + 1)]
    for (k, x), y in gen_images.items():
        asg[k][x] = y
    if not _propagate(C, D, asg):
        return None
    if not _verify_assignment(C, D, asg):
        return None
    return NFunctor(C, D, asg)


# -- constructions ----------------------------------------------------------


def _from_keys(level, keys, src_k, tgt_k, ident_k, comp_k, gen_keys=None, meta=None):
    """Build a FiniteNCat from structured cell keys (assigning integer ids)."""
    ids = []
    for k in range(level + 1):
        ordered = sorted(keys[k])
        ids.append({key: i for i, key in enumerate(ordered)})
    cells = [tuple(range(len(keys[k]))) for k in range(level + 1)]
    src = [{ids[k][x]: ids[k - 1][v] for x, v in src_k[k - 1].items()}
           for k in range(1, level + 1)]
    tgt = [{ids[k][x]: ids[k - 1][v] for x, v in tgt_k[k - 1].items()}
           for k in range(1, level + 1)]
    ident = [{ids[k][x]: ids[k + 1][v] for x, v in ident_k[k].items()}
             for k in range(level)]
    comp = {}
    for (j, k), table in comp_k.items():
        comp[(j, k)] = {(ids[k][g], ids[k][f]): ids[k][h]
                        for (g, f), h in table.items()}
    gens = None
    if gen_keys is not None:
        gens = [frozenset(ids[k][x] for x in gen_keys[k]) for k in range(level + 1)]
    full_meta = dict(meta or {})
    full_meta["keys"] = tuple(
        tuple(sorted(keys[k])) for k in range(level + 1))  # id -> key, per dim
    return FiniteNCat(level, cells, src, tgt, ident, comp, gens, full_meta)


def linear_ncat(segments, level):
    """The (level)-category with objects 0..p freely ordered by ``segments``.

    ``segments`` is a list of (level-1)-categories; Hom(a, b) for a < b is
    the product of segments a+1..b, composition along dimension 0 is tuple
    concatenation.  This is the wreath-style construction underlying both
    ``wreath_delta1`` and the free categories on tables of dimensions.
    """
    p = len(segments)
    for s in segments:
        if s.level != level - 1:
            raise NCatError("segments must live one level down")
    keys = [list(range(p + 1))]
    for d in range(1, level + 1):
        layer = []
        for a in range(p + 1):
            for b in range(a, p + 1):
                for comps in itertools.product(
                        *[segments[i].cells[d - 1] for i in range(a, b)]):
                    layer.append((a, b, comps))
        keys.append(layer)
    src_k, tgt_k = [], []
    for d in range(1, level + 1):
        smap, tmap = {}, {}
        for (a, b, comps) in keys[d]:
            if d == 1:
                smap[(a, b, comps)] = a
                tmap[(a, b, comps)] = b
            else:
                smap[(a, b, comps)] = (a, b, tuple(
                    segments[a + i].src[d - 2][c] for i, c in enumerate(comps)))
                tmap[(a, b, comps)] = (a, b, tuple(
                    segments[a + i].tgt[d - 2][c] for i, c in enumerate(comps)))
        src_k.append(smap)
        tgt_k.append(tmap)
    ident_k = []
    for d in range(level):
        imap = {}
        for key in keys[d]:
            if d == 0:
                imap[key] = (key, key, ())
            else:
                a, b, comps = key
                imap[key] = (a, b, tuple(
                    segments[a + i].ident[d - 1][c] for i, c in enumerate(comps)))
        ident_k.append(imap)
    comp_k = {}
    by_ab = [{} for _ in range(level + 1)]
    for d in range(1, level + 1):
        for key in keys[d]:
            by_ab[d].setdefault((key[0], key[1]), []).append(key)
    for d in range(1, level + 1):
        table = {}
        for (a, b), fs in by_ab[d].items():
            for (b2, c), gs in by_ab[d].items():
                if b2 != b:
                    continue
                for f in fs:
                    for g in gs:
                        table[(g, f)] = (a, c, f[2] + g[2])
        comp_k[(0, d)] = table
        for j in range(1, d):
            table = {}
            for group in by_ab[d].values():
                for f in group:
                    for g in group:
                        a, b = f[0], f[1]
                        parts = []
                        ok = True
                        for i in range(b - a):
                            sub = segments[a + i].comp[(j - 1, d - 1)]
                            h = sub.get((g[2][i], f[2][i]))
                            if h is None:
                                ok = False
                                break
                            parts.append(h)
                        if ok:
                            table[(g, f)] = (a, b, tuple(parts))
            comp_k[(j, d)] = table
    gen_keys = None
    if all(s.gens is not None for s in segments):
        gen_keys = [list(range(p + 1))]
        for d in range(1, level + 1):
            gen_keys.append([(a, a + 1, (x,))
                             for a in range(p)
                             for x in segments[a].gens[d - 1]])
    return _from_keys(level, keys, src_k, tgt_k, ident_k, comp_k, gen_keys,
                      meta={"linear_segments": tuple(segments)})


@lru_cache(maxsize=None)
def terminal(level):
    """The terminal category: a single cell in every dimension."""
    if level == 0:
        return _from_keys(0, [[0]], [], [], [], {}, gen_keys=[[0]])
    return linear_ncat([], level)


@lru_cache(maxsize=None)
def wreath_delta1(cat):
    """Suspension-style wreath: objects {0, 1}, Hom(0, 1) = ``cat``."""
    return linear_ncat([cat], cat.level + 1)


def _key_id(cat, k, key):
    return cat.meta["keys"][k].index(key)  # small tables; linear scan is fine


def _id_key(cat, k, cid):
    return cat.meta["keys"][k][cid]


def linear_functor(seg_functors, C, D):
    """Functor linear_ncat(sources) -> linear_ncat(targets) from segment maps."""
    segs_c = C.meta["linear_segments"]
    maps = [{x: x for x in C.cells[0]}]
    for d in range(1, C.level + 1):
        m = {}
        for cid in C.cells[d]:
            a, b, comps = _id_key(C, d, cid)
            new = tuple(seg_functors[a + i].maps[d - 1][c]
                        for i, c in enumerate(comps))
            m[cid] = _key_id(D, d, (a, b, new))
        maps.append(m)
    return NFunctor(C, D, maps)


def wreath_delta1_map(u):
    """Apply ``wreath_delta1`` to a functor."""
    return linear_functor([u], wreath_delta1(u.source), wreath_delta1(u.target))


@lru_cache(maxsize=None)
def globe(k, level):
    """Free (level)-category on a single k-dimensional globe."""
    if k > level:
        raise NCatError("globe dimension exceeds level")
    if k == 0:
        return terminal(level)
    return wreath_delta1(globe(k - 1, level - 1))


def globe_generator(k, level):
    """(dim, id) of the unique top generator cell of ``globe(k, level)``."""
    G = globe(k, level)
    (top,) = G.gens[k]
    return (k, top)


def _globe_face_cell(G, k, d, side):
    """The d-dimensional source/target generator cell of the k-globe ``G``."""
    _, top = globe_generator(k, G.level)
    return G.boundary(k, top, d, side)


@lru_cache(maxsize=None)
def globe_inclusion(j, k, side, level):
    """The functor globe(j) -> globe(k) onto the j-dimensional ``side`` face."""
    Gj, Gk = globe(j, level), globe(k, level)
    if j == k:
        return identity_functor(Gj)
    images = {}
    for d in range(j):
        for s in "st":
            images[(d, _globe_face_cell(Gj, j, d, s))] = _globe_face_cell(Gk, k, d, s)
    images[globe_generator(j, level)] = _globe_face_cell(Gk, k, j, side)
    u = functor_from_gen_images(Gj, Gk, images)
    if u is None:
        raise NCatError("globe inclusion failed to extend")
    return u


@lru_cache(maxsize=None)
def globe_collapse(k, level):
    """The functor globe(k+1) -> globe(k) crushing the top cell to an identity."""
    Gk1, Gk = globe(k + 1, level), globe(k, level)
    _, topk = globe_generator(k, level)
    images = {}
    for d in range(k):
        for s in "st":
            images[(d, _globe_face_cell(Gk1, k + 1, d, s))] = _globe_face_cell(Gk, k, d, s)
    for s in "st":
        images[(k, _globe_face_cell(Gk1, k + 1, k, s))] = topk
    images[globe_generator(k + 1, level)] = Gk.ident[k][topk]
    u = functor_from_gen_images(Gk1, Gk, images)
    if u is None:
        raise NCatError("globe collapse failed to extend")
    return u


@lru_cache(maxsize=None)
def product(A, B):
    """Cartesian product, cells are pairs taken dimensionwise."""
    if A.level != B.level:
        raise NCatError("product requires equal levels")
    n = A.level
    keys = [[(x, y) for x in A.cells[k] for y in B.cells[k]] for k in range(n + 1)]
    src_k = [{(x, y): (A.src[k - 1][x], B.src[k - 1][y]) for (x, y) in keys[k]}
             for k in range(1, n + 1)]
    tgt_k = [{(x, y): (A.tgt[k - 1][x], B.tgt[k - 1][y]) for (x, y) in keys[k]}
             for k in range(1, n + 1)]
    ident_k = [{(x, y): (A.ident[k][x], B.ident[k][y]) for (x, y) in keys[k]}
               for k in range(n)]
    comp_k = {}
    for (j, k) in A.comp:
        table = {}
        for (ga, fa), ha in A.comp[(j, k)].items():
            for (gb, fb), hb in B.comp[(j, k)].items():
                table[((ga, gb), (fa, fb))] = (ha, hb)
        comp_k[(j, k)] = table
    return _from_keys(n, keys, src_k, tgt_k, ident_k, comp_k,
                      meta={"product_of": (A, B)})


def product_functor(u, v):
    """The functor product(A, B) -> product(A', B') induced by ``u`` and ``v``."""
    P, Q = product(u.source, v.source), product(u.target, v.target)
    maps = []
    for k in range(P.level + 1):
        m = {}
        for cid in P.cells[k]:
            x, y = _id_key(P, k, cid)
            m[cid] = _key_id(Q, k, (u.maps[k][x], v.maps[k][y]))
        maps.append(m)
    return NFunctor(P, Q, maps)


def pair_projections(P):
    """Projection functors out of a category built by ``product``."""
    A, B = P.meta["product_of"]
    mapsa, mapsb = [], []
    for k in range(P.level + 1):
        ma, mb = {}, {}
        for cid in P.cells[k]:
            x, y = _id_key(P, k, cid)
            ma[cid], mb[cid] = x, y
        mapsa.append(ma)
        mapsb.append(mb)
    return NFunctor(P, A, mapsa), NFunctor(P, B, mapsb)


@lru_cache(maxsize=None)
def raise_level(cat, level):
    """View a category at a higher level by adding identity cells on top."""
    if level < cat.level:
        raise NCatError("cannot lower level here")
    if level == cat.level:
        return cat
    n = cat.level
    cells = list(cat.cells) + [cat.cells[n]] * (level - n)
    src = list(cat.src) + [{x: x for x in cat.cells[n]}] * (level - n)
    tgt = list(cat.tgt) + [{x: x for x in cat.cells[n]}] * (level - n)
    ident = list(cat.ident) + [{x: x for x in cat.cells[n]}] * (level - n)
    comp = dict(cat.comp)
    for k in range(n + 1, level + 1):
        for j in range(k):
            if j >= n:
                # padded cells compose along a padded dimension only with themselves
                comp[(j, k)] = {(x, x): x for x in cat.cells[n]}
            else:
                comp[(j, k)] = dict(cat.comp[(j, n)])
    gens = None
    if cat.gens is not None:
        gens = list(cat.gens) + [frozenset()] * (level - n)
    return FiniteNCat(level, cells, src, tgt, ident, comp, gens,
                      meta={"raised_from": cat})


def raise_level_map(u, level):
    m = list(u.maps) + [u.maps[u.source.level]] * (level - u.source.level)
    return NFunctor(raise_level(u.source, level), raise_level(u.target, level), m)


@lru_cache(maxsize=None)
def simply_connected_groupoid(k, level=1):
    """Groupoid with objects 0..k and exactly one arrow between any two."""
    keys = [list(range(k + 1))]
    arrows = [(a, b) for a in range(k + 1) for b in range(k + 1)]
    keys.append(arrows)
    src_k = [{(a, b): a for (a, b) in arrows}]
    tgt_k = [{(a, b): b for (a, b) in arrows}]
    ident_k = [{a: (a, a) for a in range(k + 1)}]
    comp_k = {(0, 1): {(((b, c)), (a, b2)): (a, c)
                       for (b, c) in arrows for (a, b2) in arrows if b2 == b}}
    cat = _from_keys(1, keys, src_k, tgt_k, ident_k, comp_k)
    return raise_level(cat, level) if level > 1 else cat


def walking_iso(level=1):
    """The contractible groupoid on two objects."""
    return simply_connected_groupoid(1, level)


@lru_cache(maxsize=None)
def build_interval(k):
    """Higher interval data at level k.

    Returns ``(J_k, j_k, s0, s1)`` where ``J_k`` is the k-fold wreath of the
    walking isomorphism, ``j_k : J_k -> globe(k-1)`` collapses the parallel
    pair, and ``s0``/``s1`` are its two sections.
    """
    if k < 1:
        raise NCatError("interval level must be >= 1")
    if k == 1:
        J = walking_iso()
        D0 = terminal(1)
        j1 = NFunctor(J, D0, [{x: 0 for x in J.cells[0]},
                              {x: 0 for x in J.cells[1]}])
        s0 = NFunctor(D0, J, [{0: 0}, {0: J.ident[0][0]}])
        s1 = NFunctor(D0, J, [{0: 1}, {0: J.ident[0][1]}])
        return J, j1, s0, s1
    Jp, jp, s0p, s1p = build_interval(k - 1)
    return (wreath_delta1(Jp), wreath_delta1_map(jp),
            wreath_delta1_map(s0p), wreath_delta1_map(s1p))


# -- internal hom ------------------------------------------------------------


def _globe_cell_core(G, k, d, x):
    """Classify a d-cell of the k-globe: (core dimension, 's'/'t'/'g')."""
    while d > 0:
        below = None
        for y, iy in G.ident[d - 1].items():
            if iy == x:
                below = y
                break
        if below is None:
            break
        x, d = below, d - 1
    if d == k:
        return d, "g"
    if x == _globe_face_cell(G, k, d, "s"):
        return d, "s"
    return d, "t"


def internal_hom(C, D):
    """The n-category of functors C -> D.

    k-cells are strict n-functors ``C x globe(k) -> D``; boundaries and
    identities are precomposition with the globe face/collapse functors, and
    composition pastes values in ``D`` using whiskered boundary padding.
    """
    n = C.level
    prods = [product(C, globe(k, n)) for k in range(n + 1)]
    layers = [enumerate_functors(prods[k], D) for k in range(n + 1)]
    ids = [{F.encoding: i for i, F in enumerate(layer)} for layer in layers]
    cells = [tuple(range(len(layer))) for layer in layers]

    def restrict(k, F, glue):
        """Precompose F : C x globe(k) -> D with id_C x glue."""
        return compose(F, product_functor(identity_functor(C), glue))

    src, tgt, ident = [], [], []
    for k in range(1, n + 1):
        inc_s = globe_inclusion(k - 1, k, "s", n)
        inc_t = globe_inclusion(k - 1, k, "t", n)
        src.append({i: ids[k - 1][restrict(k, F, inc_s).encoding]
                    for i, F in enumerate(layers[k])})
        tgt.append({i: ids[k - 1][restrict(k, F, inc_t).encoding]
                    for i, F in enumerate(layers[k])})
    for k in range(n):
        col = globe_collapse(k, n)
        ident.append({i: ids[k + 1][restrict(k, F, col).encoding]
                      for i, F in enumerate(layers[k])})

    hcat_partial = FiniteNCat(n, cells, src, tgt, ident,
                              {(j, k): {} for j in range(n) for k in range(j + 1, n + 1)})

    globes = [globe(k, n) for k in range(n + 1)]
    cores = []
    for k in range(n + 1):
        table = {}
        for d in range(n + 1):
            for x in globes[k].cells[d]:
                table[(d, x)] = _globe_cell_core(globes[k], k, d, x)
        cores.append(table)

    comp = {}
    for k in range(1, n + 1):
        P = prods[k]
        for j in range(k):
            table = {}
            for gi, G in enumerate(layers[k]):
                for fi, F in enumerate(layers[k]):
                    if hcat_partial.boundary(k, fi, j, "t") != \
                            hcat_partial.boundary(k, gi, j, "s"):
                        continue
                    maps = []
                    ok = True
                    for d in range(n + 1):
                        m = {}
                        for cid in P.cells[d]:
                            gam, x = _id_key(P, d, cid)
                            e, tag = cores[k][(d, x)]
                            if e < j or (e == j and tag == "s"):
                                m[cid] = F.maps[d][cid]
                            elif e == j:
                                m[cid] = G.maps[d][cid]
                            else:
                                gt = C.idpad(j, C.boundary(d, gam, j, "t"), d)
                                up = G.maps[d][_key_id(P, d, (gt, x))]
                                dn = F.maps[d][cid]
                                h = D.comp[(j, d)].get((up, dn))
                                if h is None:
                                    ok = False
                                    break
                                m[cid] = h
                        if not ok:
                            break
                        maps.append(m)
                    if not ok:
                        raise NCatError("internal_hom pasting failed")
                    H = NFunctor(P, D, maps)
                    hid = ids[k].get(H.encoding)
                    if hid is None:
                        raise NCatError("internal_hom composite is not a functor")
                    table[(gi, fi)] = hid
            comp[(j, k)] = table
    return FiniteNCat(n, cells, [dict(d) for d in src], [dict(d) for d in tgt],
                      [dict(d) for d in ident], comp,
                      meta={"hom_layers": tuple(tuple(l) for l in layers),
                            "hom_of": (C, D)})


def internal_hom_eval(H, obj):
    """Evaluation functor internal_hom(C, D) -> D at an object of C."""
    C, D = H.meta["hom_of"]
    n = C.level
    layers = H.meta["hom_layers"]
    maps = []
    for k in range(n + 1):
        P = layers[k][0].source if layers[k] else product(C, globe(k, n))
        _, top = globe_generator(k, n) if k else (0, globe(0, n).cells[0][0])
        m = {}
        for i, F in enumerate(layers[k]):
            cid = _key_id(P, k, (C.idpad(0, obj, k), top))
            m[i] = F.maps[k][cid]
        maps.append(m)
    return NFunctor(H, D, maps)


# -- truncations -------------------------------------------------------------


def _one_cell_classes(cat):
    """Union-find classes of 1-cells under the zigzag relation from 2-cells."""
    parent = {x: x for x in cat.cells[1]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if cat.level >= 2:
        for c in cat.cells[2]:
            a, b = find(cat.src[1][c]), find(cat.tgt[1][c])
            if a != b:
                parent[a] = b
    return {x: find(x) for x in cat.cells[1]}


def truncate(cat):
    """Intelligent 1-truncation: 1-arrows modulo the relation generated by 2-cells."""
    cls = _one_cell_classes(cat)
    reps = sorted(set(cls.values()))
    keys = [list(cat.cells[0]), reps]
    src_k = [{r: cat.src[0][r] for r in reps}]
    tgt_k = [{r: cat.tgt[0][r] for r in reps}]
    ident_k = [{x: cls[cat.ident[0][x]] for x in cat.cells[0]}]
    table = {}
    for (g, f), h in cat.comp[(0, 1)].items():
        key = (cls[g], cls[f])
        val = cls[h]
        if table.setdefault(key, val) != val:
            raise NCatError("1-truncation composition is not well defined")
    comp_k = {(0, 1): table}
    out = _from_keys(1, keys, src_k, tgt_k, ident_k, comp_k,
                     meta={"truncation_of": cat})
    return out


def truncate_map(u):
    """Apply intelligent truncation to a functor."""
    TC, TD = truncate(u.source), truncate(u.target)
    cls_d = _one_cell_classes(u.target)
    m1 = {}
    for cid in TC.cells[1]:
        rep = _id_key(TC, 1, cid)
        m1[cid] = _key_id(TD, 1, cls_d[u.maps[1][rep]])
    m0 = {cid: _key_id(TD, 0, u.maps[0][_id_key(TC, 0, cid)]) for cid in TC.cells[0]}
    return NFunctor(TC, TD, [m0, m1])


def truncate_right(cat):
    """Brutal truncation: discard all cells of dimension >= 2."""
    comp = {(0, 1): dict(cat.comp[(0, 1)])}
    return FiniteNCat(1, [cat.cells[0], cat.cells[1]],
                      [dict(cat.src[0])], [dict(cat.tgt[0])],
                      [dict(cat.ident[0])], comp,
                      meta={"truncation_of": cat})


def truncate_right_map(u):
    return NFunctor(truncate_right(u.source), truncate_right(u.target),
                    [dict(u.maps[0]), dict(u.maps[1])])


# -- recognition principles ---------------------------------------------------


def is_fully_faithful(u):
    """Bijective on parallel hom-sets in every positive dimension."""
    C, D = u.source, u.target
    for k in range(1, C.level + 1):
        if k == 1:
            pairs = [(a, b) for a in C.cells[0] for b in C.cells[0]]
        else:
            pairs = [(f, g) for f in C.cells[k - 1] for g in C.cells[k - 1]
                     if C.src[k - 2][f] == C.src[k - 2][g]
                     and C.tgt[k - 2][f] == C.tgt[k - 2][g]]
        for f, g in pairs:
            hom = [h for h in C.cells[k]
                   if C.src[k - 1][h] == f and C.tgt[k - 1][h] == g]
            imf, img = u.maps[k - 1][f], u.maps[k - 1][g]
            target_hom = [h for h in D.cells[k]
                          if D.src[k - 1][h] == imf and D.tgt[k - 1][h] == img]
            images = [u.maps[k][h] for h in hom]
            if len(set(images)) != len(images) or set(images) != set(target_hom):
                return False
    return True


def invertible_one_cells(cat):
    table = cat.comp[(0, 1)]
    inv = {}
    for f in cat.cells[1]:
        a, b = cat.src[0][f], cat.tgt[0][f]
        for g in cat.cells[1]:
            if cat.src[0][g] == b and cat.tgt[0][g] == a \
                    and table[(g, f)] == cat.ident[0][a] \
                    and table[(f, g)] == cat.ident[0][b]:
                inv[f] = g
                break
    return inv


def is_iso_fibration(u):
    """Functor (level 1) lifting invertible arrows along either endpoint.

    Both endpoint formulations are computed and must agree; their common
    value is returned.
    """
    C, D = u.source, u.target
    if C.level != 1:
        raise NCatError("is_iso_fibration expects level-1 categories")
    inv_c, inv_d = set(invertible_one_cells(C)), set(invertible_one_cells(D))

    def lifts(side):
        table = C.tgt[0] if side == "t" else C.src[0]
        dtable = D.tgt[0] if side == "t" else D.src[0]
        for fp in inv_d:
            for y in C.cells[0]:
                if u.maps[0][y] != dtable[fp]:
                    continue
                if not any(f in inv_c and u.maps[1][f] == fp and table[f] == y
                           for f in C.cells[1]):
                    return False
        return True

    by_target, by_source = lifts("t"), lifts("s")
    if by_target != by_source:
        raise NCatError("iso-fibration endpoint variants disagree")
    return by_target


def unique_lift(u, v, top, bottom):
    """Diagonal fillers for a commuting square of n-functors.

    ``u : A -> B`` (left), ``v : C -> D`` (right), ``top : A -> C``,
    ``bottom : B -> D``.  Returns ``("unique", h)``, ``("none", None)`` or
    ``("many", [h1, h2])`` by exhausting Fun(B, C).
    """
    if compose(v, top).encoding != compose(bottom, u).encoding:
        raise NCatError("square does not commute")
    found = []
    for h in enumerate_functors(u.target, v.source):
        if compose(h, u) == top and compose(v, h) == bottom:
            found.append(h)
            if len(found) > 1:
                return ("many", found)
    if not found:
        return ("none", None)
    return ("unique", found[0])


# -- JSON round-trip ----------------------------------------------------------


def ncat_to_json(cat):
    doc = {
        "level": cat.level,
        "cells": [list(cs) for cs in cat.cells],
        "src": [sorted([x, y] for x, y in d.items()) for d in cat.src],
        "tgt": [sorted([x, y] for x, y in d.items()) for d in cat.tgt],
        "ident": [sorted([x, y] for x, y in d.items()) for d in cat.ident],
        "comp": [{"j": j, "k": k,
                  "pairs": sorted([g, f, h] for (g, f), h in table.items())}
                 for (j, k), table in sorted(cat.comp.items())],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def ncat_from_json(text):
    doc = json.loads(text)
    comp = {(e["j"], e["k"]): {(g, f): h for g, f, h in e["pairs"]}
            for e in doc["comp"]}
    cat = FiniteNCat(doc["level"], doc["cells"],
                     [{x: y for x, y in d} for d in doc["src"]],
                     [{x: y for x, y in d} for d in doc["tgt"]],
                     [{x: y for x, y in d} for d in doc["ident"]],
                     comp)
    bad = validate(cat)
    if bad:
        raise NCatError("invalid category tables: " + "; ".join(bad[:5]))
    return cat
