"""The cell category of tables of dimensions.

Objects are two-row tables ``(i_1 .. i_m ; i'_1 .. i'_{m-1})`` subject to
``i_k > i'_k`` and ``i_{k+1} > i'_k``; each table presents a globular pasting
scheme, and morphisms are strict n-functors between the free n-categories on
those schemes.  The free categories are built by the segment recursion: split
the table at the zeros of the bottom row, shift each segment down a
dimension, and string the recursively built hom-categories along a line of
objects (``ncat.linear_ncat``).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from . import ncat
from .ncat import NCatError


class ThetaError(Exception):
    pass


@dataclass(frozen=True)
class Table:
    """A table of dimensions: top row of widths m, bottom row of width m-1."""

    top: tuple
    bottom: tuple

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(int(x) for x in self.top))
        object.__setattr__(self, "bottom", tuple(int(x) for x in self.bottom))

    @property
    def width(self):
        return len(self.top)

    @property
    def dimension(self):
        return max(self.top)

    def violations(self, n=None):
        out = []
        if len(self.bottom) != len(self.top) - 1 or not self.top:
            out.append("bottom row must be one shorter than top row")
            return out
        if any(x < 0 for x in self.top + self.bottom):
            out.append("entries must be non-negative")
        for k, b in enumerate(self.bottom):
            if not (self.top[k] > b and self.top[k + 1] > b):
                out.append(f"column {k + 1}: need i_k > i'_k and i_(k+1) > i'_k")
        if n is not None and self.top and max(self.top) > n:
            out.append(f"dimension exceeds {n}")
        return out

    def sort_key(self):
        return (self.width, self.top, self.bottom)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def segments(self):
        """Split at the zeros of the bottom row and shift down one dimension.

        Returns a list of sub-tables; empty for the point table ``(0)``.
        """
        if self.top == (0,):
            return []
        cuts = [-1] + [k for k, b in enumerate(self.bottom) if b == 0] + [self.width - 1]
        segs = []
        for lo, hi in zip(cuts, cuts[1:]):
            top = tuple(x - 1 for x in self.top[lo + 1:hi + 1])
            bottom = tuple(x - 1 for x in self.bottom[lo + 1:hi])
            segs.append(Table(top, bottom))
        return segs

    def to_text(self):
        head = " ".join(str(x) for x in self.top)
        if not self.bottom:
            return head
        return head + " / " + " ".join(str(x) for x in self.bottom)

    def to_json(self):
        return {"top": list(self.top), "bottom": list(self.bottom)}

    def __str__(self):
        return self.to_text()


def parse_table(text):
    """Parse ``"1 1 / 0"`` (or the JSON mirror) into a validated Table."""
    text = text.strip()
    if text.startswith("{"):
        doc = json.loads(text)
        t = Table(tuple(doc["top"]), tuple(doc.get("bottom", ())))
    else:
        if "/" in text:
            head, _, tail = text.partition("/")
            t = Table(tuple(int(x) for x in head.split()),
                      tuple(int(x) for x in tail.split()))
        else:
            t = Table(tuple(int(x) for x in text.split()), ())
    bad = t.violations()
    if bad:
        raise ThetaError("invalid table: " + "; ".join(bad))
    return t


def point():
    return Table((0,), ())


def globe_table(k):
    return Table((k,), ())


def delta_table(m):
    """The width-m table corresponding to the m-simplex (all 1 over all 0)."""
    if m == 0:
        return point()
    return Table((1,) * m, (0,) * (m - 1))


def table_as_simplex_level(t):
    """Inverse of ``delta_table``; None when the table is not of that form."""
    if t == point():
        return 0
    if set(t.top) == {1} and (not t.bottom or set(t.bottom) == {0}):
        return t.width
    return None


@lru_cache(maxsize=None)
def enumerate_objects(n, max_width):
    """All valid tables of dimension <= n and width <= max_width, sorted."""
    if n < 1:
        raise ThetaError("ambient dimension must be >= 1")
    out = [point()]
    for m in range(1, max_width + 1):
        for top in itertools.product(range(1, n + 1), repeat=m):
            for bottom in itertools.product(range(0, n), repeat=m - 1):
                t = Table(top, bottom)
                if not t.violations(n):
                    out.append(t)
    return tuple(sorted(set(out)))


@lru_cache(maxsize=None)
def free_ncat(table, n):
    """The free n-category on the pasting scheme of ``table``.

    Objects are 0..p for p segments; Hom(a, b) is the product of the free
    categories one level down, composition is concatenation.  The result
    carries generator data used for fast functor enumeration.
    """
    if table.violations(n):
        raise ThetaError(f"invalid table for dimension {n}: {table}")
    if table == point():
        return ncat.terminal(n)
    if n == 0:
        raise ThetaError("only the point table lives at level 0")
    if table.width == 1:
        # share instances with the globe tower so functors compose freely
        return ncat.globe(table.top[0], n)
    segs = [free_ncat(s, n - 1) for s in table.segments()]
    return ncat.linear_ncat(segs, n)


@lru_cache(maxsize=None)
def column_top_generator(table, n, col):
    """(dim, cell id) of the generator presented by column ``col`` (1-based)."""
    if table == point():
        if col != 1:
            raise ThetaError("point table has a single column")
        return (0, free_ncat(table, n).cells[0][0])
    segs = table.segments()
    cat = free_ncat(table, n)
    # locate the segment holding this column
    widths = [s.width for s in segs]
    seg_idx, local = 0, col
    while local > widths[seg_idx]:
        local -= widths[seg_idx]
        seg_idx += 1
    d, x = column_top_generator(segs[seg_idx], n - 1, local)
    return (d + 1, ncat._key_id(cat, d + 1, (seg_idx, seg_idx + 1, (x,))))


class ThetaMorphism:
    """A morphism of tables: a strict n-functor between the free categories."""

    __slots__ = ("n", "source", "target", "functor", "_mkey")

    def __init__(self, n, source, target, functor):
        self.n = n
        self.source = source
        self.target = target
        self.functor = functor

    @property
    def encoding(self):
        return self.functor.encoding

    def sort_key(self):
        return (self.source.sort_key(), self.target.sort_key(), self.encoding)

    def __eq__(self, other):
        return (isinstance(other, ThetaMorphism) and self.n == other.n
                and self.source == other.source and self.target == other.target
                and self.encoding == other.encoding)

    def __hash__(self):
        return hash((self.n, self.source, self.target, self.encoding))

    def __repr__(self):
        return f"ThetaMorphism({self.source} -> {self.target})"


def identity_morphism(table, n):
    return ThetaMorphism(n, table, table,
                         ncat.identity_functor(free_ncat(table, n)))


def compose_morphisms(g, f):
    """Composite g . f for f : S -> T, g : T -> U."""
    if f.target != g.source or f.n != g.n:
        raise ThetaError("morphisms not composable")
    return ThetaMorphism(f.n, f.source, g.target,
                         ncat.compose(g.functor, f.functor))


@lru_cache(maxsize=None)
def hom(source, target, n):
    """All morphisms source -> target, canonically ordered."""
    fs = ncat.enumerate_functors(free_ncat(source, n), free_ncat(target, n))
    return tuple(ThetaMorphism(n, source, target, f) for f in fs)


def is_mono(f):
    """Injective on cells in every dimension."""
    for m in f.functor.maps:
        if len(set(m.values())) != len(m):
            return False
    return True


@lru_cache(maxsize=None)
def _mono_set(source, target, n):
    return frozenset(f.encoding for f in hom(source, target, n) if is_mono(f))


def is_split_epi(f):
    if f.source == f.target:
        return f.encoding == identity_morphism(f.source, f.n).encoding or \
            any(compose_morphisms(f, s).encoding == identity_morphism(f.target, f.n).encoding
                for s in hom(f.target, f.source, f.n))
    return f.encoding in _split_epi_set(f.source, f.target, f.n)


@lru_cache(maxsize=None)
def _split_epi_set(source, target, n):
    ident = identity_morphism(target, n).encoding
    out = set()
    for f in hom(source, target, n):
        for s in hom(target, source, n):
            if compose_morphisms(f, s).encoding == ident:
                out.add(f.encoding)
                break
    return frozenset(out)


def _smaller_tables(table, n):
    """Candidate factorization middles: width and dimension never increase."""
    return [t for t in enumerate_objects(n, table.width)
            if t.dimension <= table.dimension]


def ez_factorize(f):
    """The unique split epi / mono factorization of a table morphism.

    Searches middles among tables with dimension and width bounded by the
    source (split epis cannot increase either); raises if the factorization
    is missing or ambiguous.
    """
    results = []
    for middle in _smaller_tables(f.source, f.n):
        epis = [e for e in hom(f.source, middle, f.n) if is_split_epi(e)]
        monos = [m for m in hom(middle, f.target, f.n) if is_mono(m)]
        for e in epis:
            for m in monos:
                if compose_morphisms(m, e) == f:
                    results.append((e, m))
    if not results:
        raise ThetaError(f"no split epi/mono factorization found for {f!r}")
    if len(results) > 1:
        raise ThetaError(f"split epi/mono factorization not unique for {f!r}")
    return results[0]


def boundary_monos(table, n):
    """All monomorphisms into ``table`` from strictly smaller tables."""
    out = []
    for s in _smaller_tables(table, n):
        if s == table:
            continue
        out.extend(f for f in hom(s, table, n) if is_mono(f))
    return sorted(out, key=lambda f: f.sort_key())


def maximal_proper_monos(table, n):
    """Monos into ``table`` not factoring through another proper mono."""
    monos = boundary_monos(table, n)
    out = []
    for m in monos:
        dominated = False
        for m2 in monos:
            if m2 is m or m2.source == m.source:
                continue
            if any(compose_morphisms(m2, h) == m for h in hom(m.source, m2.source, n)):
                dominated = True
                break
        if dominated:
            continue
        out.append(m)
    return out


def globe_leg(table, n, col):
    """The spine leg: the inclusion of the col-th column's globe into ``table``."""
    i_k = table.top[col - 1]
    G = free_ncat(globe_table(i_k), n)
    cat = free_ncat(table, n)
    d, top_cell = column_top_generator(table, n, col)
    assert d == i_k
    images = {}
    if i_k == 0:
        images[(0, G.cells[0][0])] = top_cell
    else:
        gd, gtop = ncat.globe_generator(i_k, n)
        images[(gd, gtop)] = top_cell
        for e in range(i_k):
            for side in "st":
                images[(e, G.boundary(i_k, gtop, e, side))] = \
                    cat.boundary(i_k, top_cell, e, side)
    u = ncat.functor_from_gen_images(G, cat, images)
    if u is None:
        raise ThetaError("spine leg failed to extend")
    return ThetaMorphism(n, globe_table(i_k), table, u)


def spine_inclusions(table, n):
    """The globe legs of ``table`` together with their overlap maps.

    Returns ``(legs, overlaps)`` where ``overlaps[k]`` is the common
    restriction of legs k and k+1 to the glued lower globe.
    """
    legs = [globe_leg(table, n, c) for c in range(1, table.width + 1)]
    overlaps = []
    for k, b in enumerate(table.bottom):
        inc = ncat.globe_inclusion(b, table.top[k + 1], "s", n)
        m = ThetaMorphism(n, globe_table(b), globe_table(table.top[k + 1]), inc)
        overlaps.append(compose_morphisms(legs[k + 1], m))
    return legs, overlaps


# -- the globular pasting scheme itself ---------------------------------------


@dataclass(frozen=True)
class NGraph:
    """A finite globular graph: generating cells with source/target maps."""

    cells: tuple  # per dimension, tuple of cell ids
    src: tuple    # per dimension k >= 1, dict cell -> (k-1)-cell
    tgt: tuple

    def violations(self):
        out = []
        for k in range(1, len(self.cells)):
            for x in self.cells[k]:
                for name, table in (("src", self.src), ("tgt", self.tgt)):
                    if x not in table[k - 1]:
                        out.append(f"{name}[{k}] missing for {x}")
                    elif table[k - 1][x] not in self.cells[k - 1]:
                        out.append(f"{name}[{k}] of {x} out of range")
        for k in range(2, len(self.cells)):
            for x in self.cells[k]:
                try:
                    s, t = self.src[k - 1][x], self.tgt[k - 1][x]
                    if self.src[k - 2][s] != self.src[k - 2][t] or \
                            self.tgt[k - 2][s] != self.tgt[k - 2][t]:
                        out.append(f"globularity fails at {k}-cell {x}")
                except KeyError:
                    pass
        return out


def globular_graph(table, n):
    """The generating globular graph of ``table`` inside its free category."""
    cat = free_ncat(table, n)
    gens = cat.gens
    cells = tuple(tuple(sorted(g)) for g in gens)
    src, tgt = [], []
    for k in range(1, n + 1):
        src.append({x: cat.src[k - 1][x] for x in cells[k]})
        tgt.append({x: cat.tgt[k - 1][x] for x in cells[k]})
    return NGraph(cells, tuple(src), tuple(tgt))
