"""Finite indexing sites for presheaf computations.

A site exposes a bounded, canonically ordered object list plus hom
enumeration, composition and the split-epi/mono classification used for
degeneracy bookkeeping.  Three instances: tables of dimensions, finite
ordinals, and their product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import theta


class SiteError(Exception):
    pass


class ThetaSite:
    """Tables of dimension <= n; bounds select the objects under study."""

    def __init__(self, n, max_dim=None, max_width=2):
        self.n = n
        self.max_dim = n if max_dim is None else max_dim
        self.max_width = max_width

    def objects(self):
        return [t for t in theta.enumerate_objects(self.n, self.max_width)
                if t.dimension <= self.max_dim]

    def hom(self, a, b):
        return theta.hom(a, b, self.n)

    def identity(self, a):
        return theta.identity_morphism(a, self.n)

    def compose(self, g, f):
        return theta.compose_morphisms(g, f)

    def is_mono(self, f):
        return theta.is_mono(f)

    def is_split_epi(self, f):
        return theta.is_split_epi(f)

    def obj_str(self, a):
        return str(a)


@dataclass(frozen=True)
class SimplexMap:
    """A monotone map of finite ordinals [l] -> [m], stored by its values."""

    source: int
    target: int
    values: tuple

    @property
    def encoding(self):
        return ",".join(str(v) for v in self.values)

    def sort_key(self):
        return (self.source, self.target, self.values)

    def __call__(self, i):
        return self.values[i]


def simplex_identity(m):
    return SimplexMap(m, m, tuple(range(m + 1)))


def simplex_compose(g, f):
    if f.target != g.source:
        raise SiteError("simplex maps not composable")
    return SimplexMap(f.source, g.target, tuple(g.values[v] for v in f.values))


@lru_cache(maxsize=None)
def simplex_hom(l, m):
    return tuple(SimplexMap(l, m, values) for values in
                 itertools.combinations_with_replacement(range(m + 1), l + 1))


class DeltaSite:
    """Finite ordinals 0..max_level with monotone maps."""

    def __init__(self, max_level=2):
        self.max_level = max_level

    def objects(self):
        return list(range(self.max_level + 1))

    def hom(self, a, b):
        return simplex_hom(a, b)

    def identity(self, a):
        return simplex_identity(a)

    def compose(self, g, f):
        return simplex_compose(g, f)

    def is_mono(self, f):
        return all(x < y for x, y in zip(f.values, f.values[1:]))

    def is_split_epi(self, f):
        return set(f.values) == set(range(f.target + 1))

    def obj_str(self, a):
        return str(a)


class ProductSite:
    """The product of two sites; morphisms are componentwise pairs."""

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def objects(self):
        return [(a, b) for a in self.left.objects() for b in self.right.objects()]

    def hom(self, a, b):
        return tuple((f, g)
                     for f in self.left.hom(a[0], b[0])
                     for g in self.right.hom(a[1], b[1]))

    def identity(self, a):
        return (self.left.identity(a[0]), self.right.identity(a[1]))

    def compose(self, g, f):
        return (self.left.compose(g[0], f[0]), self.right.compose(g[1], f[1]))

    def is_mono(self, f):
        return self.left.is_mono(f[0]) and self.right.is_mono(f[1])

    def is_split_epi(self, f):
        return self.left.is_split_epi(f[0]) and self.right.is_split_epi(f[1])

    def obj_str(self, a):
        return f"{self.left.obj_str(a[0])} # {self.right.obj_str(a[1])}"
