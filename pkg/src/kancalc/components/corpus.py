"""Canonical corpora: categories and posets up to isomorphism, plus the functors and presheaves on them.

Categories are grown from a hom-count matrix (non-identity morphisms per
ordered pair of objects). Only the matrix that is smallest under relabelling
of objects is kept from each orbit; composition tables are then filled in by
backtracking with associativity checked as soon as a triple is decided, and
isomorphic results are dropped by comparison inside buckets of equal
invariants.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Optional

from kancalc import logger
from kancalc.components.core import (
    FinCat,
    FinFunctor,
    build_category,
    discrete,
    find_isomorphism,
    iter_functors,
    point,
)
from kancalc.components.poset import Poset, as_category, chain, enumerate_posets, from_generators
from kancalc.components.presheaf import CONTRAVARIANT, SetFunctor, iter_set_functors
from kancalc.exception.exception import BoundExceeded


def _hom_matrices(n: int, free: int) -> Iterator[tuple]:
    """Hom-count matrices with at most `free` non-identity morphisms, one per orbit under object relabelling."""
    cells = [(a, b) for a in range(n) for b in range(n)]
    perms = list(itertools.permutations(range(n)))

    def rec(k, left, counts):
        if k == len(cells):
            flat = tuple(counts)
            for p in perms:
                other = tuple(counts[p[a] * n + p[b]] for a, b in cells)
                if other < flat:
                    return
            yield flat
            return
        for c in range(left + 1):
            counts.append(c)
            yield from rec(k + 1, left - c, counts)
            counts.pop()

    yield from rec(0, free, [])


def _tables(objects: list[str], arrows: list[tuple]) -> Iterator[dict]:
    """Every associative composition table on the given non-identity arrows."""
    src = {m: s for m, s, _ in arrows}
    tgt = {m: t for m, _, t in arrows}
    ident = {f"id_{o}": o for o in objects}
    for i, o in ident.items():
        src[i] = tgt[i] = o
    names = [m for m, _, _ in arrows]
    pairs = [(g, f) for f in names for g in names if src[g] == tgt[f]]
    triples = [(h, g, f) for g, f in pairs for h in names if src[h] == tgt[g]]

    def comp(table, g, f):
        if g in ident:
            return f
        if f in ident:
            return g
        return table.get((g, f))

    def hom(a, b):
        found = [m for m in names if src[m] == a and tgt[m] == b]
        return ([f"id_{a}"] if a == b else []) + found

    def consistent(table):
        for h, g, f in triples:
            gf, hg = comp(table, g, f), comp(table, h, g)
            if gf is None or hg is None:
                continue
            left, right = comp(table, h, gf), comp(table, hg, f)
            if left is not None and right is not None and left != right:
                return False
        return True

    def rec(k, table):
        if k == len(pairs):
            yield dict(table)
            return
        g, f = pairs[k]
        for h in hom(src[f], tgt[g]):
            table[(g, f)] = h
            if consistent(table):
                yield from rec(k + 1, table)
            del table[(g, f)]

    yield from rec(0, {})


def _invariant(C: FinCat) -> tuple:
    idempotents = sum(1 for f in C.morphism_names if C.is_idempotent(f))
    isos = sum(1 for f in C.morphism_names if C.is_iso(f))
    fan = sorted(
        sorted(sum(1 for g, f in C.composable_pairs() if C.compose(g, f) == h) for h in C.hom(a, b))
        for a in C.objects for b in C.objects
    )
    return idempotents, isos, tuple(map(tuple, fan))


def enumerate_categories(max_objects: int, max_morphisms: Optional[int] = None, *,
                         min_objects: int = 0, budget: Optional[int] = None) -> Iterator[FinCat]:
    """Finite categories up to isomorphism, by object count and then morphism count.

    max_morphisms counts identities and defaults to max_objects squared, which
    covers every preorder. budget bounds the number of composition tables tried.
    """
    if max_morphisms is None:
        max_morphisms = max(max_objects * max_objects, 1)
    tried, produced = 0, 0
    for n in range(min_objects, max_objects + 1):
        objects = [str(k) for k in range(n)]
        if n > max_morphisms:
            break
        for total in range(n, max_morphisms + 1):
            buckets: dict = {}
            for counts in _hom_matrices(n, total - n):
                if sum(counts) != total - n:
                    continue
                arrows, k = [], 0
                for a in range(n):
                    for b in range(n):
                        for _ in range(counts[a * n + b]):
                            k += 1
                            arrows.append((f"m{k}", objects[a], objects[b]))
                for table in _tables(objects, arrows):
                    tried += 1
                    if budget is not None and tried > budget:
                        raise BoundExceeded(
                            f"more than {budget} composition tables for categories with "
                            f"<= {max_objects} objects and <= {max_morphisms} morphisms"
                        )
                    C = build_category("C", objects, arrows, table)
                    key = (counts, _invariant(C))
                    bucket = buckets.setdefault(key, [])
                    if any(find_isomorphism(C, D) is not None for D in bucket):
                        continue
                    bucket.append(C)
                    produced += 1
                    C = build_category(f"C{produced}", objects, arrows, table)
                    yield C
            logger.debug(f"categories with {n} objects and {total} morphisms: {produced} so far, {tried} tables")


def enumerate_dim1_shapes(max_size: int, budget: Optional[int] = None) -> Iterator[FinCat]:
    """Posets of dimension at most 1 as categories, up to isomorphism."""
    for P in enumerate_posets(max_size, max_dim=1, budget=budget):
        yield as_category(P)


def enumerate_functors(C: FinCat, D: FinCat, budget: Optional[int] = None) -> Iterator[FinFunctor]:
    for k, F in enumerate(iter_functors(C, D), 1):
        if budget is not None and k > budget:
            raise BoundExceeded(f"more than {budget} functors {C.name} -> {D.name}")
        yield F


def enumerate_presheaves(C: FinCat, max_size: int, budget: Optional[int] = None,
                         variance: str = CONTRAVARIANT) -> Iterator[SetFunctor]:
    return iter_set_functors(C, max_size, variance, budget=budget)


# ---------------------------------------------------------------- named fixtures

def idempotent_category() -> FinCat:
    """One object x with a single non-identity morphism p, p p = p."""
    return build_category("P", ["x"], [("p", "x", "x")], {("p", "p"): "p"})


def involution_category() -> FinCat:
    """The group of order two on one object."""
    return build_category("Z2", ["x"], [("t", "x", "x")], {("t", "t"): "id_x"})


def parallel_pair() -> FinCat:
    return build_category("par", ["a", "b"], [("f", "a", "b"), ("g", "a", "b")])


def span_poset() -> Poset:
    return from_generators("V", ["o", "a", "b"], [("o", "a"), ("o", "b")])


def cospan_poset() -> Poset:
    return from_generators("Lambda", ["a", "b", "t"], [("a", "t"), ("b", "t")])


def standard_categories() -> dict[str, FinCat]:
    """Small hand-named categories the suites and tests come back to."""
    return {
        "pt": point(),
        "disc2": discrete(["a", "b"], "disc2"),
        "[1]": as_category(chain(1)),
        "[2]": as_category(chain(2)),
        "P": idempotent_category(),
        "Z2": involution_category(),
        "par": parallel_pair(),
        "V": as_category(span_poset()),
        "Lambda": as_category(cospan_poset()),
    }
