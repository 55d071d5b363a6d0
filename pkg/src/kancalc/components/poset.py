"""Finite posets as categories: chains, dimension, left-closed subsets and gluing."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from kancalc import logger
from kancalc.components.core import FinCat, FinFunctor, iter_functors, make_category
from kancalc.exception.exception import (
    AntisymmetryViolation,
    NonMonotoneLambda,
    PosetValidationException,
)
from kancalc.utils.common import canonical_key, canonical_sorted, fresh_name, mk


@dataclass(frozen=True, eq=False)
class Poset:
    elements: tuple
    leq: frozenset
    name: str = "J"
    payload: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        below = {j: set() for j in self.elements}
        above = {j: set() for j in self.elements}
        for a, b in self.leq:
            below[b].add(a)
            above[a].add(b)
        object.__setattr__(self, "_below", {j: frozenset(s) for j, s in below.items()})
        object.__setattr__(self, "_above", {j: frozenset(s) for j, s in above.items()})

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def lt(self, a: str, b: str) -> bool:
        return a != b and (a, b) in self.leq

    def down(self, j: str) -> frozenset:
        """J/j."""
        return self._below[j]

    def strict_down(self, j: str) -> frozenset:
        """J/'j = J/j minus j."""
        return self._below[j] - {j}

    def up(self, j: str) -> frozenset:
        return self._above[j]

    def greatest(self) -> Optional[str]:
        for j in self.elements:
            if len(self._below[j]) == len(self.elements):
                return j
        return None

    def least(self) -> Optional[str]:
        for j in self.elements:
            if len(self._above[j]) == len(self.elements):
                return j
        return None

    def maximal(self) -> list[str]:
        return [j for j in self.elements if self._above[j] == {j}]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self):
        return hash((self.elements, self.leq))

    def __repr__(self):
        return f"Poset({self.name!r}, elements={list(self.elements)})"


def make_poset(name: str, elements: Iterable[str], leq: Iterable[tuple], payload: dict = None) -> Poset:
    """Validate a full order relation: reflexive, antisymmetric and transitive."""
    elements = canonical_sorted(elements)
    if len(set(elements)) != len(elements):
        raise PosetValidationException(f"duplicate elements in poset {name}")
    rel = frozenset(tuple(p) for p in leq)
    members = set(elements)
    for a, b in rel:
        if a not in members or b not in members:
            raise PosetValidationException(f"relation {a} <= {b} mentions an unknown element")
    for j in elements:
        if (j, j) not in rel:
            raise PosetValidationException(f"relation is not reflexive at {j}")
    for a, b in rel:
        if a != b and (b, a) in rel:
            raise AntisymmetryViolation(f"{a} <= {b} and {b} <= {a} with {a} != {b}")
    for a, b in rel:
        for c in elements:
            if (b, c) in rel and (a, c) not in rel:
                raise PosetValidationException(f"relation is not transitive: {a} <= {b} <= {c}")
    return Poset(tuple(elements), rel, name, dict(payload or {}))


def from_generators(name: str, elements: Iterable[str], generators: Iterable[tuple]) -> Poset:
    """Reflexive-transitive closure of Hasse-style generators."""
    elements = canonical_sorted(elements)
    rel = {(j, j) for j in elements} | {tuple(g) for g in generators}
    for a, b in list(rel):
        if a not in elements or b not in elements:
            raise PosetValidationException(f"generator {a} <= {b} mentions an unknown element")
    # Warshall
    for k in elements:
        for i in elements:
            if (i, k) not in rel:
                continue
            for j in elements:
                if (k, j) in rel:
                    rel.add((i, j))
    return make_poset(name, elements, rel)


def chain(n: int) -> Poset:
    """[n] = {0 < 1 < ... < n}."""
    els = [str(k) for k in range(n + 1)]
    return Poset(tuple(els), frozenset((str(a), str(b)) for a in range(n + 1) for b in range(a, n + 1)), f"[{n}]")


def discrete_poset(names: Iterable[str], name: str = "disc") -> Poset:
    names = canonical_sorted(names)
    return Poset(tuple(names), frozenset((j, j) for j in names), name)


def full_subposet(J: Poset, members: Iterable[str], name: str = None) -> Poset:
    members = set(members)
    els = [j for j in J.elements if j in members]
    rel = frozenset((a, b) for a, b in J.leq if a in members and b in members)
    return Poset(tuple(els), rel, name or f"{J.name}|sub", {k: v for k, v in J.payload.items() if k in members})


def opposite_poset(J: Poset) -> Poset:
    name = J.name[:-2] if J.name.endswith("^o") else J.name + "^o"
    return Poset(J.elements, frozenset((b, a) for a, b in J.leq), name, dict(J.payload))


def _with_extreme(J: Poset, top: bool) -> tuple[Poset, str]:
    o = fresh_name("o", J.elements)
    rel = set(J.leq) | {(o, o)}
    rel |= {(j, o) for j in J.elements} if top else {(o, j) for j in J.elements}
    suffix = "^>" if top else "^<"
    return Poset(tuple(canonical_sorted(list(J.elements) + [o])), frozenset(rel), J.name + suffix, dict(J.payload)), o


def add_top(J: Poset) -> tuple[Poset, str]:
    return _with_extreme(J, top=True)


def add_bottom(J: Poset) -> tuple[Poset, str]:
    return _with_extreme(J, top=False)


def hasse_edges(J: Poset) -> list[tuple]:
    edges = []
    for a, b in sorted(J.leq, key=lambda p: (canonical_key(p[0]), canonical_key(p[1]))):
        if a == b:
            continue
        if not any(J.lt(a, c) and J.lt(c, b) for c in J.elements):
            edges.append((a, b))
    return edges


def le_name(a: str, b: str) -> str:
    return f"id_{a}" if a == b else f"{a}<={b}"


def as_category(J: Poset) -> FinCat:
    arrows = [(le_name(a, b), a, b) for a, b in J.leq]
    table = {}
    for a, b in J.leq:
        for c in J.up(b):
            table[(le_name(b, c), le_name(a, b))] = le_name(a, c)
    payload = dict(J.payload)
    payload.update({le_name(a, b): (a, b) for a, b in J.leq})
    return make_category(J.name, J.elements, arrows, {j: f"id_{j}" for j in J.elements}, table, payload)


def chain_category(n: int) -> FinCat:
    return as_category(chain(n))


def try_as_poset(C: FinCat) -> Optional[Poset]:
    """The poset of a thin category with only identity isomorphisms, else None."""
    if not C.is_poset():
        return None
    rel = frozenset((a, b) for a in C.objects for b in C.objects if C.hom(a, b))
    return Poset(tuple(C.objects), rel, C.name, {k: v for k, v in C.payload.items() if k in C.identity})


def monotone_functor(J: Poset, K: Poset, mapping: Mapping[str, str], name: str = "f") -> FinFunctor:
    """The functor of a monotone map between posets."""
    for a, b in J.leq:
        if not K.le(mapping[a], mapping[b]):
            raise PosetValidationException(f"map {name} is not monotone at {a} <= {b}")
    return FinFunctor(
        as_category(J), as_category(K),
        {j: mapping[j] for j in J.elements},
        {le_name(a, b): le_name(mapping[a], mapping[b]) for a, b in J.leq},
        name,
    )


def is_monotone(J: Poset, K: Poset, mapping: Mapping[str, str]) -> bool:
    return all(K.le(mapping[a], mapping[b]) for a, b in J.leq)


def is_conservative(J: Poset, mapping: Mapping[str, str]) -> bool:
    """All fibers discrete."""
    return all(mapping[a] != mapping[b] for a, b in J.leq if a != b)


def find_order_isomorphism(J: Poset, K: Poset) -> Optional[dict]:
    if len(J) != len(K) or len(J.leq) != len(K.leq):
        return None
    sig = lambda P, j: (len(P.down(j)), len(P.up(j)))
    els = list(J.elements)

    def rec(k, m, used):
        if k == len(els):
            return dict(m)
        a = els[k]
        for b in K.elements:
            if b in used or sig(J, a) != sig(K, b):
                continue
            if all(J.le(x, a) == K.le(m[x], b) and J.le(a, x) == K.le(b, m[x]) for x in m):
                m[a] = b
                used.add(b)
                found = rec(k + 1, m, used)
                if found is not None:
                    return found
                del m[a]
                used.discard(b)
        return None

    return rec(0, {}, set())


def iter_poset_maps(J: Poset, K: Poset) -> Iterator[dict]:
    """Monotone maps J -> K in canonical order."""
    els = list(J.elements)

    def rec(k, m):
        if k == len(els):
            yield dict(m)
            return
        a = els[k]
        for b in K.elements:
            if all(K.le(m[x], b) for x in m if J.le(x, a)) and all(K.le(b, m[x]) for x in m if J.le(a, x)):
                m[a] = b
                yield from rec(k + 1, m)
                del m[a]

    yield from rec(0, {})


# ---------------------------------------------------------------- chains and dimension

def chain_count(C: FinCat, max_len: int) -> list[int]:
    """Number of non-degenerate chains of each length 0..max_len (composable non-identity strings)."""
    counts = [len(C.objects)]
    ending = {c: 1 for c in C.objects}
    steps = [(C.src(f), C.tgt(f)) for f in C.non_identities()]
    for _ in range(max_len):
        nxt = {c: 0 for c in C.objects}
        for s, t in steps:
            nxt[t] += ending[s]
        ending = nxt
        counts.append(sum(ending.values()))
    return counts


def height_map(J: Poset) -> dict:
    """ht(j) = maximal length of a non-degenerate chain in J/j."""
    ht = {}
    for j in sorted(J.elements, key=lambda x: len(J.down(x))):
        ht[j] = max((ht[i] + 1 for i in J.strict_down(j)), default=0)
    return {j: ht[j] for j in J.elements}


def dimension(J: Poset) -> int:
    """Length of the longest non-degenerate chain; -1 for the empty poset."""
    return max(height_map(J).values(), default=-1)


# ---------------------------------------------------------------- left-closed subsets

@dataclass(frozen=True)
class LeftClosedSet:
    ambient: Poset
    members: frozenset

    def __post_init__(self):
        if not is_left_closed(self.ambient, self.members):
            raise PosetValidationException(
                f"{canonical_sorted(self.members)} is not left-closed in {self.ambient.name}"
            )

    def name(self) -> str:
        return mk(*canonical_sorted(self.members))


def is_left_closed(J: Poset, members: Iterable[str]) -> bool:
    members = set(members)
    return all(J.down(j) <= members for j in members)


def is_right_closed(J: Poset, members: Iterable[str]) -> bool:
    members = set(members)
    return all(J.up(j) <= members for j in members)


def iter_left_closed(J: Poset) -> Iterator[frozenset]:
    """Down-closed subsets, smaller ones first, in canonical order within a size."""
    els = list(J.elements)
    for r in range(len(els) + 1):
        for combo in itertools.combinations(els, r):
            s = frozenset(combo)
            if is_left_closed(J, s):
                yield s


def left_closed_sets(J: Poset) -> Poset:
    """L(J) ordered by inclusion; payload maps each element name to its member set."""
    sets = list(iter_left_closed(J))
    names = {s: mk(*canonical_sorted(s)) for s in sets}
    rel = frozenset((names[a], names[b]) for a in sets for b in sets if a <= b)
    return Poset(tuple(canonical_sorted(names.values())), rel, f"L({J.name})", {names[s]: s for s in sets})


def lambda_closure(J: Poset, subset: Iterable[str]) -> LeftClosedSet:
    """Least left-closed superset: the union of J/s over s in the subset."""
    members = set()
    for s in subset:
        members |= J.down(s)
    return LeftClosedSet(J, frozenset(members))


def check_lambda_adjunction(J: Poset) -> bool:
    """Lambda(S) is inside T iff S is inside T, for every S and every left-closed T."""
    lcs = list(iter_left_closed(J))
    for r in range(len(J) + 1):
        for combo in itertools.combinations(J.elements, r):
            S = frozenset(combo)
            closure = lambda_closure(J, S).members
            for T in lcs:
                if (closure <= T) != (S <= T):
                    logger.warning(f"lambda adjunction fails on {J.name} at S={sorted(S)}, T={sorted(T)}")
                    return False
    return True


def is_directed(J: Poset) -> tuple[bool, object]:
    """(True, greatest element) or (False, the first pair with no upper bound)."""
    for a, b in itertools.combinations(J.elements, 2):
        if not (J.up(a) & J.up(b)):
            return False, (a, b)
    if not J.elements:
        return False, ()
    return True, J.greatest()


# ---------------------------------------------------------------- gluing

@dataclass(frozen=True)
class GluingDatum:
    J0: Poset
    J1: Poset
    lam: Mapping[str, frozenset]

    def __post_init__(self):
        for j in self.J1.elements:
            if not is_left_closed(self.J0, self.lam[j]):
                raise PosetValidationException(f"lambda({j}) is not left-closed in {self.J0.name}")
        for a, b in self.J1.leq:
            if not self.lam[a] <= self.lam[b]:
                raise NonMonotoneLambda(
                    f"{a} <= {b} in {self.J1.name} but lambda({a}) = {canonical_sorted(self.lam[a])} "
                    f"is not contained in lambda({b}) = {canonical_sorted(self.lam[b])}"
                )


class Glued(NamedTuple):
    poset: Poset
    eps0: dict
    eps1: dict


def glue(d: GluingDatum, name: str = None) -> Glued:
    """J0 glued to J1 along lambda: j <= j' across the seam iff j is in lambda(j')."""
    clash = set(d.J0.elements) & set(d.J1.elements)
    eps0 = {j: (mk(0, j) if clash else j) for j in d.J0.elements}
    eps1 = {j: (mk(1, j) if clash else j) for j in d.J1.elements}
    rel = {(eps0[a], eps0[b]) for a, b in d.J0.leq}
    rel |= {(eps1[a], eps1[b]) for a, b in d.J1.leq}
    rel |= {(eps0[a], eps1[b]) for b in d.J1.elements for a in d.lam[b]}
    P = Poset(tuple(canonical_sorted(list(eps0.values()) + list(eps1.values()))), frozenset(rel),
              name or f"{d.J0.name}+{d.J1.name}")
    return Glued(P, eps0, eps1)


def split(J: Poset, J0: LeftClosedSet | Iterable[str]) -> GluingDatum:
    members = J0.members if isinstance(J0, LeftClosedSet) else frozenset(J0)
    if not is_left_closed(J, members):
        raise PosetValidationException(f"{canonical_sorted(members)} is not left-closed in {J.name}")
    P0 = full_subposet(J, members, f"{J.name}_0")
    P1 = full_subposet(J, set(J.elements) - members, f"{J.name}_1")
    lam = {j: frozenset(J.down(j) & members) for j in P1.elements}
    return GluingDatum(P0, P1, lam)


class PosetSquare(NamedTuple):
    """A commutative square A -> B, A -> C, B -> D, C -> D of monotone maps."""
    A: Poset
    B: Poset
    C: Poset
    D: Poset
    top: dict
    left: dict
    right: dict
    bottom: dict


def glue_pushout(d: GluingDatum, target: Poset, f: Mapping[str, str]) -> PosetSquare:
    """Push J0 -> J0 glued J1 out along f: J0 -> J', with lambda' = Lambda . f_dagger . lambda."""
    if not is_monotone(d.J0, target, f):
        raise PosetValidationException("pushout leg is not monotone")
    lam2 = {j: lambda_closure(target, {f[x] for x in d.lam[j]}).members for j in d.J1.elements}
    glued = glue(d)
    pushed = glue(GluingDatum(target, d.J1, lam2))
    bottom = {}
    for j in d.J0.elements:
        bottom[glued.eps0[j]] = pushed.eps0[f[j]]
    for j in d.J1.elements:
        bottom[glued.eps1[j]] = pushed.eps1[j]
    return PosetSquare(d.J0, target, glued.poset, pushed.poset,
                       dict(f), dict(glued.eps0), dict(pushed.eps0), bottom)


def height_decomposition(J: Poset) -> GluingDatum:
    """J = J_{<n} glued to the discrete top layer J_n along lambda(j) = J/'j."""
    ht = height_map(J)
    n = dimension(J)
    lower = frozenset(j for j in J.elements if ht[j] < n)
    return split(J, lower)


def pushout_square(J: Poset) -> PosetSquare:
    """The square coprod lambda(j) -> coprod lambda(j)^> over J_{<n} -> J of the height decomposition."""
    d = height_decomposition(J)
    a_els, b_els = [], []
    a_rel, b_rel = set(), set()
    left, top, right = {}, {}, {}
    for j in d.J1.elements:
        lam = d.lam[j]
        for x in lam:
            a, b = mk(j, x), mk(j, x)
            a_els.append(a)
            b_els.append(b)
            left[a] = x
            top[a] = b
            right[b] = x
        for x, y in itertools.product(lam, lam):
            if d.J0.le(x, y):
                a_rel.add((mk(j, x), mk(j, y)))
                b_rel.add((mk(j, x), mk(j, y)))
        apex = mk(j, "^")
        b_els.append(apex)
        right[apex] = j
        b_rel.add((apex, apex))
        b_rel |= {(mk(j, x), apex) for x in lam}
    A = Poset(tuple(canonical_sorted(a_els)), frozenset(a_rel), "coprod_lambda")
    B = Poset(tuple(canonical_sorted(b_els)), frozenset(b_rel), "coprod_lambda^>")
    bottom = {j: j for j in d.J0.elements}
    return PosetSquare(A, B, d.J0, J, top, left, right, bottom)


def certify_cocartesian(square: PosetSquare, targets: Sequence[FinCat]) -> dict:
    """Fun(D, T) -> Fun(B, T) x_{Fun(A, T)} Fun(C, T) is bijective for every target T."""
    A, B, C, D = (as_category(P) for P in (square.A, square.B, square.C, square.D))
    per_target = []
    for T in targets:
        from_c = list(iter_functors(C, T))
        from_b = list(iter_functors(B, T))
        compatible = 0
        for GB in from_b:
            for GC in from_c:
                if any(GB.ob(square.top[a]) != GC.ob(square.left[a]) for a in square.A.elements):
                    continue
                if any(GB.mor(le_name(square.top[a], square.top[b])) != GC.mor(le_name(square.left[a], square.left[b]))
                       for a, b in square.A.leq):
                    continue
                compatible += 1
                fixed_obj, fixed_mor, clash = {}, {}, False
                for src_map, P, G in ((square.right, square.B, GB), (square.bottom, square.C, GC)):
                    for x in P.elements:
                        if fixed_obj.setdefault(src_map[x], G.ob(x)) != G.ob(x):
                            clash = True
                    for a, b in P.leq:
                        key, val = le_name(src_map[a], src_map[b]), G.mor(le_name(a, b))
                        if fixed_mor.setdefault(key, val) != val:
                            clash = True
                extensions = 0 if clash else sum(
                    1 for _ in itertools.islice(iter_functors(D, T, fixed_obj=fixed_obj, fixed_mor=fixed_mor), 2)
                )
                if extensions != 1:
                    logger.warning(f"square not cocartesian against {T.name}: {extensions} extensions")
                    return {"ok": False, "target": T.name, "extensions": extensions, "checked": per_target}
        from_d = sum(1 for _ in iter_functors(D, T))
        if from_d != compatible:
            return {"ok": False, "target": T.name, "extensions": None, "checked": per_target}
        per_target.append((T.name, from_d))
    return {"ok": True, "target": None, "extensions": None, "checked": per_target}


# ---------------------------------------------------------------- enumeration

def _canonical_form(els: Sequence[str], leq: frozenset) -> tuple:
    """Least relation matrix over relabelings that keep (|down|, |up|) blocks in order."""
    down = {j: sum(1 for a, b in leq if b == j) for j in els}
    up = {j: sum(1 for a, b in leq if a == j) for j in els}
    inv = lambda j: (down[j], -up[j])
    blocks = {}
    for j in els:
        blocks.setdefault(inv(j), []).append(j)
    ordered = [blocks[k] for k in sorted(blocks)]
    best = None
    for perms in itertools.product(*(itertools.permutations(b) for b in ordered)):
        order = [j for block in perms for j in block]
        pos = {j: k for k, j in enumerate(order)}
        form = tuple(sorted((pos[a], pos[b]) for a, b in leq))
        if best is None or form < best:
            best = form
    return (len(els), best or ())


def enumerate_posets(max_size: int, min_size: int = 0, max_dim: int = None,
                     budget: int = None) -> Iterator[Poset]:
    """Posets up to isomorphism, by size, each grown by adding a maximal element over a down-set."""
    from kancalc.exception.exception import BoundExceeded

    level = [Poset((), frozenset(), "P0")]
    seen = 0
    for n in range(max_size + 1):
        if n >= min_size:
            for P in level:
                if max_dim is None or dimension(P) <= max_dim:
                    seen += 1
                    if budget is not None and seen > budget:
                        raise BoundExceeded(f"more than {budget} poset shapes up to size {max_size}")
                    yield P
        if n == max_size:
            return
        forms, nxt = set(), []
        new = str(n)
        for P in level:
            for D in iter_left_closed(P):
                rel = set(P.leq) | {(new, new)} | {(d, new) for d in D}
                els = list(P.elements) + [new]
                form = _canonical_form(els, frozenset(rel))
                if form in forms:
                    continue
                forms.add(form)
                nxt.append(Poset(tuple(canonical_sorted(els)), frozenset(rel), f"P{n + 1}_{len(nxt)}"))
        logger.debug(f"{len(nxt)} posets with {n + 1} elements")
        level = nxt
