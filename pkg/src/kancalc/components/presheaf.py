"""Finite Set-valued functors: elements, (co)limits, Yoneda, Kan extensions and cofinality.

A SetFunctor on ``base`` is covariant or contravariant. Internally every
algorithm runs on its *shape*, the category on which it is covariant:
``base`` itself, or ``opposite(base)`` for a presheaf. Morphism names are
shared between a category and its opposite, so ``act`` is the same table in
both readings.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, NamedTuple, Optional, Sequence

from kancalc import logger
from kancalc.components.core import (
    FinCat,
    FinFunctor,
    comma_fiber,
    compose_functors,
    iter_functors,
    iter_nat_transforms,
    make_category,
    opposite,
    opposite_functor,
    pi0,
)
from kancalc.exception.exception import (
    BoundExceeded,
    FunctorValidationException,
    NaturalityException,
    PreconditionFailed,
    VarianceMismatch,
)
from kancalc.utils.common import mk
from kancalc.utils.union_find import UnionFind

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"


@dataclass(frozen=True, eq=False)
class SetFunctor:
    base: FinCat
    variance: str
    values: Mapping[str, tuple]
    action: Mapping[str, Mapping[str, str]]
    name: str = "X"

    @cached_property
    def shape(self) -> FinCat:
        return self.base if self.variance == COVARIANT else opposite(self.base)

    @property
    def is_presheaf(self) -> bool:
        return self.variance == CONTRAVARIANT

    def at(self, c: str) -> tuple:
        return self.values[c]

    def act(self, f: str) -> Mapping[str, str]:
        return self.action[f]

    def apply(self, f: str, x: str) -> str:
        return self.action[f][x]

    def size(self) -> int:
        return sum(len(v) for v in self.values.values())

    def key(self) -> tuple:
        return (
            self.variance,
            tuple(tuple(self.values[c]) for c in self.base.objects),
            tuple(tuple(sorted(self.action[f].items())) for f in self.base.morphism_names),
        )

    def __eq__(self, other):
        if not isinstance(other, SetFunctor):
            return NotImplemented
        return self.base == other.base and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        sizes = {c: len(self.values[c]) for c in self.base.objects}
        return f"SetFunctor({self.name!r}, {self.variance}, on {self.base.name}, sizes={sizes})"


def validate_set_functor(X: SetFunctor) -> SetFunctor:
    if X.variance not in (COVARIANT, CONTRAVARIANT):
        raise VarianceMismatch(f"unknown variance {X.variance!r} for {X.name}")
    S = X.shape
    for c in S.objects:
        if c not in X.values:
            raise FunctorValidationException(f"{X.name} has no value at {c}")
        if len(set(X.values[c])) != len(X.values[c]):
            raise FunctorValidationException(f"{X.name}({c}) lists an element twice")
    for m in S.morphisms:
        fn = X.action.get(m.name)
        if fn is None:
            raise FunctorValidationException(f"{X.name} has no action for {m.name}")
        if set(fn) != set(X.at(m.src)) or not set(fn.values()) <= set(X.at(m.tgt)):
            raise FunctorValidationException(
                f"{X.name}({m.name}) is not a function {X.name}({m.src}) -> {X.name}({m.tgt})"
            )
    for c in S.objects:
        if any(X.apply(S.id(c), x) != x for x in X.at(c)):
            raise FunctorValidationException(f"{X.name} does not send the identity of {c} to the identity")
    for g, f in S.composable_pairs():
        gf = S.compose(g, f)
        for x in X.at(S.src(f)):
            if X.apply(gf, x) != X.apply(g, X.apply(f, x)):
                order = f"{g} o {f}" if X.variance == COVARIANT else f"{f} o {g} in {X.base.name}"
                raise FunctorValidationException(f"{X.name} does not preserve the composite {order} at {x}")
    return X


def make_set_functor(base: FinCat, variance: str, values: Mapping, action: Mapping = None,
                     name: str = "X") -> SetFunctor:
    """Build and validate; identity actions may be omitted."""
    values = {c: tuple(values.get(c, ())) for c in base.objects}
    full = {f: dict(v) for f, v in (action or {}).items()}
    for c in base.objects:
        full.setdefault(base.id(c), {x: x for x in values[c]})
    return validate_set_functor(SetFunctor(base, variance, values, full, name))


def _from_shape(shape_base: FinCat, variance: str, values, action, name) -> SetFunctor:
    """Wrap data computed on a shape back onto the base it came from."""
    base = shape_base if variance == COVARIANT else opposite(shape_base)
    return SetFunctor(base, variance, values, action, name)


def constant(base: FinCat, atoms: Sequence[str], variance: str = CONTRAVARIANT, name: str = None) -> SetFunctor:
    atoms = tuple(atoms)
    return SetFunctor(base, variance, {c: atoms for c in base.objects},
                      {f: {x: x for x in atoms} for f in base.morphism_names}, name or f"const{len(atoms)}")


def point_functor(base: FinCat, variance: str = CONTRAVARIANT) -> SetFunctor:
    return constant(base, ("*",), variance, "pt")


def representable(C: FinCat, c: str) -> SetFunctor:
    """Y(c) = Hom(-, c)."""
    values = {d: C.hom(d, c) for d in C.objects}
    action = {m.name: {h: C.compose(h, m.name) for h in C.hom(m.tgt, c)} for m in C.morphisms}
    return SetFunctor(C, CONTRAVARIANT, values, action, f"Y({c})")


def corepresentable(C: FinCat, c: str) -> SetFunctor:
    """Hom(c, -)."""
    values = {d: C.hom(c, d) for d in C.objects}
    action = {m.name: {h: C.compose(m.name, h) for h in C.hom(c, m.src)} for m in C.morphisms}
    return SetFunctor(C, COVARIANT, values, action, f"Y^o({c})")


def pullback(gamma: FinFunctor, Y: SetFunctor) -> SetFunctor:
    """gamma^* Y = Y . gamma, with the variance of Y."""
    if Y.base != gamma.cod:
        raise PreconditionFailed(f"{Y.name} lives on {Y.base.name}, not on the codomain of {gamma.name}")
    I = gamma.dom
    return SetFunctor(
        I, Y.variance,
        {i: Y.at(gamma.ob(i)) for i in I.objects},
        {f: Y.act(gamma.mor(f)) for f in I.morphism_names},
        f"{gamma.name}*{Y.name}",
    )


# ---------------------------------------------------------------- maps

@dataclass(frozen=True, eq=False)
class SetNatMap:
    src: SetFunctor
    tgt: SetFunctor
    components: Mapping[str, Mapping[str, str]]

    def at(self, c: str) -> Mapping[str, str]:
        return self.components[c]

    def key(self) -> tuple:
        return tuple(tuple(self.components[c][x] for x in self.src.at(c)) for c in self.src.base.objects)

    def is_iso(self) -> bool:
        return all(
            len(set(self.components[c].values())) == len(self.tgt.at(c)) == len(self.src.at(c))
            for c in self.src.base.objects
        )

    def __eq__(self, other):
        if not isinstance(other, SetNatMap):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def validate_set_map(a: SetNatMap) -> SetNatMap:
    X, Y = a.src, a.tgt
    S = X.shape
    for c in S.objects:
        comp = a.components.get(c, {})
        if set(comp) != set(X.at(c)) or not set(comp.values()) <= set(Y.at(c)):
            raise NaturalityException(f"component at {c} is not a function {X.name}({c}) -> {Y.name}({c})")
    for m in S.morphisms:
        for x in X.at(m.src):
            if a.components[m.tgt][X.apply(m.name, x)] != Y.apply(m.name, a.components[m.src][x]):
                raise NaturalityException(f"naturality fails for {m.name} at {x}")
    return a


def identity_map(X: SetFunctor) -> SetNatMap:
    return SetNatMap(X, X, {c: {x: x for x in X.at(c)} for c in X.base.objects})


def compose_maps(b: SetNatMap, a: SetNatMap) -> SetNatMap:
    """b after a."""
    return SetNatMap(a.src, b.tgt, {c: {x: b.components[c][y] for x, y in a.components[c].items()}
                                    for c in a.src.base.objects})


def pullback_map(gamma: FinFunctor, a: SetNatMap) -> SetNatMap:
    return SetNatMap(pullback(gamma, a.src), pullback(gamma, a.tgt),
                     {i: dict(a.components[gamma.ob(i)]) for i in gamma.dom.objects})


def iter_set_maps(X: SetFunctor, Y: SetFunctor, *, bijective: bool = False) -> Iterator[SetNatMap]:
    """All natural maps X -> Y, assigning one element at a time."""
    if X.variance != Y.variance:
        raise VarianceMismatch(f"{X.name} is {X.variance} but {Y.name} is {Y.variance}")
    if X.base != Y.base:
        raise PreconditionFailed(f"{X.name} and {Y.name} live on different categories")
    S = X.shape
    if bijective and any(len(X.at(c)) != len(Y.at(c)) for c in S.objects):
        return
    slots = [(c, x) for c in S.objects for x in X.at(c)]
    index = {s: k for k, s in enumerate(slots)}
    checks = {k: [] for k in range(len(slots))}
    for f in S.non_identities():
        a, b = S.src(f), S.tgt(f)
        for x in X.at(a):
            y = X.apply(f, x)
            checks[max(index[(a, x)], index[(b, y)])].append((f, a, x, b, y))

    def rec(k, comp, used):
        if k == len(slots):
            yield SetNatMap(X, Y, {c: {x: comp[(c, x)] for x in X.at(c)} for c in S.objects})
            return
        c, x = slots[k]
        for v in Y.at(c):
            if bijective and (c, v) in used:
                continue
            comp[(c, x)] = v
            if all(comp[(b, y)] == Y.apply(f, comp[(a, x0)]) for f, a, x0, b, y in checks[k]):
                used.add((c, v))
                yield from rec(k + 1, comp, used)
                used.discard((c, v))
            del comp[(c, x)]

    yield from rec(0, {}, set())


def hom_presheaves(X: SetFunctor, Y: SetFunctor) -> list[SetNatMap]:
    return list(iter_set_maps(X, Y))


def iso_set_functors(X: SetFunctor, Y: SetFunctor) -> Optional[SetNatMap]:
    """A natural isomorphism X -> Y, or None."""
    if X.base != Y.base or X.variance != Y.variance:
        return None
    return next(iter_set_maps(X, Y, bijective=True), None)


# ---------------------------------------------------------------- elements, colimits, limits

class ElementsCat(NamedTuple):
    cat: FinCat
    proj: FinFunctor


def elements(X: SetFunctor, flavor: str = None) -> ElementsCat:
    """IX for a presheaf (f: <i,x> -> <i',x'> when X(f)(x') = x), or the dual version for a covariant X."""
    flavor = flavor or ("presheaf" if X.is_presheaf else COVARIANT)
    if (flavor == "presheaf") != X.is_presheaf:
        raise VarianceMismatch(f"{flavor} elements requested for the {X.variance} functor {X.name}")
    I = X.base
    objects, payload = [], {}
    for i in I.objects:
        for x in X.at(i):
            objects.append(mk(i, x))
            payload[mk(i, x)] = (i, x)
    arrows, info = [], {}
    for m in I.morphisms:
        if X.is_presheaf:
            pairs = [(X.apply(m.name, y), y) for y in X.at(m.tgt)]
        else:
            pairs = [(x, X.apply(m.name, x)) for x in X.at(m.src)]
        for x, y in pairs:
            name = mk(m.name, x, y)
            arrows.append((name, mk(m.src, x), mk(m.tgt, y)))
            info[name] = (m.name, x, y)
            payload[name] = m.name
    src = {n: s for n, s, _ in arrows}
    tgt = {n: t for n, _, t in arrows}
    table = {}
    for f, (ff, x, _) in info.items():
        for g, (gg, _, z) in info.items():
            if src[g] == tgt[f]:
                table[(g, f)] = mk(I.compose(gg, ff), x, z)
    identity = {mk(i, x): mk(I.id(i), x, x) for i, x in (payload[o] for o in objects)}
    label = f"{I.name}{X.name}" if X.is_presheaf else f"{I.name}^{X.name}"
    cat = make_category(label, objects, arrows, identity, table, payload)
    proj = FinFunctor(cat, I, {o: payload[o][0] for o in objects}, {n: info[n][0] for n in info}, "pi")
    return ElementsCat(cat, proj)


class SetColimit(NamedTuple):
    elements: tuple
    proj: dict
    members: dict


class SetLimit(NamedTuple):
    elements: tuple
    sections: dict


def colim_set(X: SetFunctor) -> SetColimit:
    """Connected components of the elements, each named by its least element <c,x>."""
    S = X.shape
    order = [(c, x) for c in S.objects for x in X.at(c)]
    rank = {e: k for k, e in enumerate(order)}
    uf = UnionFind(order)
    for f in S.non_identities():
        for x in X.at(S.src(f)):
            uf.union((S.src(f), x), (S.tgt(f), X.apply(f, x)))
    classes = uf.classes(key=rank.__getitem__)
    members = {mk(*cls[0]): cls for cls in classes}
    proj = {e: mk(*cls[0]) for cls in classes for e in cls}
    return SetColimit(tuple(members), proj, members)


def _sections(S: FinCat, X: SetFunctor, objects: Sequence[str] = None) -> Iterator[dict]:
    objs = list(objects if objects is not None else S.objects)
    pos = {c: k for k, c in enumerate(objs)}
    checks = {k: [] for k in range(len(objs))}
    for m in S.morphisms:
        if m.src in pos and m.tgt in pos:
            checks[max(pos[m.src], pos[m.tgt])].append(m)

    def rec(k, sec):
        if k == len(objs):
            yield dict(sec)
            return
        c = objs[k]
        for x in X.at(c):
            sec[c] = x
            if all(X.apply(m.name, sec[m.src]) == sec[m.tgt] for m in checks[k]):
                yield from rec(k + 1, sec)
            del sec[c]

    yield from rec(0, {})


def lim_set(X: SetFunctor) -> SetLimit:
    """Compatible families, named by their tuple of values in object order."""
    S = X.shape
    sections = {}
    for sec in _sections(S, X):
        sections[mk(*(sec[c] for c in S.objects))] = sec
    return SetLimit(tuple(sections), sections)


def colim_comparison(X: SetFunctor, Y: SetFunctor, a: SetNatMap) -> dict:
    """colim(a): colim X -> colim Y."""
    cx, cy = colim_set(X), colim_set(Y)
    return {label: cy.proj[(c, a.components[c][x])] for label, ((c, x), *_) in cx.members.items()}


# ---------------------------------------------------------------- Yoneda

class Yoneda(NamedTuple):
    presheaves: dict
    category: FinCat
    embedding: FinFunctor


def presheaf_category(presheaves: Sequence[SetFunctor], name: str = "PSh") -> FinCat:
    """Full subcategory of presheaves on the listed objects; morphisms are all natural maps."""
    names = [X.name for X in presheaves]
    by_name = dict(zip(names, presheaves))
    arrows, payload, lookup = [], {}, {}
    for X in presheaves:
        for Y in presheaves:
            for k, a in enumerate(iter_set_maps(X, Y)):
                label = mk(X.name, Y.name, k)
                arrows.append((label, X.name, Y.name))
                payload[label] = a
                lookup[(X.name, Y.name, a.key())] = label
    identity = {n: lookup[(n, n, identity_map(by_name[n]).key())] for n in names}
    table = {}
    for f, s, t in arrows:
        for g, s2, u in arrows:
            if s2 == t:
                table[(g, f)] = lookup[(s, u, compose_maps(payload[g], payload[f]).key())]
    payload.update(by_name)
    return make_category(name, names, arrows, identity, table, payload)


def yoneda(C: FinCat) -> Yoneda:
    ys = {c: representable(C, c) for c in C.objects}
    P = presheaf_category(list(ys.values()), f"Y[{C.name}]")
    lookup = {(P.src(f), P.tgt(f), P.payload[f].key()): f for f in P.morphism_names}
    mor_map = {}
    for m in C.morphisms:
        X, Y = ys[m.src], ys[m.tgt]
        a = SetNatMap(X, Y, {d: {h: C.compose(m.name, h) for h in X.at(d)} for d in C.objects})
        mor_map[m.name] = lookup[(X.name, Y.name, a.key())]
    emb = FinFunctor(C, P, {c: ys[c].name for c in C.objects}, mor_map, "Y")
    return Yoneda(ys, P, emb)


def check_yoneda_lemma(X: SetFunctor, c: str) -> dict:
    """hom(Y(c), X) -> X(c), a -> a_c(id_c), as an explicit bijection."""
    if not X.is_presheaf:
        raise VarianceMismatch(f"the Yoneda lemma here is stated for presheaves, {X.name} is covariant")
    C = X.base
    maps = hom_presheaves(representable(C, c), X)
    image = [a.components[c][C.id(c)] for a in maps]
    ok = len(set(image)) == len(image) and set(image) == set(X.at(c))
    return {"ok": ok, "bijection": dict(zip((mk(*a.key()) for a in maps), image)), "size": len(maps)}


# ---------------------------------------------------------------- Kan extensions

@dataclass(frozen=True, eq=False)
class KanExtension:
    """gamma_! X (or gamma_* X) with its unit X -> gamma^* gamma_! X (counit gamma^* gamma_* X -> X)."""
    gamma: FinFunctor
    source: SetFunctor
    functor: SetFunctor
    unit: SetNatMap
    classes: Mapping[str, Mapping[tuple, str]]
    reps: Mapping[str, Mapping[str, tuple]]

    def classify(self, b: str, triple: tuple) -> str:
        return self.classes[b][triple]


def _shape_functor(gamma: FinFunctor, X: SetFunctor) -> FinFunctor:
    if X.base != gamma.dom:
        if X.base == opposite(gamma.dom):
            raise VarianceMismatch(f"{X.name} lives on the opposite of {gamma.dom.name}; extend along {gamma.name}^o")
        raise PreconditionFailed(f"{X.name} does not live on the domain of {gamma.name}")
    return gamma if X.variance == COVARIANT else opposite_functor(gamma)


def kan_left(gamma: FinFunctor, X: SetFunctor, variance: str = None) -> KanExtension:
    """Pointwise colimit over the left comma-fibers; presheaves extend along gamma^o."""
    if variance is not None and variance != X.variance:
        raise VarianceMismatch(f"{X.name} is {X.variance}, a {variance} extension was requested")
    g = _shape_functor(gamma, X)
    A, B = g.dom, g.cod
    values, classes, reps = {}, {}, {}
    for b in B.objects:
        triples = [(a, al, x) for a in A.objects for al in B.hom(g.ob(a), b) for x in X.at(a)]
        rank = {t: k for k, t in enumerate(triples)}
        uf = UnionFind(triples)
        for f in A.non_identities():
            a, a2 = A.src(f), A.tgt(f)
            for al2 in B.hom(g.ob(a2), b):
                al = B.compose(al2, g.mor(f))
                for x in X.at(a):
                    uf.union((a, al, x), (a2, al2, X.apply(f, x)))
        cls = uf.classes(key=rank.__getitem__)
        values[b] = tuple(mk(*c[0]) for c in cls)
        classes[b] = {t: mk(*c[0]) for c in cls for t in c}
        reps[b] = {mk(*c[0]): c[0] for c in cls}
    action = {}
    for h in B.morphisms:
        action[h.name] = {
            label: classes[h.tgt][(a, B.compose(h.name, al), x)] for label, (a, al, x) in reps[h.src].items()
        }
    K = _from_shape(B, X.variance, values, action, f"{gamma.name}_!{X.name}")
    unit = SetNatMap(X, pullback(gamma, K), {
        a: {x: classes[g.ob(a)][(a, B.id(g.ob(a)), x)] for x in X.at(a)} for a in A.objects
    })
    logger.debug(f"left Kan extension {K.name}: sizes {[len(values[b]) for b in B.objects]}")
    return KanExtension(gamma, X, K, unit, classes, reps)


def kan_right(gamma: FinFunctor, X: SetFunctor, variance: str = None) -> KanExtension:
    """Pointwise limit over the right comma-fibers; ``unit`` holds the counit gamma^* gamma_* X -> X."""
    if variance is not None and variance != X.variance:
        raise VarianceMismatch(f"{X.name} is {X.variance}, a {variance} extension was requested")
    g = _shape_functor(gamma, X)
    A, B = g.dom, g.cod
    values, sections = {}, {}
    for b in B.objects:
        slots = [(a, al) for a in A.objects for al in B.hom(b, g.ob(a))]
        found = {}
        for sec in _fiber_sections(g, X, b, slots):
            found[mk(*(sec[s] for s in slots))] = sec
        values[b] = tuple(found)
        sections[b] = found
    action = {}
    for h in B.morphisms:
        lookup = {tuple(sorted(sec.items())): label for label, sec in sections[h.tgt].items()}
        fn = {}
        for label, sec in sections[h.src].items():
            moved = {(a, be): sec[(a, B.compose(be, h.name))] for (a, be) in _slots(A, B, g, h.tgt)}
            fn[label] = lookup[tuple(sorted(moved.items()))]
        action[h.name] = fn
    K = _from_shape(B, X.variance, values, action, f"{gamma.name}_*{X.name}")
    counit = SetNatMap(pullback(gamma, K), X, {
        a: {label: sec[(a, B.id(g.ob(a)))] for label, sec in sections[g.ob(a)].items()} for a in A.objects
    })
    return KanExtension(gamma, X, K, counit, {}, sections)


def _slots(A: FinCat, B: FinCat, g: FinFunctor, b: str) -> list[tuple]:
    return [(a, al) for a in A.objects for al in B.hom(b, g.ob(a))]


def _fiber_sections(g: FinFunctor, X: SetFunctor, b: str, slots: list) -> Iterator[dict]:
    A, B = g.dom, g.cod
    pos = {s: k for k, s in enumerate(slots)}
    checks = {k: [] for k in range(len(slots))}
    for f in A.non_identities():
        a, a2 = A.src(f), A.tgt(f)
        for al in B.hom(b, g.ob(a)):
            s, t = (a, al), (a2, B.compose(g.mor(f), al))
            checks[max(pos[s], pos[t])].append((f, s, t))

    def rec(k, sec):
        if k == len(slots):
            yield dict(sec)
            return
        a, _ = slots[k]
        for x in X.at(a):
            sec[slots[k]] = x
            if all(X.apply(f, sec[s]) == sec[t] for f, s, t in checks[k]):
                yield from rec(k + 1, sec)
            del sec[slots[k]]

    yield from rec(0, {})


def kan_counit(gamma: FinFunctor, Y: SetFunctor) -> tuple[KanExtension, SetNatMap]:
    """epsilon: gamma_! gamma^* Y -> Y."""
    K = kan_left(gamma, pullback(gamma, Y))
    g = _shape_functor(gamma, K.source)
    B = g.cod
    comps = {b: {label: Y.apply(al, y) for label, (_, al, y) in K.reps[b].items()} for b in B.objects}
    return K, SetNatMap(K.functor, Y, comps)


def kan_left_map(src: KanExtension, tgt: KanExtension, a: SetNatMap) -> SetNatMap:
    """gamma_!(a) for a: src.source -> tgt.source."""
    return SetNatMap(src.functor, tgt.functor, {
        b: {label: tgt.classify(b, (i, al, a.components[i][x])) for label, (i, al, x) in src.reps[b].items()}
        for b in src.reps
    })


def check_triangle_identities(gamma: FinFunctor, X: SetFunctor, Y: SetFunctor) -> dict:
    """(eps gamma_!) . (gamma_! eta) = id on gamma_! X and (gamma^* eps) . (eta gamma^*) = id on gamma^* Y."""
    K = kan_left(gamma, X)
    K2, eps_k = kan_counit(gamma, K.functor)
    first = compose_maps(eps_k, kan_left_map(K, K2, K.unit))
    KY, eps_y = kan_counit(gamma, Y)
    second = compose_maps(pullback_map(gamma, eps_y), KY.unit)
    return {
        "left": first.key() == identity_map(K.functor).key(),
        "right": second.key() == identity_map(pullback(gamma, Y)).key(),
    }


def check_kan_adjunction(gamma: FinFunctor, X: SetFunctor, Y: SetFunctor) -> dict:
    """hom(gamma_! X, Y) -> hom(X, gamma^* Y), a -> gamma^*(a) . eta, is a bijection with inverse b -> eps . gamma_!(b)."""
    K = kan_left(gamma, X)
    KY, eps = kan_counit(gamma, Y)
    left = hom_presheaves(K.functor, Y)
    right = hom_presheaves(X, pullback(gamma, Y))
    forward = [compose_maps(pullback_map(gamma, a), K.unit) for a in left]
    injective = len({b.key() for b in forward}) == len(forward)
    ok = injective and len(forward) == len(right)
    for b in right:
        back = compose_maps(eps, kan_left_map(K, KY, b))
        if compose_maps(pullback_map(gamma, back), K.unit).key() != b.key():
            ok = False
            break
    return {"ok": ok, "left": len(left), "right": len(right)}


def check_yoneda_square(gamma: FinFunctor) -> dict:
    """gamma^o_! Y(i) is isomorphic to Y(gamma(i)) for every i."""
    bad = None
    for i in gamma.dom.objects:
        K = kan_left(gamma, representable(gamma.dom, i))
        if iso_set_functors(K.functor, representable(gamma.cod, gamma.ob(i))) is None:
            bad = i
            break
    return {"ok": bad is None, "witness": bad}


# ---------------------------------------------------------------- cofinality

def check_cofinal(gamma: FinFunctor) -> tuple[bool, Optional[str]]:
    """Every right comma-fiber i' \\ I is nonempty and connected; otherwise the first bad i'."""
    for b in gamma.cod.objects:
        fiber = comma_fiber(gamma, b, "right").category
        if not fiber.objects or len(pi0(fiber)) != 1:
            return False, b
    return True, None


def check_final(gamma: FinFunctor) -> tuple[bool, Optional[str]]:
    return check_cofinal(opposite_functor(gamma))


def check_localization_sample(gamma: FinFunctor, targets: Sequence[FinCat]) -> dict:
    """gamma^*: Fun(I', E) -> Fun(I, E) is fully faithful for every E in targets."""
    checked = 0
    for E in targets:
        functors = list(iter_functors(gamma.cod, E))
        for F in functors:
            Fg = compose_functors(F, gamma)
            for G in functors:
                Gg = compose_functors(G, gamma)
                upstairs = list(iter_nat_transforms(F, G))
                images = {tuple(t.components[gamma.ob(i)] for i in gamma.dom.objects) for t in upstairs}
                downstairs = sum(1 for _ in iter_nat_transforms(Fg, Gg))
                checked += 1
                if len(images) != len(upstairs) or len(upstairs) != downstairs:
                    logger.warning(f"{gamma.name}^* not fully faithful into {E.name}")
                    return {"ok": False, "target": E.name, "pair": (F.key(), G.key()), "checked": checked}
    return {"ok": True, "target": None, "pair": None, "checked": checked}


def check_cofinal_colimit(gamma: FinFunctor, E: SetFunctor) -> dict:
    """The canonical colim gamma^*E -> colim E and whether it is bijective."""
    if E.is_presheaf:
        raise VarianceMismatch("colimit restriction is stated for covariant functors")
    small, big = colim_set(pullback(gamma, E)), colim_set(E)
    comparison = {label: big.proj[(gamma.ob(i), x)] for label, ((i, x), *_) in small.members.items()}
    bijective = len(set(comparison.values())) == len(comparison) == len(big.elements)
    return {"bijective": bijective, "comparison": comparison}


def elements_map(kan: KanExtension, a: SetNatMap) -> FinFunctor:
    """alpha: I'X' -> IX induced by the adjoint a^dagger: X' -> gamma^* X of a: gamma^o_! X' -> X."""
    gamma = kan.gamma
    X = a.tgt
    a_dag = compose_maps(pullback_map(gamma, a), kan.unit)
    src, tgt = elements(kan.source).cat, elements(X).cat
    obj_map = {o: mk(gamma.ob(i), a_dag.components[i][x]) for o, (i, x) in
               ((o, src.payload[o]) for o in src.objects)}
    mor_map = {}
    for m in src.morphisms:
        i, x = src.payload[m.src]
        j, y = src.payload[m.tgt]
        mor_map[m.name] = mk(gamma.mor(src.payload[m.name]), a_dag.components[i][x], a_dag.components[j][y])
    return FinFunctor(src, tgt, obj_map, mor_map, "alpha")


def cofinal_iff_iso_check(kan: KanExtension, a: SetNatMap) -> dict:
    """Whether alpha: I'X' -> IX is cofinal exactly when a: gamma_! X' -> X is invertible."""
    cofinal, witness = check_cofinal(elements_map(kan, a))
    iso = a.is_iso()
    if cofinal != iso:
        logger.warning(f"cofinality of alpha ({cofinal}) disagrees with invertibility of a ({iso})")
    return {"ok": cofinal == iso, "cofinal": cofinal, "iso": iso, "witness": witness}


# ---------------------------------------------------------------- sweeps and certificates

def iter_set_functors(C: FinCat, max_size: int, variance: str = CONTRAVARIANT, *,
                      min_size: int = 0, budget: int = None) -> Iterator[SetFunctor]:
    """Every Set-valued functor with value sets {0..k-1}, k in [min_size, max_size], in canonical order."""
    S = C if variance == COVARIANT else opposite(C)
    objs = list(C.objects)
    mors = S.non_identities()
    index = {f: k for k, f in enumerate(mors)}
    checks = {k: [] for k in range(len(mors))}
    for g, f in S.composable_pairs():
        if g in index and f in index:
            h = S.compose(g, f)
            checks[max(index[g], index[f], index.get(h, -1))].append((g, f, h))
    produced = 0
    for sizes in itertools.product(range(min_size, max_size + 1), repeat=len(objs)):
        vals = {c: tuple(str(k) for k in range(n)) for c, n in zip(objs, sizes)}
        ids = {S.id(c): {x: x for x in vals[c]} for c in objs}

        def fn(act, h):
            return ids[h] if h in ids else act[h]

        def rec(k, act):
            nonlocal produced
            if k == len(mors):
                produced += 1
                if budget is not None and produced > budget:
                    raise BoundExceeded(f"more than {budget} Set-valued functors on {C.name}")
                full = dict(ids)
                full.update(act)
                yield SetFunctor(C, variance, dict(vals), full, f"X{produced}")
                return
            f = mors[k]
            dom, cod = vals[S.src(f)], vals[S.tgt(f)]
            for image in itertools.product(cod, repeat=len(dom)):
                act[f] = dict(zip(dom, image))
                if all(all(fn(act, h)[x] == fn(act, g)[fn(act, ff)[x]] for x in vals[S.src(ff)])
                       for g, ff, h in checks[k]):
                    yield from rec(k + 1, act)
                del act[f]

        yield from rec(0, {})


def yoneda_colimit_decomposition(X: SetFunctor, bound: int) -> dict:
    """The cocone Y(i) -> X over <i,x> in IX, certified colimiting against every presheaf of size <= bound."""
    if not X.is_presheaf:
        raise VarianceMismatch("the colimit-of-representables decomposition is for presheaves")
    I = X.base
    el = elements(X)
    legs = {}
    for o in el.cat.objects:
        i, x = el.cat.payload[o]
        legs[o] = SetNatMap(representable(I, i), X,
                            {d: {h: X.apply(h, x) for h in I.hom(d, i)} for d in I.objects})
    checked = 0
    for Z in iter_set_functors(I, bound, CONTRAVARIANT):
        cocones = {mk(*(sec[o] for o in el.cat.objects)) for sec in _sections(
            opposite(el.cat), pullback(el.proj, Z))}
        restricted = [mk(*(phi.components[el.cat.payload[o][0]][el.cat.payload[o][1]] for o in el.cat.objects))
                      for phi in iter_set_maps(X, Z)]
        checked += 1
        if len(set(restricted)) != len(restricted) or set(restricted) != cocones:
            logger.warning(f"cocone of representables over {X.name} is not universal against {Z.name}")
            return {"ok": False, "legs": legs, "witness": Z, "checked": checked}
    return {"ok": True, "legs": legs, "witness": None, "checked": checked}


def check_elements_kan(X: SetFunctor, bound: int = 1) -> dict:
    """pi^o_! pt is isomorphic to X, and pi^o_! reflects isomorphisms between small presheaves on IX."""
    el = elements(X)
    K = kan_left(el.proj, point_functor(el.cat))
    iso = iso_set_functors(K.functor, X)
    conservative, witness = True, None
    sweep = list(iter_set_functors(el.cat, bound))
    for Z in sweep:
        KZ = kan_left(el.proj, Z)
        for W in sweep:
            KW = kan_left(el.proj, W)
            for a in iter_set_maps(Z, W):
                if kan_left_map(KZ, KW, a).is_iso() and not a.is_iso():
                    conservative, witness = False, (Z.name, W.name)
                    break
            if not conservative:
                break
        if not conservative:
            break
    return {"ok": iso is not None and conservative, "iso": iso, "conservative": conservative, "witness": witness}
