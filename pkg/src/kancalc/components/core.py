"""Explicit finite categories and the constructions built directly on them.

A FinCat is given by a total composition table. Identifiers of objects and
morphisms are strings ordered by ``canonical_key``; every enumeration in this
module walks them in that order, so searches return the same first hit on
every run.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from kancalc import logger
from kancalc.exception.exception import (
    AssociativityViolation,
    DanglingEndpoint,
    FunctorValidationException,
    IdentityViolation,
    MissingComposite,
    NaturalityException,
)
from kancalc.utils.common import canonical_key, canonical_sorted, fresh_name, mk
from kancalc.utils.union_find import UnionFind


class Arrow(NamedTuple):
    name: str
    src: str
    tgt: str


@dataclass(frozen=True, eq=False)
class FinCat:
    objects: tuple
    morphisms: tuple
    identity: Mapping[str, str]
    table: Mapping[tuple, str]
    name: str = "C"
    payload: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        src = {m.name: m.src for m in self.morphisms}
        tgt = {m.name: m.tgt for m in self.morphisms}
        hom = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self.morphisms:
            hom[(m.src, m.tgt)].append(m.name)
        object.__setattr__(self, "_src", src)
        object.__setattr__(self, "_tgt", tgt)
        object.__setattr__(self, "_hom", {k: tuple(v) for k, v in hom.items()})
        object.__setattr__(self, "_ids", frozenset(self.identity.values()))

    # structure
    def src(self, f: str) -> str:
        return self._src[f]

    def tgt(self, f: str) -> str:
        return self._tgt[f]

    def id(self, a: str) -> str:
        return self.identity[a]

    def is_identity(self, f: str) -> bool:
        return f in self._ids

    def compose(self, g: str, f: str) -> str:
        """g after f."""
        return self.table[(g, f)]

    def hom(self, a: str, b: str) -> tuple:
        return self._hom[(a, b)]

    def arrow(self, f: str) -> Arrow:
        return Arrow(f, self._src[f], self._tgt[f])

    @property
    def morphism_names(self) -> tuple:
        return tuple(m.name for m in self.morphisms)

    def non_identities(self) -> list[str]:
        return [m.name for m in self.morphisms if m.name not in self._ids]

    def composable_pairs(self) -> Iterator[tuple]:
        for f in self.morphisms:
            for g in self.morphisms:
                if g.src == f.tgt:
                    yield g.name, f.name

    def __len__(self):
        return len(self.objects)

    # properties
    def inverse(self, f: str) -> Optional[str]:
        for g in self.hom(self.tgt(f), self.src(f)):
            if self.compose(g, f) == self.id(self.src(f)) and self.compose(f, g) == self.id(self.tgt(f)):
                return g
        return None

    def is_iso(self, f: str) -> bool:
        return self.inverse(f) is not None

    def is_thin(self) -> bool:
        return all(len(h) <= 1 for h in self._hom.values())

    def is_poset(self) -> bool:
        return self.is_thin() and all(
            not (self.hom(a, b) and self.hom(b, a)) for a in self.objects for b in self.objects if a != b
        )

    def is_idempotent(self, e: str) -> bool:
        return self.src(e) == self.tgt(e) and self.compose(e, e) == e

    # comparison on the nose; names and payloads do not take part
    def signature(self) -> tuple:
        return (
            tuple(self.objects),
            tuple(sorted(self.morphisms)),
            tuple(sorted(self.identity.items())),
            tuple(sorted(self.table.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self):
        return hash((self.objects, tuple(sorted(self.morphisms))))

    def __repr__(self):
        return f"FinCat({self.name!r}, objects={len(self.objects)}, morphisms={len(self.morphisms)})"


def make_category(name, objects, arrows, identity, table, payload=None) -> FinCat:
    """Trusted constructor for constructions that are lawful by design."""
    objects = tuple(canonical_sorted(objects))
    arrows = tuple(sorted((Arrow(*a) for a in arrows), key=lambda a: canonical_key(a.name)))
    return FinCat(objects, arrows, dict(identity), dict(table), name, dict(payload or {}))


@dataclass(frozen=True)
class RawCategory:
    """Unvalidated description: identities may be omitted and are then named id_<obj>."""
    name: str
    objects: tuple
    morphisms: tuple
    compose: Mapping[tuple, str]
    identities: Optional[Mapping[str, str]] = None


def validate_category(raw: RawCategory) -> FinCat:
    objects = list(raw.objects)
    if len(set(objects)) != len(objects):
        raise DanglingEndpoint(f"duplicate object identifiers in {raw.name}")
    obj_set = set(objects)
    arrows = {}
    for m in raw.morphisms:
        m = Arrow(*m)
        if m.src not in obj_set or m.tgt not in obj_set:
            raise DanglingEndpoint(f"morphism {m.name}: {m.src} -> {m.tgt} has an endpoint that is not an object")
        if m.name in arrows and arrows[m.name] != m:
            raise DanglingEndpoint(f"morphism {m.name} declared twice with different endpoints")
        arrows[m.name] = m

    identity = dict(raw.identities or {})
    for a in objects:
        i = identity.get(a, f"id_{a}")
        if i in arrows and (arrows[i].src, arrows[i].tgt) != (a, a):
            raise IdentityViolation(f"identity {i} of {a} is declared as {arrows[i].src} -> {arrows[i].tgt}")
        arrows[i] = Arrow(i, a, a)
        identity[a] = i

    table = {}
    for (g, f), h in raw.compose.items():
        for x in (g, f, h):
            if x not in arrows:
                raise DanglingEndpoint(f"composition {g} o {f} = {h} mentions unknown morphism {x}")
        if arrows[g].src != arrows[f].tgt:
            raise DanglingEndpoint(f"composition {g} o {f} given for a non-composable pair")
        if (arrows[h].src, arrows[h].tgt) != (arrows[f].src, arrows[g].tgt):
            raise DanglingEndpoint(
                f"composite {g} o {f} = {h} has endpoints {arrows[h].src} -> {arrows[h].tgt}, "
                f"expected {arrows[f].src} -> {arrows[g].tgt}"
            )
        table[(g, f)] = h

    for m in arrows.values():
        for key in ((identity[m.tgt], m.name), (m.name, identity[m.src])):
            if key in table and table[key] != m.name:
                raise IdentityViolation(f"{key[0]} o {key[1]} = {table[key]}, expected {m.name}")
            table[key] = m.name

    names = sorted(arrows, key=canonical_key)
    for f in names:
        for g in names:
            if arrows[g].src == arrows[f].tgt and (g, f) not in table:
                raise MissingComposite(f"no composite given for {g} o {f}")

    for f in names:
        for g in names:
            if arrows[g].src != arrows[f].tgt:
                continue
            gf = table[(g, f)]
            for h in names:
                if arrows[h].src != arrows[g].tgt:
                    continue
                left, right = table[(h, gf)], table[(table[(h, g)], f)]
                if left != right:
                    raise AssociativityViolation(
                        f"{h} o ({g} o {f}) = {left} but ({h} o {g}) o {f} = {right}"
                    )

    cat = make_category(raw.name, objects, arrows.values(), identity, table)
    logger.debug(f"validated category {raw.name}: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms")
    return cat


def build_category(name, objects, arrows=(), composites=None) -> FinCat:
    """Validate a category given its non-identity arrows and non-identity composites."""
    return validate_category(RawCategory(name, tuple(objects), tuple(arrows), dict(composites or {})))


def discrete(names: Iterable[str], name: str = "disc") -> FinCat:
    names = list(names)
    return make_category(name, names, [(f"id_{a}", a, a) for a in names],
                         {a: f"id_{a}" for a in names}, {(f"id_{a}", f"id_{a}"): f"id_{a}" for a in names})


def point(name: str = "pt") -> FinCat:
    return discrete(["*"], name)


def empty_category(name: str = "empty") -> FinCat:
    return discrete([], name)


# ---------------------------------------------------------------- functors

@dataclass(frozen=True, eq=False)
class FinFunctor:
    dom: FinCat
    cod: FinCat
    obj_map: Mapping[str, str]
    mor_map: Mapping[str, str]
    name: str = "F"

    def ob(self, a: str) -> str:
        return self.obj_map[a]

    def mor(self, f: str) -> str:
        return self.mor_map[f]

    def key(self) -> tuple:
        return (
            tuple(self.obj_map[a] for a in self.dom.objects),
            tuple(self.mor_map[f] for f in self.dom.morphism_names),
        )

    def __eq__(self, other):
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FinFunctor({self.name!r}: {self.dom.name} -> {self.cod.name})"


def validate_functor(F: FinFunctor) -> FinFunctor:
    C, D = F.dom, F.cod
    for a in C.objects:
        if F.obj_map.get(a) not in D.identity:
            raise FunctorValidationException(f"{F.name} does not send object {a} to an object of {D.name}")
    for m in C.morphisms:
        image = F.mor_map.get(m.name)
        if image is None or image not in D._src:
            raise FunctorValidationException(f"{F.name} has no image for morphism {m.name}")
        if (D.src(image), D.tgt(image)) != (F.ob(m.src), F.ob(m.tgt)):
            raise FunctorValidationException(f"{F.name}({m.name}) = {image} has the wrong endpoints")
    for a in C.objects:
        if F.mor(C.id(a)) != D.id(F.ob(a)):
            raise FunctorValidationException(f"{F.name} does not preserve the identity of {a}")
    for g, f in C.composable_pairs():
        if F.mor(C.compose(g, f)) != D.compose(F.mor(g), F.mor(f)):
            raise FunctorValidationException(f"{F.name} does not preserve the composite {g} o {f}")
    return F


def identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {a: a for a in C.objects}, {f: f for f in C.morphism_names}, f"id_{C.name}")


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """G after F."""
    return FinFunctor(
        F.dom, G.cod,
        {a: G.ob(F.ob(a)) for a in F.dom.objects},
        {f: G.mor(F.mor(f)) for f in F.dom.morphism_names},
        f"{G.name}{F.name}",
    )


def constant_functor(I: FinCat, C: FinCat, c: str) -> FinFunctor:
    return FinFunctor(I, C, {a: c for a in I.objects}, {f: C.id(c) for f in I.morphism_names}, f"const_{c}")


def inclusion(sub: FinCat, C: FinCat) -> FinFunctor:
    return FinFunctor(sub, C, {a: a for a in sub.objects}, {f: f for f in sub.morphism_names}, f"incl_{sub.name}")


@dataclass(frozen=True, eq=False)
class NatTransform:
    src: FinFunctor
    tgt: FinFunctor
    components: Mapping[str, str]

    def at(self, a: str) -> str:
        return self.components[a]

    def key(self) -> tuple:
        return tuple(self.components[a] for a in self.src.dom.objects)

    def __eq__(self, other):
        if not isinstance(other, NatTransform):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def validate_nat_transform(alpha: NatTransform) -> NatTransform:
    F, G = alpha.src, alpha.tgt
    D = F.cod
    for a in F.dom.objects:
        c = alpha.components.get(a)
        if c is None or (D.src(c), D.tgt(c)) != (F.ob(a), G.ob(a)):
            raise NaturalityException(f"component at {a} is missing or has the wrong endpoints")
    for m in F.dom.morphisms:
        if D.compose(G.mor(m.name), alpha.at(m.src)) != D.compose(alpha.at(m.tgt), F.mor(m.name)):
            raise NaturalityException(f"naturality square fails for {m.name}")
    return alpha


# ---------------------------------------------------------------- basic constructions

def _strip_op(name: str) -> str:
    return name[:-2] if name.endswith("^o") else name + "^o"


def opposite(C: FinCat) -> FinCat:
    return FinCat(
        C.objects,
        tuple(Arrow(m.name, m.tgt, m.src) for m in C.morphisms),
        dict(C.identity),
        {(f, g): h for (g, f), h in C.table.items()},
        _strip_op(C.name),
        dict(C.payload),
    )


def opposite_functor(F: FinFunctor) -> FinFunctor:
    return FinFunctor(opposite(F.dom), opposite(F.cod), dict(F.obj_map), dict(F.mor_map), _strip_op(F.name))


class Product(NamedTuple):
    category: FinCat
    pr0: FinFunctor
    pr1: FinFunctor


def product(C0: FinCat, C1: FinCat) -> Product:
    objects = [mk(a, b) for a in C0.objects for b in C1.objects]
    arrows, payload = [], {}
    for a, b in itertools.product(C0.objects, C1.objects):
        payload[mk(a, b)] = (a, b)
    for f, g in itertools.product(C0.morphisms, C1.morphisms):
        name = mk(f.name, g.name)
        arrows.append((name, mk(f.src, g.src), mk(f.tgt, g.tgt)))
        payload[name] = (f.name, g.name)
    identity = {mk(a, b): mk(C0.id(a), C1.id(b)) for a in C0.objects for b in C1.objects}
    table = {}
    for g0, f0 in C0.composable_pairs():
        for g1, f1 in C1.composable_pairs():
            table[(mk(g0, g1), mk(f0, f1))] = mk(C0.compose(g0, f0), C1.compose(g1, f1))
    P = make_category(f"{C0.name}x{C1.name}", objects, arrows, identity, table, payload)
    pr0 = FinFunctor(P, C0, {o: payload[o][0] for o in objects}, {a[0]: payload[a[0]][0] for a in arrows}, "pr0")
    pr1 = FinFunctor(P, C1, {o: payload[o][1] for o in objects}, {a[0]: payload[a[0]][1] for a in arrows}, "pr1")
    return Product(P, pr0, pr1)


def pairing(F0: FinFunctor, F1: FinFunctor, target: Product) -> FinFunctor:
    """The functor <F0, F1> into a product built by ``product``."""
    return FinFunctor(
        F0.dom, target.category,
        {a: mk(F0.ob(a), F1.ob(a)) for a in F0.dom.objects},
        {f: mk(F0.mor(f), F1.mor(f)) for f in F0.dom.morphism_names},
        f"<{F0.name},{F1.name}>",
    )


def subcategory(C: FinCat, objects: Iterable[str], morphisms: Iterable[str], name: str = None) -> FinCat:
    objects = [a for a in C.objects if a in set(objects)]
    keep = set(morphisms) | {C.id(a) for a in objects}
    arrows = [m for m in C.morphisms if m.name in keep]
    table = {(g, f): h for (g, f), h in C.table.items() if g in keep and f in keep}
    payload = {k: v for k, v in C.payload.items() if k in keep or k in objects}
    return make_category(name or f"{C.name}|sub", objects, arrows,
                         {a: C.id(a) for a in objects}, table, payload)


def full_subcategory(C: FinCat, objects: Iterable[str], name: str = None) -> FinCat:
    objects = set(objects)
    mors = [m.name for m in C.morphisms if m.src in objects and m.tgt in objects]
    return subcategory(C, objects, mors, name or f"{C.name}|{','.join(canonical_sorted(objects))}")


class LaxProduct(NamedTuple):
    category: FinCat
    sigma: FinFunctor
    tau: FinFunctor


def lax_fiber_product(g0: FinFunctor, g1: FinFunctor, strict: bool = False) -> LaxProduct:
    """Triples <c0, c1, a: g0(c0) -> g1(c1)>; with strict=True only invertible a."""
    C = g0.cod
    C0, C1 = g0.dom, g1.dom
    objects, payload = [], {}
    for c0 in C0.objects:
        for c1 in C1.objects:
            for a in C.hom(g0.ob(c0), g1.ob(c1)):
                if strict and not C.is_iso(a):
                    continue
                name = mk(c0, c1, a)
                objects.append(name)
                payload[name] = (c0, c1, a)
    arrows, identity = [], {}
    by_pair = {}
    for x in objects:
        for y in objects:
            c0, c1, a = payload[x]
            d0, d1, b = payload[y]
            for f0 in C0.hom(c0, d0):
                left = C.compose(b, g0.mor(f0))
                for f1 in C1.hom(c1, d1):
                    if left == C.compose(g1.mor(f1), a):
                        name = mk(f0, f1, a, b)
                        arrows.append((name, x, y))
                        payload[name] = (f0, f1)
                        by_pair[name] = (f0, f1, a, b)
    for x in objects:
        c0, c1, a = payload[x]
        identity[x] = mk(C0.id(c0), C1.id(c1), a, a)
    src = {n: s for n, s, _ in arrows}
    tgt = {n: t for n, _, t in arrows}
    table = {}
    names = [n for n, _, _ in arrows]
    for f in names:
        for g in names:
            if src[g] != tgt[f]:
                continue
            f0, f1, a, _ = by_pair[f]
            g0_, g1_, _, c = by_pair[g]
            table[(g, f)] = mk(C0.compose(g0_, f0), C1.compose(g1_, f1), a, c)
    kind = "x" if strict else "x->"
    P = make_category(f"{C0.name}{kind}{C1.name}", objects, arrows, identity, table, payload)
    sigma = FinFunctor(P, C0, {x: payload[x][0] for x in objects}, {n: by_pair[n][0] for n in names}, "sigma")
    tau = FinFunctor(P, C1, {x: payload[x][1] for x in objects}, {n: by_pair[n][1] for n in names}, "tau")
    return LaxProduct(P, sigma, tau)


def fiber_product(g0: FinFunctor, g1: FinFunctor) -> LaxProduct:
    return lax_fiber_product(g0, g1, strict=True)


class Comma(NamedTuple):
    category: FinCat
    sigma: FinFunctor
    tau: FinFunctor
    eta: FinFunctor


def comma_category(pi: FinFunctor, side: str = "left") -> Comma:
    """Left comma C/I (triples <c, i, pi(c) -> i>) or right comma I\\C (<i, c, i -> pi(c)>).

    sigma projects to the first factor and tau to the second, so that pi
    factors as tau . eta (left) or sigma . eta (right).
    """
    C, I = pi.dom, pi.cod
    idI = identity_functor(I)
    if side == "left":
        lax = lax_fiber_product(pi, idI)
        eta_obj = {c: mk(c, pi.ob(c), I.id(pi.ob(c))) for c in C.objects}
        eta_mor = {}
        for m in C.morphisms:
            a, b = I.id(pi.ob(m.src)), I.id(pi.ob(m.tgt))
            eta_mor[m.name] = mk(m.name, pi.mor(m.name), a, b)
    elif side == "right":
        lax = lax_fiber_product(idI, pi)
        eta_obj = {c: mk(pi.ob(c), c, I.id(pi.ob(c))) for c in C.objects}
        eta_mor = {}
        for m in C.morphisms:
            a, b = I.id(pi.ob(m.src)), I.id(pi.ob(m.tgt))
            eta_mor[m.name] = mk(pi.mor(m.name), m.name, a, b)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    eta = FinFunctor(C, lax.category, eta_obj, eta_mor, "eta")
    return Comma(lax.category, lax.sigma, lax.tau, eta)


class CommaFiber(NamedTuple):
    category: FinCat
    proj: FinFunctor


def comma_fiber(pi: FinFunctor, i: str, side: str = "left") -> CommaFiber:
    """C/i (pairs <c, pi(c) -> i>) or i\\C (pairs <c, i -> pi(c)>), with the projection to C."""
    C, I = pi.dom, pi.cod
    objects, payload = [], {}
    for c in C.objects:
        alphas = I.hom(pi.ob(c), i) if side == "left" else I.hom(i, pi.ob(c))
        for a in alphas:
            name = mk(c, a)
            objects.append(name)
            payload[name] = (c, a)
    arrows, info = [], {}
    for x in objects:
        c, a = payload[x]
        for y in objects:
            d, b = payload[y]
            for f in C.hom(c, d):
                ok = (I.compose(b, pi.mor(f)) == a) if side == "left" else (I.compose(pi.mor(f), a) == b)
                if ok:
                    name = mk(f, a, b)
                    arrows.append((name, x, y))
                    info[name] = (f, a, b)
                    payload[name] = f
    identity = {x: mk(C.id(payload[x][0]), payload[x][1], payload[x][1]) for x in objects}
    src = {n: s for n, s, _ in arrows}
    tgt = {n: t for n, _, t in arrows}
    table = {}
    for f in info:
        for g in info:
            if src[g] == tgt[f]:
                table[(g, f)] = mk(C.compose(info[g][0], info[f][0]), info[f][1], info[g][2])
    label = f"{C.name}/{i}" if side == "left" else f"{i}\\{C.name}"
    K = make_category(label, objects, arrows, identity, table, payload)
    proj = FinFunctor(K, C, {x: payload[x][0] for x in objects}, {n: info[n][0] for n in info}, "proj")
    return CommaFiber(K, proj)


def pi0(C: FinCat) -> list[list[str]]:
    uf = UnionFind(C.objects)
    for m in C.morphisms:
        uf.union(m.src, m.tgt)
    return uf.classes(key=canonical_key)


def is_connected(C: FinCat) -> bool:
    return len(pi0(C)) == 1


def is_initial(C: FinCat, x: str) -> bool:
    return all(len(C.hom(x, y)) == 1 for y in C.objects)


def is_terminal(C: FinCat, x: str) -> bool:
    return all(len(C.hom(y, x)) == 1 for y in C.objects)


def initial_objects(C: FinCat) -> list[str]:
    return [x for x in C.objects if is_initial(C, x)]


def terminal_objects(C: FinCat) -> list[str]:
    return [x for x in C.objects if is_terminal(C, x)]


# ---------------------------------------------------------------- enumeration of functors

def iter_functors(C: FinCat, D: FinCat, *, fixed_obj: Mapping = None, fixed_mor: Mapping = None,
                  bijective: bool = False) -> Iterator[FinFunctor]:
    """All functors C -> D in canonical order, optionally extending a partial assignment."""
    fixed_obj = dict(fixed_obj or {})
    fixed_mor = dict(fixed_mor or {})
    objs = list(C.objects)
    if bijective and (len(C.objects) != len(D.objects) or len(C.morphisms) != len(D.morphisms)):
        return
    mors = C.non_identities()
    index = {f: k for k, f in enumerate(mors)}
    checks = {k: [] for k in range(len(mors))}
    for g, f in C.composable_pairs():
        h = C.compose(g, f)
        if g in index and f in index:
            last = max(index[g], index[f], index.get(h, -1))
            checks[last].append((g, f, h))

    def hom_ok(om, a):
        for b in om:
            for x, y in ((a, b), (b, a)):
                n, m = len(C.hom(x, y)), len(D.hom(om[x], om[y]))
                if bijective and n != m:
                    return False
                if n and not m:
                    return False
        return True

    def objects_rec(k, om):
        if k == len(objs):
            yield dict(om)
            return
        a = objs[k]
        candidates = [fixed_obj[a]] if a in fixed_obj else D.objects
        used = set(om.values())
        for x in candidates:
            if bijective and x in used:
                continue
            om[a] = x
            if hom_ok(om, a):
                yield from objects_rec(k + 1, om)
            del om[a]

    for om in objects_rec(0, {}):
        base = {C.id(a): D.id(om[a]) for a in objs}

        def value(mm, x):
            return base[x] if x in base else mm.get(x)

        def mor_rec(k, mm, used):
            if k == len(mors):
                mm_full = dict(base)
                mm_full.update(mm)
                yield FinFunctor(C, D, dict(om), mm_full)
                return
            f = mors[k]
            arrow = C.arrow(f)
            candidates = D.hom(om[arrow.src], om[arrow.tgt])
            if f in fixed_mor:
                candidates = [fixed_mor[f]] if fixed_mor[f] in candidates else []
            for x in candidates:
                if bijective and (x in used or D.is_identity(x)):
                    continue
                mm[f] = x
                ok = all(value(mm, h) == D.compose(value(mm, g), value(mm, ff)) for g, ff, h in checks[k])
                if ok:
                    used.add(x)
                    yield from mor_rec(k + 1, mm, used)
                    used.discard(x)
                del mm[f]

        yield from mor_rec(0, {}, set())


def find_isomorphism(C: FinCat, D: FinCat) -> Optional[FinFunctor]:
    return next(iter_functors(C, D, bijective=True), None)


def iso_check(C: FinCat, D: FinCat) -> bool:
    """Isomorphism of categories by exhaustive search."""
    return find_isomorphism(C, D) is not None


def iter_nat_transforms(F: FinFunctor, G: FinFunctor, *, invertible: bool = False) -> Iterator[NatTransform]:
    C, D = F.dom, F.cod
    objs = list(C.objects)
    pos = {a: k for k, a in enumerate(objs)}
    checks = {k: [] for k in range(len(objs))}
    for m in C.morphisms:
        checks[max(pos[m.src], pos[m.tgt])].append(m)

    def rec(k, comp):
        if k == len(objs):
            yield NatTransform(F, G, dict(comp))
            return
        a = objs[k]
        for x in D.hom(F.ob(a), G.ob(a)):
            if invertible and not D.is_iso(x):
                continue
            comp[a] = x
            if all(D.compose(G.mor(m.name), comp[m.src]) == D.compose(comp[m.tgt], F.mor(m.name))
                   for m in checks[k]):
                yield from rec(k + 1, comp)
            del comp[a]

    yield from rec(0, {})


def naturally_isomorphic(F: FinFunctor, G: FinFunctor) -> bool:
    return next(iter_nat_transforms(F, G, invertible=True), None) is not None


# ---------------------------------------------------------------- cones and (co)limits

@dataclass(frozen=True, eq=False)
class Cone:
    diagram: FinFunctor
    vertex: str
    legs: Mapping[str, str]

    def key(self) -> tuple:
        return (self.vertex,) + tuple(self.legs[i] for i in self.diagram.dom.objects)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def name(self) -> str:
        return mk(*self.key())

    def pushforward(self, f: str) -> "Cone":
        """f_! of the cone along f: vertex -> e'."""
        C = self.diagram.cod
        return Cone(self.diagram, C.tgt(f), {i: C.compose(f, leg) for i, leg in self.legs.items()})


def validate_cone(cone: Cone) -> Cone:
    E = cone.diagram
    C = E.cod
    for i in E.dom.objects:
        leg = cone.legs[i]
        if (C.src(leg), C.tgt(leg)) != (E.ob(i), cone.vertex):
            raise NaturalityException(f"leg at {i} does not go from E({i}) to the vertex")
    for m in E.dom.morphisms:
        if C.compose(cone.legs[m.tgt], E.mor(m.name)) != cone.legs[m.src]:
            raise NaturalityException(f"cone legs do not commute with E({m.name})")
    return cone


def iter_cones(E: FinFunctor, vertices: Iterable[str] = None) -> Iterator[Cone]:
    I, C = E.dom, E.cod
    objs = list(I.objects)
    pos = {a: k for k, a in enumerate(objs)}
    checks = {k: [] for k in range(len(objs))}
    for m in I.morphisms:
        checks[max(pos[m.src], pos[m.tgt])].append(m)
    for v in (C.objects if vertices is None else vertices):
        def rec(k, legs):
            if k == len(objs):
                yield Cone(E, v, dict(legs))
                return
            i = objs[k]
            for leg in C.hom(E.ob(i), v):
                legs[i] = leg
                if all(C.compose(legs[m.tgt], E.mor(m.name)) == legs[m.src] for m in checks[k]):
                    yield from rec(k + 1, legs)
                del legs[i]
        yield from rec(0, {})


def first_cone(E: FinFunctor) -> Optional[Cone]:
    return next(iter_cones(E), None)


def cone_category(E: FinFunctor) -> FinCat:
    C = E.cod
    cones = list(iter_cones(E))
    payload = {c.name(): c for c in cones}
    arrows, info = [], {}
    for x in cones:
        for y in cones:
            for f in C.hom(x.vertex, y.vertex):
                if all(C.compose(f, x.legs[i]) == y.legs[i] for i in E.dom.objects):
                    name = mk(f, x.name(), y.name())
                    arrows.append((name, x.name(), y.name()))
                    info[name] = (f, x.name(), y.name())
                    payload[name] = f
    identity = {x.name(): mk(C.id(x.vertex), x.name(), x.name()) for x in cones}
    table = {}
    for f, (ff, a, b) in info.items():
        for g, (gg, b2, c) in info.items():
            if b2 == b:
                table[(g, f)] = mk(C.compose(gg, ff), a, c)
    return make_category(f"Cone({E.name})", [x.name() for x in cones], arrows, identity, table, payload)


def colimit(E: FinFunctor) -> Optional[Cone]:
    """The canonically least initial cone, or None. Over the empty diagram this is an initial object of C."""
    K = cone_category(E)
    initial = initial_objects(K)
    if not initial:
        return None
    return K.payload[initial[0]]


def limit(E: FinFunctor) -> Optional[Cone]:
    """A limit of E, returned as the universal cone of E^o in C^o (legs run vertex -> E(i) in C)."""
    return colimit(opposite_functor(E))


def is_universal(cone: Cone) -> bool:
    K = cone_category(cone.diagram)
    return is_initial(K, cone.name())


# ---------------------------------------------------------------- Karoubi closure

@dataclass(frozen=True)
class Projector:
    carrier: str
    endo: str


class Splitting(NamedTuple):
    image: str
    retraction: str
    section: str


def projectors(C: FinCat) -> list[Projector]:
    return [Projector(c, e) for c in C.objects for e in C.hom(c, c) if C.compose(e, e) == e]


class Karoubi(NamedTuple):
    category: FinCat
    embedding: FinFunctor


def karoubi_closure(C: FinCat) -> Karoubi:
    projs = projectors(C)
    payload = {mk(p.carrier, p.endo): p for p in projs}
    arrows, info = [], {}
    for p in projs:
        for q in projs:
            for f in C.hom(p.carrier, q.carrier):
                if C.compose(q.endo, f) == f and C.compose(f, p.endo) == f:
                    name = mk(f, p.endo, q.endo)
                    x, y = mk(p.carrier, p.endo), mk(q.carrier, q.endo)
                    arrows.append((name, x, y))
                    info[name] = (f, x, y)
                    payload[name] = f
    identity = {mk(p.carrier, p.endo): mk(p.endo, p.endo, p.endo) for p in projs}
    table = {}
    for f, (ff, a, b) in info.items():
        for g, (gg, b2, c) in info.items():
            if b2 == b:
                table[(g, f)] = mk(C.compose(gg, ff), payload[a].endo, payload[c].endo)
    K = make_category(f"P({C.name})", [mk(p.carrier, p.endo) for p in projs], arrows, identity, table, payload)
    eps = FinFunctor(
        C, K,
        {c: mk(c, C.id(c)) for c in C.objects},
        {m.name: mk(m.name, C.id(m.src), C.id(m.tgt)) for m in C.morphisms},
        "eps",
    )
    logger.debug(f"Karoubi closure of {C.name}: {len(K.objects)} objects, {len(K.morphisms)} morphisms")
    return Karoubi(K, eps)


def image_of_projector(C: FinCat, p: Projector) -> Optional[Splitting]:
    for d in C.objects:
        for r in C.hom(p.carrier, d):
            for s in C.hom(d, p.carrier):
                if C.compose(r, s) == C.id(d) and C.compose(s, r) == p.endo:
                    return Splitting(d, r, s)
    return None


def is_karoubi_closed(C: FinCat) -> bool:
    return all(image_of_projector(C, p) is not None for p in projectors(C))


def find_id_cone(C: FinCat) -> Optional[Cone]:
    return first_cone(identity_functor(C))


def check_karoubi_universal(C: FinCat, D: FinCat) -> dict:
    """For D Karoubi-closed: every F: C -> D extends along eps, uniquely up to isomorphism."""
    K, eps = karoubi_closure(C)
    results = []
    for F in iter_functors(C, D):
        fixed_obj = {eps.ob(a): F.ob(a) for a in C.objects}
        fixed_mor = {eps.mor(f): F.mor(f) for f in C.morphism_names}
        extensions = list(iter_functors(K, D, fixed_obj=fixed_obj, fixed_mor=fixed_mor))
        unique = bool(extensions) and all(naturally_isomorphic(extensions[0], G) for G in extensions[1:])
        results.append((F, len(extensions), unique))
    ok = all(unique for _, _, unique in results)
    return {"ok": ok, "functors": len(results), "extension_counts": [n for _, n, _ in results],
            "failures": [F for F, _, unique in results if not unique]}


# ---------------------------------------------------------------- cones on categories, joins

class Augmented(NamedTuple):
    category: FinCat
    embedding: FinFunctor
    new_object: str


def _augment(C: FinCat, terminal: bool) -> Augmented:
    o = fresh_name("o", C.objects)
    taken = set(C.morphism_names)
    id_o = fresh_name(f"id_{o}", taken)
    taken.add(id_o)
    bang = {}
    for c in C.objects:
        bang[c] = fresh_name(mk("!", c) if terminal else mk("?", c), taken)
        taken.add(bang[c])
    arrows = list(C.morphisms) + [Arrow(id_o, o, o)]
    arrows += [Arrow(bang[c], c, o) if terminal else Arrow(bang[c], o, c) for c in C.objects]
    identity = dict(C.identity)
    identity[o] = id_o
    table = dict(C.table)
    table[(id_o, id_o)] = id_o
    for c in C.objects:
        if terminal:
            table[(id_o, bang[c])] = bang[c]
            table[(bang[c], C.id(c))] = bang[c]
            for f in C.morphisms:
                if f.tgt == c:
                    table[(bang[c], f.name)] = bang[f.src]
        else:
            table[(bang[c], id_o)] = bang[c]
            table[(C.id(c), bang[c])] = bang[c]
            for f in C.morphisms:
                if f.src == c:
                    table[(f.name, bang[c])] = bang[f.tgt]
    suffix = "^>" if terminal else "^<"
    A = make_category(C.name + suffix, list(C.objects) + [o], arrows, identity, table, C.payload)
    return Augmented(A, inclusion(C, A), o)


def add_terminal(C: FinCat) -> Augmented:
    """C^>: a new object o with exactly one arrow c -> o from every object."""
    return _augment(C, terminal=True)


def add_initial(C: FinCat) -> Augmented:
    """C^<: a new object o with exactly one arrow o -> c to every object."""
    return _augment(C, terminal=False)


def join(C0: FinCat, C1: FinCat) -> FinCat:
    """C0 * C1 = (C0^> x C1^>) minus the corner o x o."""
    A0, A1 = add_terminal(C0), add_terminal(C1)
    P = product(A0.category, A1.category).category
    corner = mk(A0.new_object, A1.new_object)
    J = full_subcategory(P, [x for x in P.objects if x != corner], f"{C0.name}*{C1.name}")
    return J


def bicone_collapse(C0: FinCat, C1: FinCat) -> FinFunctor:
    """The left adjoint C0^> x C1^> -> (C0 x C1)^>: pairs with a cone-point component go to the new point."""
    A0, A1 = add_terminal(C0), add_terminal(C1)
    src = product(A0.category, A1.category).category
    P = product(C0, C1).category
    T = add_terminal(P)
    tgt, o = T.category, T.new_object
    obj_map = {}
    for x in src.objects:
        a, b = src.payload[x]
        obj_map[x] = mk(a, b) if a in C0.identity and b in C1.identity else o
    mor_map = {}
    for m in src.morphisms:
        f, g = src.payload[m.name]
        s, t = obj_map[m.src], obj_map[m.tgt]
        if t == o:
            mor_map[m.name] = tgt.id(o) if s == o else tgt.hom(s, o)[0]
        else:
            mor_map[m.name] = mk(f, g)
    return FinFunctor(src, tgt, obj_map, mor_map, "collapse")
