"""Strict Cat-valued diagrams on finite posets and the categories built from them.

A diagram D sends j to a category D(j) and j <= j' to a functor
D(j') -> D(j). Its two Grothendieck constructions have objects <j, c> with
c in D(j); a morphism <j,c> -> <j',c'> over j <= j' is g: c -> D(j<=j')(c')
in the arrow version and g: D(j<=j')(c') -> c in the co-lax version.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from kancalc import logger
from kancalc.components.core import (
    FinCat,
    FinFunctor,
    comma_category,
    compose_functors,
    discrete,
    identity_functor,
    iter_functors,
    lax_fiber_product,
    make_category,
    opposite,
    opposite_functor,
    product,
    validate_functor,
)
from kancalc.components.filtered import functor_category, is_filtered_exact
from kancalc.components.poset import Poset, as_category, chain, le_name, try_as_poset
from kancalc.components.presheaf import (
    CONTRAVARIANT,
    SetFunctor,
    SetNatMap,
    elements,
    iso_set_functors,
    iter_set_maps,
    kan_left,
    lim_set,
    point_functor,
)
from kancalc.exception.exception import FunctorValidationException, PreconditionFailed
from kancalc.utils.common import mk


@dataclass(frozen=True, eq=False)
class CatDiagram:
    index: Poset
    fibers: Mapping[str, FinCat]
    transitions: Mapping[tuple, FinFunctor]
    name: str = "D"
    payload: dict = field(default_factory=dict, repr=False)

    def at(self, j: str) -> FinCat:
        return self.fibers[j]

    def act(self, j: str, j2: str) -> FinFunctor:
        """D(j <= j2): D(j2) -> D(j)."""
        return self.transitions[(j, j2)]

    def __repr__(self):
        return f"CatDiagram({self.name!r} over {self.index.name})"


def validate_diagram(D: CatDiagram) -> CatDiagram:
    J = D.index
    for j in J.elements:
        if j not in D.fibers:
            raise FunctorValidationException(f"{D.name} has no category at {j}")
    for a, b in J.leq:
        F = D.transitions.get((a, b))
        if F is None:
            raise FunctorValidationException(f"{D.name} has no transition for {a} <= {b}")
        if F.dom != D.at(b) or F.cod != D.at(a):
            raise FunctorValidationException(f"{D.name}({a}<={b}) must go from D({b}) to D({a})")
        validate_functor(F)
        if a == b and F.key() != identity_functor(D.at(a)).key():
            raise FunctorValidationException(f"{D.name} does not send the identity of {a} to an identity functor")
    for a, b in J.leq:
        for c in J.up(b):
            # strict: D(a<=b) . D(b<=c) = D(a<=c)
            if compose_functors(D.act(a, b), D.act(b, c)).key() != D.act(a, c).key():
                raise FunctorValidationException(f"{D.name} is not strict at {a} <= {b} <= {c}")
    return D


def constant_diagram(J: Poset, C: FinCat, name: str = None) -> CatDiagram:
    idC = identity_functor(C)
    return CatDiagram(J, {j: C for j in J.elements}, {(a, b): idC for a, b in J.leq}, name or f"const_{C.name}")


def from_functor(gamma: FinFunctor) -> CatDiagram:
    """gamma: C0 -> C1 as a diagram over [1]: D(1) = C0, D(0) = C1 and D(0<=1) = gamma."""
    J = chain(1)
    fibers = {"0": gamma.cod, "1": gamma.dom}
    transitions = {("0", "0"): identity_functor(gamma.cod), ("1", "1"): identity_functor(gamma.dom),
                   ("0", "1"): gamma}
    return CatDiagram(J, fibers, transitions, f"[{gamma.name}]")


def from_set_functor(X: SetFunctor) -> CatDiagram:
    """A presheaf on a poset as a diagram of discrete categories."""
    if not X.is_presheaf:
        raise PreconditionFailed(f"{X.name} must be a presheaf")
    J = try_as_poset(X.base)
    if J is None:
        raise PreconditionFailed(f"{X.base.name} is not a poset")
    fibers = {j: discrete(X.at(j), f"{X.name}({j})") for j in J.elements}
    transitions = {}
    for a, b in J.leq:
        fn = X.act(X.base.hom(a, b)[0])
        transitions[(a, b)] = FinFunctor(fibers[b], fibers[a], dict(fn),
                                         {f"id_{x}": f"id_{y}" for x, y in fn.items()}, f"{X.name}({a}<={b})")
    return CatDiagram(J, fibers, transitions, X.name)


# ---------------------------------------------------------------- Grothendieck constructions

class Grothendieck(NamedTuple):
    category: FinCat
    proj: FinFunctor


def _grothendieck(D: CatDiagram, colax: bool) -> Grothendieck:
    J = D.index
    base = as_category(J)
    objects, payload = [], {}
    for j in J.elements:
        for c in D.at(j).objects:
            objects.append(mk(j, c))
            payload[mk(j, c)] = (j, c)
    arrows, info = [], {}
    for a, b in J.leq:
        F, C = D.act(a, b), D.at(a)
        for c in C.objects:
            for c2 in D.at(b).objects:
                hom = C.hom(F.ob(c2), c) if colax else C.hom(c, F.ob(c2))
                for g in hom:
                    name = mk(le_name(a, b), g, c2)
                    arrows.append((name, mk(a, c), mk(b, c2)))
                    info[name] = (a, b, g, c2)
                    payload[name] = (a, b, g)
    identity = {mk(j, c): mk(le_name(j, j), D.at(j).id(c), c) for j, c in (payload[o] for o in objects)}
    src = {n: s for n, s, _ in arrows}
    tgt = {n: t for n, _, t in arrows}
    table = {}
    for f, (a, b, g, c2) in info.items():
        for h, (b2, e, k, c3) in info.items():
            if src[h] != tgt[f]:
                continue
            C = D.at(a)
            lifted = D.act(a, b).mor(k)
            comp = C.compose(g, lifted) if colax else C.compose(lifted, g)
            table[(h, f)] = mk(le_name(a, e), comp, c3)
    label = f"<-{J.name}{D.name}" if colax else f"->{J.name}{D.name}"
    T = make_category(label, objects, arrows, identity, table, payload)
    proj = FinFunctor(T, base, {o: payload[o][0] for o in objects},
                      {n: le_name(a, b) for n, (a, b, _, _) in info.items()}, "pi")
    logger.debug(f"{label}: {len(objects)} objects, {len(arrows)} morphisms")
    return Grothendieck(T, proj)


def groth_arrow(D: CatDiagram) -> Grothendieck:
    return _grothendieck(D, colax=False)


def groth_colax(D: CatDiagram) -> Grothendieck:
    return _grothendieck(D, colax=True)


class SectionCat(NamedTuple):
    total: FinCat
    base: FinCat
    sections: FinCat


def sections(proj: FinFunctor, prefix: str = "s") -> SectionCat:
    """Functors s with proj . s = id, and the natural transformations between them lying over identities."""
    T, B = proj.dom, proj.cod
    idB = identity_functor(B).key()
    found = [s for s in iter_functors(B, T) if compose_functors(proj, s).key() == idB]

    def vertical(t):
        return all(B.is_identity(proj.mor(t.at(b))) for b in B.objects)

    S, _ = functor_category(B, T, found, f"Sec({B.name},{T.name})", prefix, keep=vertical)
    return SectionCat(T, B, S)


def lax_limit(D: CatDiagram) -> SectionCat:
    return sections(groth_arrow(D).proj)


def colax_limit(D: CatDiagram) -> SectionCat:
    """Sections of the opposite of the co-lax construction over the opposite index."""
    return sections(opposite_functor(groth_colax(D).proj))


# ---------------------------------------------------------------- identifications

def _bijective(F: FinFunctor) -> bool:
    return (len(set(F.obj_map.values())) == len(F.cod.objects) == len(F.dom.objects)
            and len(set(F.mor_map.values())) == len(F.cod.morphisms) == len(F.dom.morphisms))


def _is_iso(F: FinFunctor) -> bool:
    try:
        validate_functor(F)
    except FunctorValidationException:
        return False
    return _bijective(F)


def _fiber_value(sec: FinFunctor, j: str) -> str:
    return sec.cod.payload[sec.ob(j)][1]


def comma_identification(gamma: FinFunctor) -> dict:
    """Over [1] the lax limit is the right comma C1 \\ C0 and the co-lax limit the left comma C0 / C1, on the nose."""
    D = from_functor(gamma)
    C1 = gamma.cod
    results = {}
    for kind, S, comma in (("lax", lax_limit(D).sections, comma_category(gamma, "right").category),
                           ("colax", colax_limit(D).sections, comma_category(gamma, "left").category)):
        obj_map, mor_map = {}, {}
        for o in S.objects:
            s = S.payload[o]
            T = s.cod
            b, a = _fiber_value(s, "0"), _fiber_value(s, "1")
            g = T.payload[s.mor(le_name("0", "1"))][2]
            obj_map[o] = mk(b, a, g) if kind == "lax" else mk(a, b, g)
        for m in S.morphisms:
            t = S.payload[m.name]
            T = t.src.cod
            u, v = T.payload[t.at("0")][2], T.payload[t.at("1")][2]
            _, _, g = T.payload[t.src.mor(le_name("0", "1"))]
            _, _, g2 = T.payload[t.tgt.mor(le_name("0", "1"))]
            if kind == "lax":
                mor_map[m.name] = mk(u, v, g, g2)
            else:
                mor_map[m.name] = mk(v, u, g, g2)
        F = FinFunctor(S, comma, obj_map, mor_map, f"{kind}~comma")
        try:
            results[kind] = _is_iso(F)
        except KeyError:
            results[kind] = False
    ok = all(results.values())
    if not ok:
        logger.warning(f"comma identification fails for {gamma.name}: {results}")
    return {"ok": ok, **results}


def set_degeneration(X: SetFunctor) -> dict:
    """For a presheaf on a poset both constructions are its elements and both limits are lim_set."""
    D = from_set_functor(X)
    el = elements(X).cat
    out = {}
    for kind, G in (("arrow", groth_arrow(D)), ("colax", groth_colax(D))):
        T = G.category
        mor_map = {}
        for n in T.morphism_names:
            a, b, _ = T.payload[n]
            x, y = T.payload[T.src(n)][1], T.payload[T.tgt(n)][1]
            mor_map[n] = mk(X.base.hom(a, b)[0], x, y)
        out[kind] = _is_iso(FinFunctor(T, el, {o: o for o in T.objects}, mor_map, "to_elements"))
    lim = lim_set(X)
    targets = {tuple(sorted(sec.items())) for sec in lim.sections.values()}
    for kind, S in (("lax_limit", lax_limit(D).sections), ("colax_limit", colax_limit(D).sections)):
        values = {tuple(sorted((j, _fiber_value(S.payload[o], j)) for j in S.payload[o].dom.objects))
                  for o in S.objects}
        out[kind] = (len(S.morphisms) == len(S.objects) and len(values) == len(S.objects) and values == targets)
    ok = all(out.values())
    if not ok:
        logger.warning(f"Set-valued degeneration fails for {X.name}: {out}")
    return {"ok": ok, **out}


# ---------------------------------------------------------------- twisted arrows

class Twisted(NamedTuple):
    category: FinCat
    hom: SetFunctor
    elements_iso: bool


def hom_pairing(I: FinCat) -> SetFunctor:
    """(i, i') -> Hom(i, i') as a presheaf on I x I^o."""
    P = product(I, opposite(I)).category
    values = {mk(i, i2): I.hom(i, i2) for i in I.objects for i2 in I.objects}
    action = {}
    for m in P.morphisms:
        d, u = P.payload[m.name]
        tgt_i, tgt_i2 = P.payload[m.tgt]
        action[m.name] = {f1: I.compose(u, I.compose(f1, d)) for f1 in I.hom(tgt_i, tgt_i2)}
    return SetFunctor(P, CONTRAVARIANT, values, action, "Hom")


def twisted_arrows(I: FinCat) -> Twisted:
    """tw(I): objects are morphisms; (d, u): f0 -> f1 whenever f0 = u . f1 . d."""
    objects = list(I.morphism_names)
    arrows, info = [], {}
    for f0 in objects:
        i0, i0p = I.src(f0), I.tgt(f0)
        for f1 in objects:
            i1, i1p = I.src(f1), I.tgt(f1)
            for d in I.hom(i0, i1):
                for u in I.hom(i1p, i0p):
                    if I.compose(u, I.compose(f1, d)) == f0:
                        name = mk(d, u, f1)
                        arrows.append((name, f0, f1))
                        info[name] = (d, u)
    identity = {f: mk(I.id(I.src(f)), I.id(I.tgt(f)), f) for f in objects}
    src = {n: s for n, s, _ in arrows}
    tgt = {n: t for n, _, t in arrows}
    table = {}
    for f, (d, u) in info.items():
        for g, (d2, u2) in info.items():
            if src[g] == tgt[f]:
                table[(g, f)] = mk(I.compose(d2, d), I.compose(u, u2), tgt[g])
    payload = {n: info[n] for n in info}
    tw = make_category(f"tw({I.name})", objects, arrows, identity, table, payload)

    hom = hom_pairing(I)
    el = elements(hom).cat
    obj_map = {f: mk(mk(I.src(f), I.tgt(f)), f) for f in objects}
    mor_map = {n: mk(mk(d, u), src[n], tgt[n]) for n, (d, u) in info.items()}
    try:
        agree = _is_iso(FinFunctor(tw, el, obj_map, mor_map, "tw~elements"))
    except KeyError:
        agree = False
    if not agree:
        logger.warning(f"tw({I.name}) differs from the elements of the Hom pairing")
    return Twisted(tw, hom, agree)


# ---------------------------------------------------------------- relative Yoneda

class RelativeYoneda(NamedTuple):
    presheaf: SetFunctor
    kan: SetFunctor
    iso: object

    @property
    def ok(self) -> bool:
        return self.iso is not None


def _section_data(D: CatDiagram, s: FinFunctor) -> tuple[dict, dict]:
    """Object s(j) in D(j) and sigma_{j<=j'}: s(j) -> D(j<=j')(s(j'))."""
    T = s.cod
    obj = {j: T.payload[s.ob(j)][1] for j in D.index.elements}
    sigma = {(a, b): T.payload[s.mor(le_name(a, b))][2] for a, b in D.index.leq}
    return obj, sigma


def relative_yoneda_presheaf(D: CatDiagram, s: FinFunctor, colax: Grothendieck = None) -> SetFunctor:
    """<j, c> -> Hom_{D(j)}(s(j), c) on the co-lax construction."""
    G = colax or groth_colax(D)
    T = G.category
    obj, sigma = _section_data(D, s)
    values = {o: D.at(T.payload[o][0]).hom(obj[T.payload[o][0]], T.payload[o][1]) for o in T.objects}
    action = {}
    for m in T.morphisms:
        a, b, g = T.payload[m.name]
        C, F = D.at(a), D.act(a, b)
        action[m.name] = {k: C.compose(g, C.compose(F.mor(k), sigma[(a, b)])) for k in values[m.tgt]}
    return SetFunctor(T, CONTRAVARIANT, values, action, f"Y({s.name})")


def tw_section(D: CatDiagram, s: FinFunctor, colax: Grothendieck = None) -> FinFunctor:
    """tw(J) -> <-JD, t: j -> j' to <j, D(t) s(j')>."""
    G = colax or groth_colax(D)
    J = as_category(D.index)
    tw = twisted_arrows(J).category
    obj, sigma = _section_data(D, s)
    pairs = J.payload
    obj_map = {}
    for t in tw.objects:
        a, b = pairs[t]
        obj_map[t] = mk(a, D.act(a, b).ob(obj[b]))
    mor_map = {}
    for n in tw.morphism_names:
        d, u = tw.payload[n]
        i0, i1 = pairs[d]
        i1p, i0p = pairs[u]
        # D(t1 . d) applied to sigma_u
        g = D.act(i0, i1p).mor(sigma[(i1p, i0p)])
        mor_map[n] = mk(le_name(i0, i1), g, D.act(i1, i1p).ob(obj[i1p]))
    return FinFunctor(tw, G.category, obj_map, mor_map, f"tw({s.name})")


def relative_yoneda(D: CatDiagram, s: FinFunctor) -> RelativeYoneda:
    """The relative Yoneda presheaf of a lax section, certified isomorphic to tw(s)_! pt."""
    G = groth_colax(D)
    Y = relative_yoneda_presheaf(D, s, G)
    g = tw_section(D, s, G)
    K = kan_left(g, point_functor(g.dom)).functor
    iso = iso_set_functors(Y, K)
    if iso is None:
        logger.warning(f"relative Yoneda of {s.name} is not tw(s)_!pt")
    return RelativeYoneda(Y, K, iso)


# ---------------------------------------------------------------- lemma checks

def check_dim1_le(D: CatDiagram) -> dict:
    """Filtered fibers give a filtered co-lax limit."""
    for j in D.index.elements:
        if not is_filtered_exact(D.at(j)):
            raise PreconditionFailed(f"fiber {D.at(j).name} at {j} is not filtered")
    S = colax_limit(D).sections
    filtered = is_filtered_exact(S)
    if not filtered:
        logger.warning(f"co-lax limit of {D.name} is not filtered")
    return {"ok": filtered, "sections": len(S.objects)}


def _yoneda_map(D: CatDiagram, Y_src: SetFunctor, Y_tgt: SetFunctor, comps: dict) -> SetNatMap:
    """Y(alpha): Y(s') -> Y(s), k -> k . a_j."""
    T = Y_src.base
    out = {}
    for o in T.objects:
        j, _ = T.payload[o]
        C = D.at(j)
        out[o] = {k: C.compose(k, comps[j]) for k in Y_src.at(o)}
    return SetNatMap(Y_src, Y_tgt, out)


def check_lax_ind_shadow(D: CatDiagram) -> dict:
    """The relative Yoneda embedding is fully faithful on the lax limit."""
    G = groth_colax(D)
    S = lax_limit(D).sections
    ys = {o: relative_yoneda_presheaf(D, S.payload[o], G) for o in S.objects}
    pairs = 0
    for a in S.objects:
        for b in S.objects:
            pairs += 1
            images = set()
            for m in S.hom(a, b):
                t = S.payload[m]
                T = t.src.cod
                comps = {j: T.payload[t.at(j)][2] for j in D.index.elements}
                images.add(_yoneda_map(D, ys[b], ys[a], comps).key())
            maps = {phi.key() for phi in iter_set_maps(ys[b], ys[a])}
            if len(images) != len(S.hom(a, b)) or images != maps:
                logger.warning(f"relative Yoneda is not fully faithful at {a}, {b} in {D.name}")
                return {"ok": False, "pairs": pairs, "witness": (a, b)}
    return {"ok": True, "pairs": pairs, "witness": None}


def lax_product_presheaf(g0: FinFunctor, g1: FinFunctor, X0: SetFunctor, X1: SetFunctor,
                         alpha: SetNatMap = None) -> SetFunctor:
    """<c0, c1, a> -> {(x0, x1) : alpha(eta0 x0) = (g1_! X1)(a)(eta1 x1)} on the lax fiber product."""
    L = lax_fiber_product(g0, g1).category
    K0, K1 = kan_left(g0, X0), kan_left(g1, X1)
    if alpha is None:
        alpha = next(iter_set_maps(K0.functor, K1.functor), None)
        if alpha is None:
            raise PreconditionFailed(f"no map {K0.functor.name} -> {K1.functor.name}")
    values = {}
    for o in L.objects:
        c0, c1, a = L.payload[o]
        left = {x0: alpha.components[g0.ob(c0)][K0.unit.components[c0][x0]] for x0 in X0.at(c0)}
        right = {x1: K1.functor.apply(a, K1.unit.components[c1][x1]) for x1 in X1.at(c1)}
        values[o] = tuple(mk(x0, x1) for x0 in X0.at(c0) for x1 in X1.at(c1) if left[x0] == right[x1])
    action = {}
    for m in L.morphisms:
        f0, f1 = L.payload[m.name]
        c0, c1, _ = L.payload[m.tgt]
        action[m.name] = {mk(x0, x1): mk(X0.apply(f0, x0), X1.apply(f1, x1))
                          for x0 in X0.at(c0) for x1 in X1.at(c1) if mk(x0, x1) in values[m.tgt]}
    return SetFunctor(L, CONTRAVARIANT, values, action, f"{X0.name}x->{X1.name}")


def check_lax_product_shadow(g0: FinFunctor, g1: FinFunctor, X0: SetFunctor, X1: SetFunctor,
                             alpha: SetNatMap = None) -> dict:
    """Presheaves with filtered elements induce a lax-product presheaf with filtered elements."""
    hypothesis = is_filtered_exact(elements(X0).cat) and is_filtered_exact(elements(X1).cat)
    Z = lax_product_presheaf(g0, g1, X0, X1, alpha)
    filtered = is_filtered_exact(elements(Z).cat)
    ok = filtered or not hypothesis
    if not ok:
        logger.warning(f"elements of {Z.name} are not filtered")
    return {"ok": ok, "hypothesis": hypothesis, "filtered": filtered, "size": Z.size()}
