"""Truncated nerves, the last-vertex functor and the dimension-one replacement V(C)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple

from kancalc import logger
from kancalc.components.core import (
    FinCat,
    FinFunctor,
    compose_functors,
    iter_functors,
    iter_nat_transforms,
    make_category,
    opposite,
)
from kancalc.components.poset import Poset, as_category, le_name, make_poset
from kancalc.components.presheaf import (
    CONTRAVARIANT,
    COVARIANT,
    SetFunctor,
    check_localization_sample,
    elements,
    iter_set_maps,
    lim_set,
)
from kancalc.exception.exception import PreconditionFailed
from kancalc.utils.common import mk


def monotone_maps(m: int, k: int) -> Iterator[tuple]:
    """Monotone maps [m] -> [k] as value tuples."""
    return itertools.combinations_with_replacement(range(k + 1), m + 1)


def simplex_category(n: int) -> FinCat:
    """The truncation Delta_{<=n}; payload maps each morphism to (m, k, phi)."""
    objects = [f"[{k}]" for k in range(n + 1)]
    arrows, payload = [], {}
    name_of = {}
    for m in range(n + 1):
        for k in range(n + 1):
            for phi in monotone_maps(m, k):
                name = mk(f"[{m}]", f"[{k}]", *phi)
                arrows.append((name, f"[{m}]", f"[{k}]"))
                payload[name] = (m, k, phi)
                name_of[(m, k, phi)] = name
    identity = {f"[{k}]": name_of[(k, k, tuple(range(k + 1)))] for k in range(n + 1)}
    table = {}
    for f, (m, k, phi) in list(payload.items()):
        for g, (k2, l, psi) in list(payload.items()):
            if k2 == k:
                table[(g, f)] = name_of[(m, l, tuple(psi[j] for j in phi))]
    return make_category(f"Delta<={n}", objects, arrows, identity, table, payload)


@dataclass(frozen=True, eq=False)
class TruncatedNerve:
    cat: FinCat
    max_dim: int
    chains: Mapping[int, tuple]
    presheaf: SetFunctor
    lookup: Mapping[str, tuple]

    def chain(self, name: str) -> tuple:
        """(objects c0..ck, morphisms f1..fk) of a chain."""
        return self.lookup[name]

    def counts(self) -> list[int]:
        return [len(self.chains[k]) for k in range(self.max_dim + 1)]

    def structure_map(self, phi: tuple, k: int) -> dict:
        """The map N[k] -> N[m] induced by the monotone phi: [m] -> [k]."""
        name = mk(f"[{len(phi) - 1}]", f"[{k}]", *phi)
        return dict(self.presheaf.act(name))


def _chains(C: FinCat, k: int) -> Iterator[tuple]:
    def rec(objs, mors):
        if len(mors) == k:
            yield tuple(objs), tuple(mors)
            return
        for f in C.morphisms:
            if f.src == objs[-1]:
                yield from rec(objs + [f.tgt], mors + [f.name])

    for c in C.objects:
        yield from rec([c], [])


def chain_name(objs: tuple, mors: tuple) -> str:
    return mk(objs[0], *mors)


def _restrict(C: FinCat, objs: tuple, mors: tuple, phi: tuple) -> tuple:
    new_objs = tuple(objs[j] for j in phi)
    new_mors = []
    for a, b in zip(phi, phi[1:]):
        f = C.id(objs[a])
        for t in range(a, b):
            f = C.compose(mors[t], f)
        new_mors.append(f)
    return new_objs, tuple(new_mors)


def nerve(C: FinCat, max_dim: int) -> TruncatedNerve:
    """Chains of length <= max_dim as a presheaf on Delta_{<=max_dim}."""
    if max_dim < 1:
        raise PreconditionFailed(f"nerve truncation must be at least 1, got {max_dim}")
    D = simplex_category(max_dim)
    chains, lookup = {}, {}
    for k in range(max_dim + 1):
        level = []
        for objs, mors in _chains(C, k):
            name = chain_name(objs, mors)
            level.append(name)
            lookup[name] = (objs, mors)
        chains[k] = tuple(level)
    action = {}
    for f in D.morphism_names:
        m, k, phi = D.payload[f]
        action[f] = {x: chain_name(*_restrict(C, *lookup[x], phi)) for x in chains[k]}
    values = {f"[{k}]": chains[k] for k in range(max_dim + 1)}
    N = SetFunctor(D, CONTRAVARIANT, values, action, f"N({C.name})")
    logger.debug(f"nerve of {C.name} up to {max_dim}: {[len(chains[k]) for k in range(max_dim + 1)]}")
    return TruncatedNerve(C, max_dim, chains, N, lookup)


def check_simplicial_identities(N: TruncatedNerve) -> bool:
    """N(psi . phi) = N(phi) . N(psi) for all composable monotone maps within the truncation."""
    D = N.presheaf.base
    for g, f in D.composable_pairs():
        gf = D.compose(g, f)
        for x in N.presheaf.at(D.tgt(g)):
            if N.presheaf.apply(gf, x) != N.presheaf.apply(f, N.presheaf.apply(g, x)):
                return False
    return True


def nerve_map(F: FinFunctor, max_dim: int) -> dict:
    """Components of N(F) keyed by level object."""
    src = nerve(F.dom, max_dim)
    comps = {}
    for k in range(max_dim + 1):
        comps[f"[{k}]"] = {}
        for x in src.chains[k]:
            objs, mors = src.chain(x)
            comps[f"[{k}]"][x] = chain_name(tuple(F.ob(c) for c in objs), tuple(F.mor(f) for f in mors))
    return comps


def verify_nerve_fully_faithful(C: FinCat, D: FinCat, max_dim: int) -> dict:
    """Natural maps N(C) -> N(D) biject with functors C -> D via F -> N(F)."""
    NC, ND = nerve(C, max_dim), nerve(D, max_dim)
    maps = {a.key() for a in iter_set_maps(NC.presheaf, ND.presheaf)}
    images = set()
    for F in iter_functors(C, D):
        comps = nerve_map(F, max_dim)
        images.add(tuple(tuple(comps[c][x] for x in NC.presheaf.at(c)) for c in NC.presheaf.base.objects))
    return {"ok": images == maps, "functors": len(images), "maps": len(maps)}


def xi(C: FinCat, max_dim: int = 1) -> FinFunctor:
    """Delta N(C) -> C, a chain to its last object."""
    N = nerve(C, max_dim)
    el = elements(N.presheaf)
    D = N.presheaf.base
    obj_map, mor_map = {}, {}
    for o in el.cat.objects:
        _, x = el.cat.payload[o]
        obj_map[o] = N.chain(x)[0][-1]
    for m in el.cat.morphisms:
        _, tau = el.cat.payload[m.tgt]
        _, k, phi = D.payload[el.cat.payload[m.name]]
        objs, mors = N.chain(tau)
        f = C.id(objs[phi[-1]])
        for t in range(phi[-1], k):
            f = C.compose(mors[t], f)
        mor_map[m.name] = f
    return FinFunctor(el.cat, C, obj_map, mor_map, "xi")


# ---------------------------------------------------------------- V(C)

def v_point(layer, x) -> str:
    return mk(layer, x)


class VReplacement(NamedTuple):
    vposet: Poset
    category: FinCat
    q: FinFunctor
    q_perp: FinFunctor
    zero_part: Poset
    p: dict


def v_replacement(C: FinCat) -> VReplacement:
    """Points <0,c>, <1,c>, <o,f> with <0, source f> <= <o,f> >= <1, target f>.

    q sends <o,f> to the target of f and <0,source f> <= <o,f> to f; q_perp
    sends <o,f> to the source of f. The collapse layer is the wide subposet of
    arrows that q sends to identities; p is q on its points.
    """
    points, rel, payload = [], set(), {}
    for c in C.objects:
        for layer in (0, 1):
            points.append(v_point(layer, c))
            payload[v_point(layer, c)] = (layer, c)
    for m in C.morphisms:
        v = v_point("o", m.name)
        points.append(v)
        payload[v] = ("o", m.name)
        rel |= {(v_point(0, m.src), v), (v_point(1, m.tgt), v)}
    rel |= {(v, v) for v in points}
    V = make_poset(f"V({C.name})", points, rel, payload)
    Vc = as_category(V)

    def q_ob(v, perp):
        layer, x = payload[v]
        if layer == "o":
            return C.src(x) if perp else C.tgt(x)
        return x

    def q_mor(a, b, perp):
        if a == b:
            return C.id(q_ob(a, perp))
        layer, c = payload[a]
        _, f = payload[b]
        # <0,src f> <= <o,f> carries f under q, and <1,tgt f> <= <o,f> carries f under q_perp
        if (layer == 0) != perp:
            return f
        return C.id(c)

    q = FinFunctor(Vc, C, {v: q_ob(v, False) for v in points},
                   {le_name(a, b): q_mor(a, b, False) for a, b in V.leq}, "q")
    q_perp = FinFunctor(Vc, opposite(C), {v: q_ob(v, True) for v in points},
                        {le_name(a, b): q_mor(a, b, True) for a, b in V.leq}, "q_perp")
    collapse = {(a, b) for a, b in V.leq if C.is_identity(q.mor(le_name(a, b)))}
    zero = Poset(V.elements, frozenset(collapse), f"V({C.name})_0", payload)
    return VReplacement(V, Vc, q, q_perp, zero, {v: q.ob(v) for v in points})


def v_swap(C: FinCat) -> dict:
    """V(C) -> V(C^o), exchanging the 0 and 1 layers."""
    out = {}
    for c in C.objects:
        out[v_point(0, c)] = v_point(1, c)
        out[v_point(1, c)] = v_point(0, c)
    for f in C.morphism_names:
        out[v_point("o", f)] = v_point("o", f)
    return out


def check_v_swap(C: FinCat) -> bool:
    """The swap is an order isomorphism exchanging q and q_perp."""
    vc, vo = v_replacement(C), v_replacement(opposite(C))
    swap = v_swap(C)
    if {(swap[a], swap[b]) for a, b in vc.vposet.leq} != set(vo.vposet.leq):
        return False
    return all(vo.q.ob(swap[v]) == vc.q_perp.ob(v) and vo.q_perp.ob(swap[v]) == vc.q.ob(v)
               for v in vc.vposet.elements)


def hom_functor_on_v(vrep: VReplacement, F: FinFunctor, G: FinFunctor) -> SetFunctor:
    """v -> Hom_E(F(q_perp v), G(q v)), covariant on V(C)."""
    E = F.cod
    Vc = vrep.category
    qp, q = vrep.q_perp, vrep.q
    values = {v: E.hom(F.ob(qp.ob(v)), G.ob(q.ob(v))) for v in Vc.objects}
    action = {}
    for m in Vc.morphisms:
        pre, post = F.mor(qp.mor(m.name)), G.mor(q.mor(m.name))
        action[m.name] = {h: E.compose(post, E.compose(h, pre)) for h in values[m.src]}
    return SetFunctor(Vc, COVARIANT, values, action, "Hom(Fq_perp,Gq)")


def verify_v_localization(C: FinCat, E: FinCat) -> dict:
    """Nat(F, G) against the limit over V(C) of Hom(F q_perp, G q) for all F, G: C -> E, plus full faithfulness of q^*."""
    vrep = v_replacement(C)
    functors = list(iter_functors(C, E))
    pairs = 0
    for F in functors:
        for G in functors:
            H = hom_functor_on_v(vrep, F, G)
            lim = lim_set(H)
            image = set()
            for alpha in iter_nat_transforms(F, G):
                sec = {}
                for v in vrep.category.objects:
                    layer, x = vrep.vposet.payload[v]
                    sec[v] = alpha.at(x) if layer != "o" else E.compose(G.mor(x), alpha.at(C.src(x)))
                image.add(mk(*(sec[v] for v in vrep.category.objects)))
            pairs += 1
            if image != set(lim.elements):
                logger.warning(f"V-localization bijection fails for {C.name} into {E.name}")
                return {"ok": False, "pairs": pairs, "witness": (F.key(), G.key()), "fully_faithful": None}
    ff = check_localization_sample(vrep.q, [E])
    return {"ok": ff["ok"], "pairs": pairs, "witness": None, "fully_faithful": ff["ok"]}


def in_q_image(vrep: VReplacement, H: FinFunctor) -> bool:
    C = vrep.q.cod
    obj = {c: H.ob(v_point(0, c)) for c in C.objects}
    mor = {m.name: H.mor(le_name(v_point(0, m.src), v_point("o", m.name))) for m in C.morphisms}
    F = FinFunctor(C, H.cod, obj, mor)
    try:
        return _is_functor(F) and compose_functors(F, vrep.q).key() == H.key()
    except KeyError:
        return False


def _is_functor(F: FinFunctor) -> bool:
    C, D = F.dom, F.cod
    for m in C.morphisms:
        if (D.src(F.mor(m.name)), D.tgt(F.mor(m.name))) != (F.ob(m.src), F.ob(m.tgt)):
            return False
    return all(F.mor(C.compose(g, f)) == D.compose(F.mor(g), F.mor(f)) for g, f in C.composable_pairs())


def collapses_layer(vrep: VReplacement, H: FinFunctor) -> bool:
    """H restricted to the collapse layer factors through p."""
    E = H.cod
    return all(E.is_identity(H.mor(le_name(a, b))) for a, b in vrep.zero_part.leq)


def verify_v_square(C: FinCat, E: FinCat) -> dict:
    """Compare the image of q^* with the functors V(C) -> E whose collapse-layer restriction factors through p."""
    vrep = v_replacement(C)
    image = {compose_functors(F, vrep.q).key() for F in iter_functors(C, E)}
    fiber = []
    for H in iter_functors(vrep.category, E):
        if collapses_layer(vrep, H):
            fiber.append(H)
    witness = next((H for H in fiber if H.key() not in image), None)
    ok = witness is None and len(fiber) == len(image)
    if not ok:
        logger.warning(f"V-square for {C.name} into {E.name}: {len(image)} functors against {len(fiber)} fiber points")
    return {"ok": ok, "functors": len(image), "fiber": len(fiber), "witness": witness}
