"""Finite Ind-presentations: filtered diagrams J -> I, their hom sets and their presheaves."""
from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

from kancalc import logger
from kancalc.components.core import (
    FinCat,
    FinFunctor,
    compose_functors,
    fiber_product,
    full_subcategory,
    identity_functor,
    inclusion,
    karoubi_closure,
    lax_fiber_product,
)
from kancalc.components.filtered import (
    compact_witness_search,
    is_filtered_at_level,
    is_filtered_exact,
    karoubi_terminal,
)
from kancalc.components.poset import as_category, chain
from kancalc.components.presheaf import (
    COVARIANT,
    CONTRAVARIANT,
    SetFunctor,
    SetNatMap,
    check_cofinal,
    colim_set,
    elements,
    iso_set_functors,
    iter_set_functors,
    iter_set_maps,
    kan_left,
    lim_set,
    point_functor,
)
from kancalc.exception.exception import PreconditionFailed, VarianceMismatch


class IndPresentation(NamedTuple):
    index: FinCat
    diagram: FinFunctor

    @property
    def base(self) -> FinCat:
        return self.diagram.cod


def ind_presentation(diagram: FinFunctor) -> IndPresentation:
    if not is_filtered_exact(diagram.dom):
        raise PreconditionFailed(f"index {diagram.dom.name} of {diagram.name} is not filtered")
    return IndPresentation(diagram.dom, diagram)


class IndHom(NamedTuple):
    elements: tuple
    sections: dict
    colims: dict


def ind_hom(A: IndPresentation, B: IndPresentation) -> IndHom:
    """lim over j of colim over j' of Hom(A(j), B(j'))."""
    if A.base != B.base:
        raise PreconditionFailed("Ind-presentations over different categories")
    I, J, J2 = A.base, A.index, B.index
    a, b = A.diagram, B.diagram
    colims = {}
    for j in J.objects:
        W = SetFunctor(
            J2, COVARIANT,
            {j2: I.hom(a.ob(j), b.ob(j2)) for j2 in J2.objects},
            {g.name: {h: I.compose(b.mor(g.name), h) for h in I.hom(a.ob(j), b.ob(g.src))} for g in J2.morphisms},
            f"Hom({a.ob(j)},B)",
        )
        colims[j] = colim_set(W)
    action = {}
    for f in J.morphisms:
        action[f.name] = {
            label: colims[f.src].proj[(j2, I.compose(h, a.mor(f.name)))]
            for label, ((j2, h), *_) in colims[f.tgt].members.items()
        }
    H = SetFunctor(J, CONTRAVARIANT, {j: colims[j].elements for j in J.objects}, action, "ind_hom")
    lim = lim_set(H)
    return IndHom(lim.elements, lim.sections, colims)


def _lookup(hom: IndHom, sec: dict) -> str:
    target = tuple(sorted(sec.items()))
    for label, s in hom.sections.items():
        if tuple(sorted(s.items())) == target:
            return label
    raise KeyError(f"no element of the hom set restricts to {sec}")


def ind_identity(A: IndPresentation) -> str:
    hom = ind_hom(A, A)
    I = A.base
    sec = {j: hom.colims[j].proj[(j, I.id(A.diagram.ob(j)))] for j in A.index.objects}
    return _lookup(hom, sec)


def ind_compose(A: IndPresentation, B: IndPresentation, C: IndPresentation, psi: str, phi: str,
                homs: dict = None) -> str:
    """psi after phi, for phi in ind_hom(A, B) and psi in ind_hom(B, C)."""
    homs = homs or {}
    hAB = homs.get("AB") or ind_hom(A, B)
    hBC = homs.get("BC") or ind_hom(B, C)
    hAC = homs.get("AC") or ind_hom(A, C)
    I = A.base
    sec = {}
    for j in A.index.objects:
        j2, h = hAB.colims[j].members[hAB.sections[phi][j]][0]
        j3, k = hBC.colims[j2].members[hBC.sections[psi][j2]][0]
        sec[j] = hAC.colims[j].proj[(j3, I.compose(k, h))]
    return _lookup(hAC, sec)


def check_ind_hom_associative(presentations: Sequence[IndPresentation]) -> dict:
    """Associativity and unit laws of ind_compose over every triple of the given presentations."""
    P = list(presentations)
    homs = {(x, y): ind_hom(P[x], P[y]) for x in range(len(P)) for y in range(len(P))}
    ids = {x: ind_identity(P[x]) for x in range(len(P))}
    checked = 0

    def comp(x, y, z, psi, phi):
        return ind_compose(P[x], P[y], P[z], psi, phi,
                           {"AB": homs[(x, y)], "BC": homs[(y, z)], "AC": homs[(x, z)]})

    for x in range(len(P)):
        for y in range(len(P)):
            for phi in homs[(x, y)].elements:
                checked += 1
                if comp(x, y, y, ids[y], phi) != phi or comp(x, x, y, phi, ids[x]) != phi:
                    return {"ok": False, "checked": checked, "witness": ("unit", x, y, phi)}
                for z in range(len(P)):
                    for psi in homs[(y, z)].elements:
                        for w in range(len(P)):
                            for chi in homs[(z, w)].elements:
                                checked += 1
                                left = comp(x, z, w, chi, comp(x, y, z, psi, phi))
                                right = comp(x, y, w, comp(y, z, w, chi, psi), phi)
                                if left != right:
                                    return {"ok": False, "checked": checked, "witness": (x, y, z, w)}
    return {"ok": True, "checked": checked, "witness": None}


# ---------------------------------------------------------------- presheaves

def presheaf_of(A: IndPresentation) -> SetFunctor:
    """c -> colim_j Hom(c, A(j)), the left Kan extension of the point along A."""
    K = kan_left(A.diagram, point_functor(A.index)).functor
    return SetFunctor(K.base, K.variance, K.values, K.action, f"colim Y({A.diagram.name})")


def check_presheaf_of_fully_faithful(A: IndPresentation, B: IndPresentation) -> dict:
    """ind_hom(A, B) -> hom(presheaf_of A, presheaf_of B) as an explicit bijection."""
    I = A.base
    KA = kan_left(A.diagram, point_functor(A.index))
    KB = kan_left(B.diagram, point_functor(B.index))
    hom = ind_hom(A, B)
    images = {}
    for label, sec in hom.sections.items():
        comps = {}
        for c in I.objects:
            comps[c] = {}
            for x, (j, h, star) in KA.reps[c].items():
                j2, k = hom.colims[j].members[sec[j]][0]
                comps[c][x] = KB.classify(c, (j2, I.compose(k, h), star))
        images[label] = SetNatMap(KA.functor, KB.functor, comps).key()
    maps = {phi.key() for phi in iter_set_maps(KA.functor, KB.functor)}
    ok = len(set(images.values())) == len(images) and set(images.values()) == maps
    if not ok:
        logger.warning(f"presheaf_of is not fully faithful on {A.diagram.name}, {B.diagram.name}")
    return {"ok": ok, "ind_hom": len(images), "presheaf_hom": len(maps)}


def presheaf_iso(A: IndPresentation, B: IndPresentation) -> Optional[SetNatMap]:
    """Equality of Ind-objects: an isomorphism of their presheaves, or None."""
    return iso_set_functors(presheaf_of(A), presheaf_of(B))


class IndRecognition(NamedTuple):
    ok: bool
    presentation: Optional[IndPresentation]
    iso: Optional[SetNatMap]
    witness: Optional[FinFunctor]


def is_ind_object(X: SetFunctor) -> IndRecognition:
    """X is an Ind-object iff its category of elements is filtered; then X is the colimit over it."""
    if not X.is_presheaf:
        raise VarianceMismatch(f"{X.name} must be a presheaf")
    el = elements(X)
    if is_filtered_exact(el.cat):
        A = IndPresentation(el.cat, el.proj)
        iso = iso_set_functors(presheaf_of(A), X)
        if iso is None:
            logger.warning(f"{X.name} is not the colimit of representables over its elements")
        return IndRecognition(iso is not None, A, iso, None)
    _, witness = is_filtered_at_level(el.cat, 3)
    if witness is None:
        from kancalc.components.nerve import v_replacement

        witness = compose_functors(identity_functor(el.cat), v_replacement(el.cat).q)
    return IndRecognition(False, None, None, witness)


# ---------------------------------------------------------------- Karoubi closure

def split_presheaf(I: FinCat, c: str, p: str) -> SetFunctor:
    """The image of p acting on Y(c): d -> {h: d -> c with p h = h}."""
    values = {d: tuple(h for h in I.hom(d, c) if I.compose(p, h) == h) for d in I.objects}
    action = {m.name: {h: I.compose(h, m.name) for h in values[m.tgt]} for m in I.morphisms}
    return SetFunctor(I, CONTRAVARIANT, values, action, f"Y({c},{p})")


def karoubi_identification(I: FinCat, bound: int = 2, budget: int = None) -> dict:
    """Karoubi closure of I against Ind-objects that are retracts of representables, over a bounded sweep."""
    K = karoubi_closure(I).category
    images = {}
    for o in K.objects:
        p = K.payload[o]
        images[o] = split_presheaf(I, p.carrier, p.endo)

    fully_faithful = True
    for x in K.objects:
        for y in K.objects:
            maps = set()
            for m in K.hom(x, y):
                f = K.payload[m]
                X, Y = images[x], images[y]
                maps.add(SetNatMap(X, Y, {d: {h: I.compose(f, h) for h in X.at(d)} for d in I.objects}).key())
            nat = {phi.key() for phi in iter_set_maps(images[x], images[y])}
            if len(maps) != len(K.hom(x, y)) or maps != nat:
                fully_faithful = False

    classes = []
    for o in K.objects:
        if not any(iso_set_functors(images[o], images[r]) is not None for r in classes):
            classes.append(o)

    swept, image_mismatches, conjecture_mismatches = 0, [], []
    for X in iter_set_functors(I, bound, CONTRAVARIANT, budget=budget):
        swept += 1
        in_image = any(iso_set_functors(X, images[r]) is not None for r in classes)
        witness = compact_witness_search(X, 2) if is_ind_object(X).ok else None
        characterized = witness is not None and len(witness.shape) == 1
        if in_image != characterized:
            image_mismatches.append(X.name)
        terminal = karoubi_terminal(elements(X).cat) is not None
        if in_image != terminal:
            conjecture_mismatches.append(X.name)
    if image_mismatches or conjecture_mismatches:
        logger.warning(f"Karoubi identification on {I.name}: {image_mismatches} / {conjecture_mismatches}")
    return {
        "ok": fully_faithful and not image_mismatches,
        "fully_faithful": fully_faithful,
        "classes": classes,
        "swept": swept,
        "bound": bound,
        "image_mismatches": image_mismatches,
        "conjecture_mismatches": conjecture_mismatches,
    }


# ---------------------------------------------------------------- products of Ind-objects

def pullback_failure_demo(N: int) -> dict:
    """Even and odd points of [N]: empty strict fiber product, nonempty lax one, cofinality by top parity."""
    if N < 2:
        raise PreconditionFailed(f"truncation must be at least 2, got {N}")
    J = as_category(chain(N))
    evens = full_subcategory(J, [str(k) for k in range(0, N + 1, 2)], "even")
    odds = full_subcategory(J, [str(k) for k in range(1, N + 1, 2)], "odd")
    e, o = inclusion(evens, J), inclusion(odds, J)
    strict = fiber_product(e, o).category
    lax = lax_fiber_product(e, o).category
    even_cofinal, _ = check_cofinal(e)
    odd_cofinal, _ = check_cofinal(o)
    ok = (not strict.objects and bool(lax.objects)
          and even_cofinal == (N % 2 == 0) and odd_cofinal == (N % 2 == 1))
    return {
        "ok": ok,
        "N": N,
        "strict_objects": len(strict.objects),
        "lax_objects": len(lax.objects),
        "even_cofinal": even_cofinal,
        "odd_cofinal": odd_cofinal,
    }
