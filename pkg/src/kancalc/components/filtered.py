"""Filteredness and cofinality as finite decision procedures, with the lemma checks built on them.

For a finite category the exact criterion is the existence of a cone over
the identity functor. Level checks replace a cardinal bound by a number n:
cones are searched for every diagram whose shape is a poset of dimension at
most 1 with fewer than n elements. Pulling the identity back along
V(C) -> C gives such a diagram with 2|Ob C| + |Mor C| points, so from that
level on the two criteria agree.
"""
from __future__ import annotations

from typing import Iterator, NamedTuple, Optional

from kancalc import logger
from kancalc.components.core import (
    Cone,
    FinCat,
    FinFunctor,
    comma_category,
    comma_fiber,
    compose_functors,
    constant_functor,
    first_cone,
    full_subcategory,
    identity_functor,
    inclusion,
    iter_functors,
    iter_nat_transforms,
    karoubi_closure,
    make_category,
    product,
    terminal_objects,
)
from kancalc.components.poset import as_category, enumerate_posets
from kancalc.components.presheaf import (
    COVARIANT,
    SetFunctor,
    SetNatMap,
    check_cofinal,
    colim_set,
    compose_maps,
    elements,
    identity_map,
    iter_set_maps,
    kan_left,
    lim_set,
    point_functor,
    pullback,
)
from kancalc.entity.artifact_entity import CompactWitness, FilterReport
from kancalc.exception.exception import BoundExceeded, PreconditionFailed, VarianceMismatch
from kancalc.utils.common import mk

SHAPES = ("dim1", "posets", "categories")


def find_cone(E: FinFunctor) -> Optional[Cone]:
    return first_cone(E)


def karoubi_terminal(C: FinCat) -> Optional[str]:
    """A terminal object of the Karoubi closure, the second exact criterion."""
    found = terminal_objects(karoubi_closure(C).category)
    return found[0] if found else None


def is_filtered_exact(C: FinCat, cross_check: bool = False) -> bool:
    filtered = find_cone(identity_functor(C)) is not None
    if cross_check:
        other = karoubi_terminal(C) is not None
        if other != filtered:
            logger.warning(f"id-cone ({filtered}) and Karoubi terminal object ({other}) disagree on {C.name}")
    return filtered


def reduction_level(C: FinCat) -> int:
    """Level from which the level check decides filteredness of C."""
    return 2 * len(C.objects) + len(C.morphisms) + 1


def iter_shapes(n: int, shapes: str = "dim1", budget: int = None) -> Iterator[FinCat]:
    """Diagram shapes with fewer than n objects, up to isomorphism."""
    if shapes == "dim1":
        for J in enumerate_posets(n - 1, max_dim=1, budget=budget):
            yield as_category(J)
    elif shapes == "posets":
        for J in enumerate_posets(n - 1, budget=budget):
            yield as_category(J)
    elif shapes == "categories":
        from kancalc.components.corpus import enumerate_categories

        yield from enumerate_categories(n - 1, budget=budget)
    else:
        raise PreconditionFailed(f"shapes must be one of {SHAPES}, got {shapes!r}")


def is_filtered_at_level(C: FinCat, n: int, budget: int = None,
                         shapes: str = "dim1") -> tuple[bool, Optional[FinFunctor]]:
    """Every diagram into C of a shape with fewer than n objects has a cone; otherwise the first diagram without one."""
    if n < 1:
        raise PreconditionFailed(f"level must be at least 1, got {n}")
    diagrams = 0
    for shape in iter_shapes(n, shapes, budget):
        for E in iter_functors(shape, C):
            diagrams += 1
            if find_cone(E) is None:
                logger.debug(f"{C.name} fails at level {n}: {len(shape.objects)}-object diagram has no cone")
                return False, E
    logger.debug(f"{C.name} passes level {n} after {diagrams} diagrams")
    return True, None


def filter_report(C: FinCat, n: int = None, budget: int = None, shapes: str = "dim1") -> FilterReport:
    cone = find_cone(identity_functor(C))
    terminal = karoubi_terminal(C)
    level_ok, witness = None, cone
    if n is not None:
        level_ok, failing = is_filtered_at_level(C, n, budget, shapes)
        if failing is not None:
            witness = failing
    report = FilterReport(C, cone is not None, terminal is not None, n, level_ok, witness)
    if not report.consistent:
        logger.warning(f"filteredness criteria disagree on {C.name}: {report}")
    return report


def check_p_le(C: FinCat) -> dict:
    """The id-cone and the Karoubi terminal object exist together."""
    cone = find_cone(identity_functor(C))
    terminal = karoubi_terminal(C)
    ok = (cone is not None) == (terminal is not None)
    return {"ok": ok, "id_cone": cone is not None, "karoubi_terminal": terminal,
            "witness": cone.name() if cone is not None else None}


def check_level_reduction(C: FinCat, n: int = None, budget: int = None) -> dict:
    """Exact implies level n; at the reduction level the converse holds, witnessed by the diagram over V(C)."""
    from kancalc.components.nerve import v_replacement

    exact = is_filtered_exact(C)
    n = reduction_level(C) if n is None else n
    level, failing = is_filtered_at_level(C, n, budget)
    q = v_replacement(C).q
    v_cone = find_cone(compose_functors(identity_functor(C), q)) is not None
    ok = (not exact or level) and v_cone == exact
    if n >= reduction_level(C):
        ok = ok and level == exact
    return {"ok": ok, "exact": exact, "level": n, "level_ok": level, "v_cone": v_cone, "witness": failing}


def check_cofinal_subcategory(C: FinCat, objects) -> dict:
    """Hypothesis: C filtered and every c \\ C' nonempty. Conclusions: C' filtered and the embedding cofinal."""
    sub = full_subcategory(C, objects)
    incl = inclusion(sub, C)
    filtered = is_filtered_exact(C)
    empty_at = next((c for c in C.objects if not comma_fiber(incl, c, "right").category.objects), None)
    hypothesis = filtered and empty_at is None
    report = {"precondition": filtered, "hypothesis": hypothesis, "empty_fiber": empty_at,
              "sub_filtered": None, "cofinal": None, "ok": True}
    if hypothesis:
        report["sub_filtered"] = is_filtered_exact(sub)
        report["cofinal"], report["witness"] = check_cofinal(incl)
        report["ok"] = report["sub_filtered"] and report["cofinal"]
        if not report["ok"]:
            logger.warning(f"cofinal subcategory check fails for {sub.name} in {C.name}")
    return report


def check_con_le(I: FinCat, X: SetFunctor) -> dict:
    """For filtered I: the elements of X are filtered iff colim X is a point."""
    if X.is_presheaf:
        raise VarianceMismatch(f"{X.name} must be covariant on {I.name}")
    if not is_filtered_exact(I):
        raise PreconditionFailed(f"{I.name} is not filtered: no cone over its identity functor")
    el = elements(X)
    filtered = is_filtered_exact(el.cat)
    colim = colim_set(X)
    point = len(colim.elements) == 1
    ok = filtered == point
    if not ok:
        logger.warning(f"elements of {X.name} filtered={filtered} but |colim| = {len(colim.elements)}")
    return {"ok": ok, "elements_filtered": filtered, "colim_is_point": point, "colim": list(colim.elements)}


def check_con_corr(gamma: FinFunctor) -> dict:
    """For cofinal gamma between filtered categories every right fiber i \\ C is filtered."""
    applicable = is_filtered_exact(gamma.dom) and is_filtered_exact(gamma.cod) and check_cofinal(gamma)[0]
    if not applicable:
        return {"ok": True, "applicable": False, "witness": None}
    for i in gamma.cod.objects:
        if not is_filtered_exact(comma_fiber(gamma, i, "right").category):
            logger.warning(f"right fiber of {gamma.name} at {i} is not filtered")
            return {"ok": False, "applicable": True, "witness": i}
    return {"ok": True, "applicable": True, "witness": None}


# ---------------------------------------------------------------- functor categories

class FunCat(NamedTuple):
    category: FinCat
    constant: FinFunctor
    functors: tuple


def functor_category(J: FinCat, C: FinCat, functors, name: str, prefix: str = "F",
                     keep=None, budget: int = None) -> tuple[FinCat, dict]:
    """The category on the given functors J -> C whose morphisms are the natural transformations passing ``keep``.

    Returns the category and a lookup (source, target, components) -> morphism name.
    """
    names = [f"{prefix}{k}" for k in range(len(functors))]
    payload = dict(zip(names, functors))
    arrows, lookup = [], {}
    for F, a in zip(functors, names):
        for G, b in zip(functors, names):
            k = 0
            for t in iter_nat_transforms(F, G):
                if keep is not None and not keep(t):
                    continue
                label = mk(a, b, k)
                k += 1
                arrows.append((label, a, b))
                payload[label] = t
                lookup[(a, b, t.key())] = label
                if budget is not None and len(arrows) > budget:
                    raise BoundExceeded(f"more than {budget} natural transformations in {name}")
    objs = J.objects
    identity = {n: lookup[(n, n, tuple(C.id(F.ob(i)) for i in objs))] for F, n in zip(functors, names)}
    table = {}
    for f, a, b in arrows:
        for g, b2, c in arrows:
            if b2 == b:
                s, t = payload[f], payload[g]
                table[(g, f)] = lookup[(a, c, tuple(C.compose(t.at(i), s.at(i)) for i in objs))]
    return make_category(name, names, arrows, identity, table, payload), lookup


def fun_cat(J: FinCat, C: FinCat, budget: int = None) -> FunCat:
    """Fun(J, C) with natural transformations as morphisms, and the constant embedding C -> Fun(J, C)."""
    functors = []
    for F in iter_functors(J, C):
        functors.append(F)
        if budget is not None and len(functors) > budget:
            raise BoundExceeded(f"more than {budget} functors {J.name} -> {C.name}")
    K, lookup = functor_category(J, C, functors, f"Fun({J.name},{C.name})", budget=budget)
    by_key = {F.key(): n for F, n in zip(functors, K.objects)}
    obj_map, mor_map = {}, {}
    for c in C.objects:
        obj_map[c] = by_key[constant_functor(J, C, c).key()]
    for m in C.morphisms:
        comps = tuple(m.name for _ in J.objects)
        mor_map[m.name] = lookup[(obj_map[m.src], obj_map[m.tgt], comps)]
    const = FinFunctor(C, K, obj_map, mor_map, "const")
    logger.debug(f"{K.name}: {len(K.objects)} functors, {len(K.morphisms)} natural transformations")
    return FunCat(K, const, tuple(functors))


def check_cone_le(J: FinCat, C: FinCat, budget: int = None, max_objects: int = None) -> dict:
    """For filtered C: Fun(J, C) is filtered and the constant embedding is cofinal."""
    if not is_filtered_exact(C):
        raise PreconditionFailed(f"{C.name} is not filtered")
    if max_objects is not None and len(J.objects) > max_objects:
        raise PreconditionFailed(f"{J.name} has more than {max_objects} objects")
    fc = fun_cat(J, C, budget)
    filtered = is_filtered_exact(fc.category)
    cofinal, witness = check_cofinal(fc.constant)
    ok = filtered and cofinal
    if not ok:
        logger.warning(f"{fc.category.name}: filtered={filtered}, constant embedding cofinal={cofinal}")
    return {"ok": ok, "fun_filtered": filtered, "cofinal": cofinal, "objects": len(fc.category.objects),
            "witness": witness}


def check_products_filtered(C0: FinCat, C1: FinCat) -> dict:
    both = is_filtered_exact(C0) and is_filtered_exact(C1)
    prod = is_filtered_exact(product(C0, C1).category)
    return {"ok": both == prod, "factors": both, "product": prod}


def check_comma_corr(gamma: FinFunctor) -> dict:
    """For cofinal gamma: C -> I between filtered categories, eta: C -> C/I is cofinal."""
    applicable = is_filtered_exact(gamma.dom) and is_filtered_exact(gamma.cod) and check_cofinal(gamma)[0]
    if not applicable:
        return {"ok": True, "applicable": False, "witness": None}
    cofinal, witness = check_cofinal(comma_category(gamma, "left").eta)
    if not cofinal:
        logger.warning(f"eta for {gamma.name} is not cofinal at {witness}")
    return {"ok": cofinal, "applicable": True, "witness": witness}


# ---------------------------------------------------------------- filtered colimits and limits

def _slice(X: SetFunctor, I: FinCat, J: FinCat, fixed: str, along: str) -> SetFunctor:
    """X restricted to {fixed} x J (along="J") or I x {fixed} (along="I")."""
    P = X.base
    if along == "J":
        emb = FinFunctor(J, P, {j: mk(fixed, j) for j in J.objects},
                         {g: mk(I.id(fixed), g) for g in J.morphism_names}, f"at_{fixed}")
    else:
        emb = FinFunctor(I, P, {i: mk(i, fixed) for i in I.objects},
                         {f: mk(f, J.id(fixed)) for f in I.morphism_names}, f"at_{fixed}")
    return pullback(emb, X)


def filt_commute_check(I: FinCat, J: FinCat, X: SetFunctor) -> dict:
    """The comparison colim_I lim_J X -> lim_J colim_I X for X covariant on I x J."""
    if X.is_presheaf:
        raise VarianceMismatch("the comparison map is computed for covariant X")
    if X.base != product(I, J).category:
        raise PreconditionFailed(f"{X.name} does not live on {I.name}x{J.name}")
    filtered = is_filtered_exact(I)

    # left: i -> lim_J X(i, -), then colim over I
    lims = {i: lim_set(_slice(X, I, J, i, "J")) for i in I.objects}
    lookup = {i: {tuple(sorted(sec.items())): label for label, sec in lims[i].sections.items()} for i in I.objects}
    action = {}
    for m in I.morphisms:
        fn = {}
        for label, sec in lims[m.src].sections.items():
            moved = {j: X.apply(mk(m.name, J.id(j)), x) for j, x in sec.items()}
            fn[label] = lookup[m.tgt][tuple(sorted(moved.items()))]
        action[m.name] = fn
    L = SetFunctor(I, COVARIANT, {i: lims[i].elements for i in I.objects}, action, "lim_J")
    left = colim_set(L)

    # right: j -> colim_I X(-, j), then lim over J
    colims = {j: colim_set(_slice(X, I, J, j, "I")) for j in J.objects}
    action = {}
    for g in J.morphisms:
        fn = {}
        for label, ((i, x), *_) in colims[g.src].members.items():
            fn[label] = colims[g.tgt].proj[(i, X.apply(mk(I.id(i), g.name), x))]
        action[g.name] = fn
    M = SetFunctor(J, COVARIANT, {j: colims[j].elements for j in J.objects}, action, "colim_I")
    right = lim_set(M)

    comparison = {}
    for label, ((i, s), *_) in left.members.items():
        sec = lims[i].sections[s]
        comparison[label] = mk(*(colims[j].proj[(i, sec[j])] for j in J.objects))
    hit = set(comparison.values())
    bijective = len(hit) == len(comparison) == len(right.elements)
    witness = None
    if not bijective:
        missing = [r for r in right.elements if r not in hit]
        witness = {"left": len(left.elements), "right": len(right.elements), "missed": missing[:1]}
        if filtered:
            logger.warning(f"comparison map for {X.name} over filtered {I.name} is not bijective")
    return {"ok": bijective, "filtered": filtered, "bijective": bijective, "left": len(left.elements),
            "right": len(right.elements), "comparison": comparison, "witness": witness}


# ---------------------------------------------------------------- compactness

def _retractions(X: SetFunctor, K: SetFunctor) -> Optional[tuple[SetNatMap, SetNatMap]]:
    ident = identity_map(X).key()
    backs = list(iter_set_maps(K, X))
    for s in iter_set_maps(X, K):
        for r in backs:
            if compose_maps(r, s).key() == ident:
                return s, r
    return None


def compact_witness_search(X: SetFunctor, size_bound: int, budget: int = None) -> Optional[CompactWitness]:
    """X as a retract of gamma^o_! pt for some gamma: J -> I with J of dimension <= 1 and fewer than size_bound points."""
    if not X.is_presheaf:
        raise VarianceMismatch(f"{X.name} must be a presheaf")
    I = X.base
    tried = 0
    for J in enumerate_posets(size_bound - 1, max_dim=1, budget=budget):
        Jc = as_category(J)
        pt = point_functor(Jc)
        for gamma in iter_functors(Jc, I):
            tried += 1
            if budget is not None and tried > budget:
                raise BoundExceeded(f"more than {budget} candidate diagrams for {X.name}")
            K = kan_left(gamma, pt).functor
            if any(len(K.at(c)) < len(X.at(c)) for c in I.objects):
                continue
            found = _retractions(X, K)
            if found is not None:
                logger.debug(f"{X.name} is a retract over a {len(J)}-point shape")
                return CompactWitness(J, gamma, *found)
    return None
