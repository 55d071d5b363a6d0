"""Lemma suites: a corpus of instances per suite and a check per instance.

Instances are built in canonical order and then checked, serially or with a
joblib worker pool; results come back in input order, so the first
counterexample reported does not depend on the number of workers.
"""
from __future__ import annotations

import itertools
import time
from pathlib import Path
from typing import Callable, Iterator, NamedTuple

from joblib import Parallel, delayed

from kancalc.components.core import FinCat, identity_functor, iter_functors, pi0, product
from kancalc.components.corpus import (
    enumerate_categories,
    enumerate_dim1_shapes,
    enumerate_presheaves,
    idempotent_category,
    standard_categories,
)
from kancalc.components.filtered import (
    check_cofinal_subcategory,
    check_con_le,
    check_cone_le,
    check_level_reduction,
    check_p_le,
    filt_commute_check,
    is_filtered_exact,
)
from kancalc.components.grothendieck import (
    check_dim1_le,
    check_lax_ind_shadow,
    check_lax_product_shadow,
    comma_identification,
    constant_diagram,
    from_functor,
    lax_limit,
    relative_yoneda,
    set_degeneration,
)
from kancalc.components.ind import (
    check_presheaf_of_fully_faithful,
    ind_presentation,
    is_ind_object,
    karoubi_identification,
    presheaf_of,
    pullback_failure_demo,
)
from kancalc.components.nerve import check_v_swap, verify_v_localization, verify_v_square
from kancalc.components.poset import (
    as_category,
    certify_cocartesian,
    chain,
    check_lambda_adjunction,
    dimension,
    enumerate_posets,
    glue,
    iter_left_closed,
    pushout_square,
    split,
)
from kancalc.components.presheaf import (
    COVARIANT,
    check_elements_kan,
    check_kan_adjunction,
    check_triangle_identities,
    check_yoneda_square,
    colim_set,
    constant,
    elements,
    iter_set_maps,
    lim_set,
    point_functor,
    yoneda_colimit_decomposition,
)
from kancalc.entity.artifact_entity import SuiteResult
from kancalc.entity.config_entity import HarnessConfig
from kancalc.exception.exception import BoundExceeded, PreconditionFailed
from kancalc.observability.logging_config import get_calc_logger
from kancalc.observability.tracing import trace_function
from kancalc.utils.common import save_json


class Suite(NamedTuple):
    name: str
    instances: Callable[[HarnessConfig], Iterator[tuple]]
    check: Callable[..., tuple]
    description: str


def _categories(cfg: HarnessConfig, min_objects: int = 1) -> list[FinCat]:
    c = cfg.corpus
    return list(enumerate_categories(c.max_objects, c.max_morphisms, min_objects=min_objects,
                                     budget=cfg.budget.enumeration_ceiling))


def _filtered(cfg: HarnessConfig) -> list[FinCat]:
    return [C for C in _categories(cfg) if is_filtered_exact(C)]


def _functors(cfg: HarnessConfig, cats: list[FinCat]) -> Iterator:
    budget = cfg.budget.functor_budget
    produced = 0
    for C, D in itertools.product(cats, cats):
        for F in iter_functors(C, D):
            produced += 1
            if produced > budget:
                raise BoundExceeded(f"more than {budget} functors in the {cfg.suite} corpus")
            yield F


def _diagrams(cfg: HarnessConfig) -> Iterator:
    """Constant diagrams and one-arrow diagrams with filtered fibers."""
    cats = _filtered(cfg)
    for J in enumerate_posets(cfg.corpus.max_poset_size, min_size=1, max_dim=1,
                              budget=cfg.budget.shape_budget):
        for C in cats:
            yield constant_diagram(J, C)
    for gamma in _functors(cfg, cats):
        yield from_functor(gamma)


# ---------------------------------------------------------------- p-le

def _p_le_instances(cfg):
    for C in _categories(cfg, min_objects=0):
        yield (C,)


def _p_le_check(C):
    r = check_p_le(C)
    detail = {"id_cone": r["id_cone"], "karoubi_terminal": r["karoubi_terminal"]}
    ok = r["ok"]
    # the level check grows fast with the morphism count
    if len(C.morphisms) <= 2:
        level = check_level_reduction(C)
        ok = ok and level["ok"]
        detail["level"] = level["level"]
    return ok, detail


# ---------------------------------------------------------------- v-le

def _v_le_instances(cfg):
    targets = _categories(cfg)
    c = cfg.corpus
    sources = list(enumerate_categories(min(c.max_objects, 2), c.max_morphisms, min_objects=1,
                                        budget=cfg.budget.enumeration_ceiling))
    for C in sources:
        for E in targets:
            yield (C, E)


def _v_le_check(C, E):
    loc = verify_v_localization(C, E)
    ok = loc["ok"] and check_v_swap(C)
    detail = {"pairs": loc["pairs"], "fully_faithful": loc["fully_faithful"]}
    if E.is_thin():
        sq = verify_v_square(C, E)
        ok = ok and sq["ok"]
        detail["square"] = (sq["functors"], sq["fiber"])
    return ok, detail


# ---------------------------------------------------------------- con-le

def _con_le_instances(cfg):
    for I in _filtered(cfg):
        for X in enumerate_presheaves(I, cfg.corpus.value_bound, cfg.budget.enumeration_ceiling, COVARIANT):
            yield (I, X)


def _con_le_check(I, X):
    r = check_con_le(I, X)
    return r["ok"], {"elements_filtered": r["elements_filtered"], "colim": len(r["colim"])}


# ---------------------------------------------------------------- filt-prop

def _filt_prop_instances(cfg):
    disc2 = standard_categories()["disc2"]
    yield (disc2, disc2, constant(product(disc2, disc2).category, ["*"], COVARIANT), True)
    shapes = list(enumerate_dim1_shapes(cfg.corpus.max_poset_size, cfg.budget.shape_budget))
    for I in _filtered(cfg):
        for J in shapes:
            base = product(I, J).category
            for X in enumerate_presheaves(base, cfg.corpus.value_bound, cfg.budget.enumeration_ceiling, COVARIANT):
                yield (I, J, X, False)


def _filt_prop_check(I, J, X, negative):
    r = filt_commute_check(I, J, X)
    detail = {"left": r["left"], "right": r["right"]}
    if negative:
        return (not r["bijective"] and r["left"] == 2 and r["right"] == 4), detail
    return r["bijective"] or not r["filtered"], detail


# ---------------------------------------------------------------- cof-le

def _cof_le_instances(cfg):
    for C in _categories(cfg):
        for r in range(1, len(C.objects) + 1):
            for objs in itertools.combinations(C.objects, r):
                yield (C, objs)


def _cof_le_check(C, objs):
    r = check_cofinal_subcategory(C, objs)
    return r["ok"], {"hypothesis": r["hypothesis"], "cofinal": r["cofinal"]}


# ---------------------------------------------------------------- cone-le

def _cone_le_instances(cfg):
    shapes = list(enumerate_dim1_shapes(cfg.corpus.max_poset_size, cfg.budget.shape_budget))
    for C in _filtered(cfg):
        for J in shapes:
            yield (J, C)


def _cone_le_check(J, C):
    r = check_cone_le(J, C)
    return r["ok"], {"objects": r["objects"], "cofinal": r["cofinal"]}


# ---------------------------------------------------------------- dim1-le and lax-ind

def _diagram_instances(cfg):
    for D in _diagrams(cfg):
        yield (D,)


def _dim1_le_check(D):
    r = check_dim1_le(D)
    return r["ok"], {"sections": r["sections"]}


def _lax_ind_instances(cfg):
    for D in _diagrams(cfg):
        yield ("diagram", D)
    for I in _filtered(cfg):
        idI = identity_functor(I)
        presheaves = list(enumerate_presheaves(I, cfg.corpus.value_bound, cfg.budget.enumeration_ceiling))
        for X0, X1 in itertools.product(presheaves, presheaves):
            yield ("product", (idI, idI, X0, X1))


def _lax_ind_check(kind, data):
    if kind == "diagram":
        r = check_lax_ind_shadow(data)
        return r["ok"], {"pairs": r["pairs"]}
    try:
        r = check_lax_product_shadow(*data)
    except PreconditionFailed as e:
        return True, {"applicable": False, "reason": e.message}
    return r["ok"], {"hypothesis": r["hypothesis"], "filtered": r["filtered"]}


# ---------------------------------------------------------------- yo-ind

def _yo_ind_instances(cfg):
    indices = [J for J in _filtered(cfg) if len(J.objects) <= 3]
    bases = [I for I in _categories(cfg) if len(I.objects) <= 2]
    for I in bases:
        presentations = [ind_presentation(F) for J in indices for F in iter_functors(J, I)]
        for A, B in itertools.product(presentations, presentations):
            yield (A, B)


def _yo_ind_check(A, B):
    r = check_presheaf_of_fully_faithful(A, B)
    sound = is_ind_object(presheaf_of(A)).ok
    return r["ok"] and sound, {"ind_hom": r["ind_hom"], "presheaf_hom": r["presheaf_hom"], "recognized": sound}


# ---------------------------------------------------------------- ka-ka

def _ka_ka_instances(cfg):
    yield (idempotent_category(), cfg.corpus.value_bound, 2)
    yield (as_category(chain(1)), cfg.corpus.value_bound, 2)
    for I in _categories(cfg):
        yield (I, cfg.corpus.value_bound, None)


def _ka_ka_check(I, bound, expected):
    r = karoubi_identification(I, bound)
    ok = r["ok"] and (expected is None or len(r["classes"]) == expected)
    return ok, {"classes": len(r["classes"]), "swept": r["swept"],
                "conjecture_mismatches": r["conjecture_mismatches"]}


# ---------------------------------------------------------------- kan

def _kan_instances(cfg):
    cats = _categories(cfg)
    for gamma in _functors(cfg, cats):
        yield (gamma, cfg.corpus.value_bound, cfg.budget.enumeration_ceiling)


def _kan_check(gamma, bound, budget):
    square = check_yoneda_square(gamma)
    if not square["ok"]:
        return False, {"yoneda_square": square["witness"]}
    checked = 0
    for X in enumerate_presheaves(gamma.dom, bound, budget):
        for Y in enumerate_presheaves(gamma.cod, bound, budget):
            checked += 1
            adj = check_kan_adjunction(gamma, X, Y)
            tri = check_triangle_identities(gamma, X, Y)
            if not (adj["ok"] and tri["left"] and tri["right"]):
                return False, {"X": X.name, "Y": Y.name, "adjunction": adj["ok"], "triangles": tri}
    return True, {"pairs": checked}


# ---------------------------------------------------------------- elements

def _elements_instances(cfg):
    for I in _categories(cfg):
        for X in enumerate_presheaves(I, cfg.corpus.value_bound, cfg.budget.enumeration_ceiling):
            yield (X, cfg.corpus.value_bound)


def _elements_check(X, bound):
    colim = colim_set(X)
    components = len(pi0(elements(X).cat))
    cones = sum(1 for _ in iter_set_maps(point_functor(X.base, X.variance), X))
    lim = lim_set(X)
    ok = len(colim.elements) == components and len(lim.elements) == cones
    decomposition = yoneda_colimit_decomposition(X, bound)["ok"] if len(X.base.objects) <= 2 else True
    kan = check_elements_kan(X)["ok"]
    return ok and decomposition and kan, {"colim": len(colim.elements), "lim": len(lim.elements),
                                          "decomposition": decomposition, "elements_kan": kan}


# ---------------------------------------------------------------- poset

def _poset_instances(cfg):
    targets = [C for C in standard_categories().values() if len(C.objects) <= 3]
    for J in enumerate_posets(cfg.corpus.max_poset_size, min_size=1, budget=cfg.budget.shape_budget):
        yield (J, targets)


def _poset_check(J, targets):
    for S in iter_left_closed(J):
        if glue(split(J, S)).poset != J:
            return False, {"split_at": sorted(S)}
    if len(J) <= 5 and not check_lambda_adjunction(J):
        return False, {"lambda": False}
    if dimension(J) <= 1:
        r = certify_cocartesian(pushout_square(J), targets)
        if not r["ok"]:
            return False, {"cocartesian_against": r["target"]}
    return True, {"size": len(J)}


# ---------------------------------------------------------------- prod-demo

def _prod_demo_instances(cfg):
    for N in (3, 4, 5):
        yield (N,)


def _prod_demo_check(N):
    r = pullback_failure_demo(N)
    return r["ok"], {k: v for k, v in r.items() if k != "ok"}


# ---------------------------------------------------------------- groth

def _groth_instances(cfg):
    for gamma in _functors(cfg, _categories(cfg)):
        yield ("comma", gamma)
    for J in enumerate_posets(cfg.corpus.max_poset_size, min_size=1, budget=cfg.budget.shape_budget):
        for X in enumerate_presheaves(as_category(J), cfg.corpus.value_bound, cfg.budget.enumeration_ceiling):
            yield ("set", X)
    for D in _diagrams(cfg):
        yield ("yoneda", D)


def _groth_check(kind, data):
    if kind == "comma":
        r = comma_identification(data)
        return r["ok"], {"lax": r["lax"], "colax": r["colax"]}
    if kind == "set":
        r = set_degeneration(data)
        return r["ok"], {k: v for k, v in r.items() if k != "ok"}
    S = lax_limit(data).sections
    for o in S.objects:
        if not relative_yoneda(data, S.payload[o]).ok:
            return False, {"section": o}
    return True, {"sections": len(S.objects)}


SUITES = {
    s.name: s for s in (
        Suite("p-le", _p_le_instances, _p_le_check, "id-cone exists iff the Karoubi closure has a terminal object"),
        Suite("v-le", _v_le_instances, _v_le_check, "natural maps as limits over V(C); q^* fully faithful"),
        Suite("con-le", _con_le_instances, _con_le_check, "filtered elements iff colimit is a point"),
        Suite("filt-prop", _filt_prop_instances, _filt_prop_check, "filtered colimits commute with finite limits"),
        Suite("cof-le", _cof_le_instances, _cof_le_check, "cofinal full subcategories of filtered categories"),
        Suite("cone-le", _cone_le_instances, _cone_le_check, "Fun(J, C) filtered with cofinal constants"),
        Suite("dim1-le", _diagram_instances, _dim1_le_check, "co-lax limits of filtered fibers are filtered"),
        Suite("yo-ind", _yo_ind_instances, _yo_ind_check, "Ind hom sets are presheaf hom sets"),
        Suite("ka-ka", _ka_ka_instances, _ka_ka_check, "Karoubi closure against retracts of representables"),
        Suite("lax-ind", _lax_ind_instances, _lax_ind_check, "relative Yoneda fully faithful; lax products"),
        Suite("kan", _kan_instances, _kan_check, "Kan adjunction, triangle identities and the Yoneda square"),
        Suite("elements", _elements_instances, _elements_check, "colim, lim and the colimit of representables"),
        Suite("poset", _poset_instances, _poset_check, "glue/split, Lambda and cocartesian squares"),
        Suite("prod-demo", _prod_demo_instances, _prod_demo_check, "strict versus lax fiber products in [N]"),
        Suite("groth", _groth_instances, _groth_check, "comma identifications, Set-valued degeneration, tw(s)"),
    )
}


def _evaluate(suite: str, index: int, instance: tuple) -> tuple:
    ok, detail = SUITES[suite].check(*instance)
    return index, bool(ok), detail


def _describe(instance: tuple) -> list[str]:
    return [repr(x) for x in instance if not isinstance(x, (int, bool, type(None)))]


@trace_function
def run_suite(cfg: HarnessConfig, metrics=None) -> SuiteResult:
    """Build the corpus of a suite, check every instance, and report the first counterexample."""
    if cfg.suite not in SUITES:
        raise PreconditionFailed(f"unknown suite {cfg.suite!r}")
    suite = SUITES[cfg.suite]
    log = get_calc_logger(__name__, component="harness", suite=cfg.suite)
    start = time.perf_counter()
    try:
        instances = list(suite.instances(cfg))
    except BoundExceeded:
        if metrics is not None:
            metrics.record_budget_exceeded(cfg.suite)
        raise
    log.info(f"suite {cfg.suite}: {len(instances)} instances, {cfg.workers} worker(s)")

    if cfg.workers == 1:
        results = [_evaluate(cfg.suite, k, inst) for k, inst in enumerate(instances)]
    else:
        results = Parallel(n_jobs=cfg.workers)(
            delayed(_evaluate)(cfg.suite, k, inst) for k, inst in enumerate(instances)
        )
    results = sorted(results, key=lambda r: r[0])

    passed = sum(1 for _, ok, _ in results if ok)
    counterexample = None
    for k, ok, detail in results:
        if not ok:
            counterexample = {"index": k, "instance": _describe(instances[k]), "detail": detail}
            log.warning(f"suite {cfg.suite}: counterexample at instance {k}: {counterexample['instance']}")
            break
    duration = time.perf_counter() - start
    if metrics is not None:
        metrics.record_suite(cfg.suite, len(results), passed, duration)
    corpus = cfg.corpus
    data = {
        "description": suite.description,
        "corpus": {
            "max_objects": corpus.max_objects,
            "max_morphisms": corpus.max_morphisms,
            "max_poset_size": corpus.max_poset_size,
            "value_bound": corpus.value_bound,
        },
    }
    return SuiteResult(cfg.suite, len(results), passed, counterexample, duration, data)


def save_suite_result(result: SuiteResult, report_dir: Path) -> Path:
    path = Path(report_dir) / f"{result.suite}.json"
    save_json(path, {
        "suite": result.suite,
        "ok": result.ok,
        "instances": result.instances,
        "passed": result.passed,
        "counterexample": result.counterexample,
        "data": result.data,
    })
    return path
