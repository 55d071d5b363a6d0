"""Line-oriented text formats for categories, posets, Set-valued functors, functors and diagrams.

A file is a sequence of sections. Each section starts with a header line

    category <name>
    poset <name>
    setfun <name> on <category> [presheaf|covariant]
    functor <name> : <category> -> <category>
    diagram <name> over <poset>

and continues with body lines until the next header. ``#`` starts a comment.
Identities are implicit and named ``id_<obj>``; a composition table lists
non-identity composites only; poset relations are generators and are closed
reflexively and transitively. Later sections may refer to entities loaded
earlier, in the same file or before it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from kancalc import logger
from kancalc.components.core import (
    FinCat,
    FinFunctor,
    RawCategory,
    compose_functors,
    identity_functor,
    validate_category,
    validate_functor,
)
from kancalc.components.grothendieck import CatDiagram, validate_diagram
from kancalc.components.poset import Poset, as_category, from_generators, hasse_edges
from kancalc.components.presheaf import (
    CONTRAVARIANT,
    COVARIANT,
    SetFunctor,
    elements,
    make_set_functor,
)
from kancalc.exception.exception import CustomException, FileOperationException, ParseError, ValidationError
from kancalc.utils.common import canonical_key, canonical_sorted

KINDS = ("category", "poset", "setfun", "functor", "diagram")
SUFFIXES = {".fc": "category", ".pos": "poset", ".psh": "setfun", ".fun": "functor", ".diag": "diagram"}

Entity = Union[FinCat, Poset, SetFunctor, FinFunctor, CatDiagram]

_TOKEN = re.compile(r"\S+")


class Token(str):
    """A word of the input together with the column it starts at (1-based)."""
    column: int

    def __new__(cls, text: str, column: int):
        tok = super().__new__(cls, text)
        tok.column = column
        return tok


def _tokens(line: str) -> list[Token]:
    line = line.split("#", 1)[0]
    return [Token(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


@dataclass
class Workspace:
    """Named entities by kind, with the file and line each one came from."""
    categories: dict = field(default_factory=dict)
    posets: dict = field(default_factory=dict)
    setfuns: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def _table(self, kind: str) -> dict:
        return {
            "category": self.categories,
            "poset": self.posets,
            "setfun": self.setfuns,
            "functor": self.functors,
            "diagram": self.diagrams,
        }[kind]

    def register(self, kind: str, name: str, entity: Entity, source: str, line: int) -> None:
        table = self._table(kind)
        if name in table:
            where = self.provenance[(kind, name)]
            raise ValidationError(f"{kind} {name} already loaded from {where[0]}:{where[1]}")
        table[name] = entity
        self.provenance[(kind, name)] = (source, line)

    def get(self, kind: str, name: str) -> Entity:
        table = self._table(kind)
        if name not in table:
            raise ValidationError(f"no {kind} named {name} is loaded")
        return table[name]

    def category(self, name: str) -> FinCat:
        """A category by name; a loaded poset is taken as its category."""
        if name in self.categories:
            return self.categories[name]
        if name in self.posets:
            return as_category(self.posets[name])
        raise ValidationError(f"no category or poset named {name} is loaded")

    def entities(self) -> list[tuple[str, str, Entity]]:
        out = []
        for kind in KINDS:
            for name, entity in self._table(kind).items():
                out.append((kind, name, entity))
        return out


# ---------------------------------------------------------------- parsing

@dataclass
class _Section:
    kind: str
    header: list
    line: int
    body: list = field(default_factory=list)


def _expect(tok: Optional[Token], text: str, line: int, fallback: int) -> None:
    if tok is None or tok != text:
        found = f"found {tok!r}" if tok is not None else "found end of line"
        raise ParseError(f"expected {text!r}, {found}", line, tok.column if tok is not None else fallback)


def _key(tok: Token, key: str, line: int) -> None:
    if tok.rstrip(":") != key:
        raise ParseError(f"expected {key!r}", line, tok.column)


def _split_pair(tok: Token, sep: str, line: int) -> tuple[str, str]:
    """a<sep>b inside a single token."""
    left, found, right = tok.partition(sep)
    if not found or not left or not right:
        raise ParseError(f"expected <a>{sep}<b>, found {tok!r}", line, tok.column)
    return left, right


def _end_of(toks: list[Token]) -> int:
    last = toks[-1]
    return last.column + len(last)


def _sections(text: str) -> list[_Section]:
    sections = []
    for n, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        if toks[0] in KINDS:
            if len(toks) < 2:
                raise ParseError(f"{toks[0]} section needs a name", n, _end_of(toks))
            sections.append(_Section(str(toks[0]), toks, n))
        elif not sections:
            raise ParseError(f"expected a section header ({'|'.join(KINDS)}), found {toks[0]!r}", n, toks[0].column)
        else:
            sections[-1].body.append((n, toks))
    return sections


def _parse_category(sec: _Section) -> FinCat:
    name = str(sec.header[1])
    objects, arrows, compose = [], [], {}
    for n, toks in sec.body:
        head = toks[0].rstrip(":")
        if head == "objects":
            objects.extend(str(t) for t in toks[1:])
        elif head == "mor":
            # mor f [g ...] : a -> b
            if ":" not in toks:
                raise ParseError("expected 'mor <name> ... : <src> -> <tgt>'", n, _end_of(toks))
            colon = toks.index(":")
            names, rest = toks[1:colon], toks[colon + 1:]
            if not names:
                raise ParseError("mor line declares no morphism", n, toks[colon].column)
            if len(rest) != 3:
                raise ParseError("expected '<src> -> <tgt>' after ':'", n, rest[0].column if rest else _end_of(toks))
            _expect(rest[1], "->", n, _end_of(toks))
            arrows.extend((str(m), str(rest[0]), str(rest[2])) for m in names)
        elif head == "compose":
            # compose g f = h   means g after f is h
            if len(toks) != 5:
                raise ParseError("expected 'compose <g> <f> = <h>'", n, toks[min(len(toks), 4) - 1].column)
            _expect(toks[3], "=", n, _end_of(toks))
            compose[(str(toks[1]), str(toks[2]))] = str(toks[4])
        else:
            raise ParseError(f"unknown category line {toks[0]!r}", n, toks[0].column)
    return validate_category(RawCategory(name, tuple(objects), tuple(arrows), compose))


def _parse_poset(sec: _Section) -> Poset:
    name = str(sec.header[1])
    els, gens = [], []
    for n, toks in sec.body:
        head = toks[0].rstrip(":")
        if head == "elements":
            els.extend(str(t) for t in toks[1:])
        elif head == "le":
            for tok in toks[1:]:
                sep = "<=" if "<=" in tok else "<"
                gens.append(_split_pair(tok, sep, n))
        else:
            raise ParseError(f"unknown poset line {toks[0]!r}", n, toks[0].column)
    return from_generators(name, els, gens)


def _parse_setfun(sec: _Section, ws: Workspace) -> SetFunctor:
    h = sec.header
    if len(h) not in (4, 5):
        raise ParseError("expected 'setfun <name> on <category> [presheaf|covariant]'", sec.line, _end_of(h))
    _expect(h[2], "on", sec.line, _end_of(h))
    variance = CONTRAVARIANT
    if len(h) == 5:
        if h[4] not in ("presheaf", "covariant"):
            raise ParseError(f"variance must be presheaf or covariant, found {h[4]!r}", sec.line, h[4].column)
        variance = COVARIANT if h[4] == "covariant" else CONTRAVARIANT
    base = ws.category(str(h[3]))
    values, action = {}, {}
    for n, toks in sec.body:
        if toks[0] == "at":
            if len(toks) < 2 or not toks[1].endswith(":"):
                raise ParseError("expected 'at <object>: <elements>'", n, _end_of(toks))
            values[toks[1][:-1]] = tuple(str(t) for t in toks[2:])
        elif toks[0] == "act":
            if len(toks) < 2 or not toks[1].endswith(":"):
                raise ParseError("expected 'act <morphism>: <x>-><y> ...'", n, _end_of(toks))
            action[toks[1][:-1]] = dict(_split_pair(t, "->", n) for t in toks[2:])
        else:
            raise ParseError(f"unknown setfun line {toks[0]!r}", n, toks[0].column)
    for c in values:
        if c not in base.identity:
            raise ValidationError(f"{h[1]}: {c} is not an object of {base.name}")
    for f in action:
        if f not in base.morphism_names:
            raise ValidationError(f"{h[1]}: {f} is not a morphism of {base.name}")
    return make_set_functor(base, variance, values, action, str(h[1]))


def _parse_functor(sec: _Section, ws: Workspace) -> FinFunctor:
    h = sec.header
    if len(h) != 6:
        raise ParseError("expected 'functor <name> : <category> -> <category>'", sec.line, _end_of(h))
    _expect(h[2], ":", sec.line, _end_of(h))
    _expect(h[4], "->", sec.line, _end_of(h))
    C, D = ws.category(str(h[3])), ws.category(str(h[5]))
    obj_map, mor_map = {}, {}
    for n, toks in sec.body:
        if toks[0] not in ("ob", "mor"):
            raise ParseError(f"unknown functor line {toks[0]!r}", n, toks[0].column)
        if len(toks) != 4:
            raise ParseError(f"expected '{toks[0]} <x> -> <y>'", n, _end_of(toks))
        _expect(toks[2], "->", n, _end_of(toks))
        (obj_map if toks[0] == "ob" else mor_map)[str(toks[1])] = str(toks[3])
    for a in C.objects:
        if obj_map.get(a) in D.identity:
            mor_map.setdefault(C.id(a), D.id(obj_map[a]))
    return validate_functor(FinFunctor(C, D, obj_map, mor_map, str(h[1])))


def _parse_diagram(sec: _Section, ws: Workspace) -> CatDiagram:
    h = sec.header
    if len(h) != 4:
        raise ParseError("expected 'diagram <name> over <poset>'", sec.line, _end_of(h))
    _expect(h[2], "over", sec.line, _end_of(h))
    J = ws.get("poset", str(h[3]))
    fibers, transitions = {}, {}
    for n, toks in sec.body:
        if len(toks) != 4 or toks[2] != "=":
            raise ParseError("expected 'fiber <j> = <category>' or 'transition <j><=<k> = <functor>'",
                             n, toks[-1].column)
        if toks[0] == "fiber":
            fibers[str(toks[1])] = ws.category(str(toks[3]))
        elif toks[0] == "transition":
            a, b = _split_pair(toks[1], "<=", n)
            transitions[(a, b)] = ws.get("functor", str(toks[3]))
        else:
            raise ParseError(f"unknown diagram line {toks[0]!r}", n, toks[0].column)
    for j in J.elements:
        if j in fibers:
            transitions.setdefault((j, j), identity_functor(fibers[j]))
    # fill in relations that are composites of given ones
    changed = True
    while changed:
        changed = False
        for a, b in sorted(J.leq, key=lambda p: (canonical_key(p[0]), canonical_key(p[1]))):
            if (a, b) in transitions:
                continue
            for c in canonical_sorted(J.elements):
                if c not in (a, b) and J.le(a, c) and J.le(c, b) and (a, c) in transitions and (c, b) in transitions:
                    transitions[(a, b)] = compose_functors(transitions[(a, c)], transitions[(c, b)])
                    changed = True
                    break
    return validate_diagram(CatDiagram(J, fibers, transitions, str(h[1])))


def loads(text: str, workspace: Workspace = None, source: str = "<string>") -> list[tuple[str, str, Entity]]:
    """Parse every section of text into the workspace, in order."""
    ws = workspace if workspace is not None else Workspace()
    loaded = []
    for sec in _sections(text):
        name = str(sec.header[1])
        try:
            if sec.kind == "category":
                entity = _parse_category(sec)
            elif sec.kind == "poset":
                entity = _parse_poset(sec)
            elif sec.kind == "setfun":
                entity = _parse_setfun(sec, ws)
            elif sec.kind == "functor":
                entity = _parse_functor(sec, ws)
            else:
                entity = _parse_diagram(sec, ws)
        except (ParseError, ValidationError):
            raise
        except CustomException as e:
            raise ValidationError(f"{sec.kind} {name} (line {sec.line}): {e.message}") from e
        ws.register(sec.kind, name, entity, source, sec.line)
        loaded.append((sec.kind, name, entity))
        logger.debug(f"loaded {sec.kind} {name} from {source}:{sec.line}")
    return loaded


def load(path: Union[str, Path], workspace: Workspace = None) -> list[tuple[str, str, Entity]]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FileOperationException(f"cannot read {path}: {e}") from e
    return loads(text, workspace, str(path))


def load_one(path: Union[str, Path], workspace: Workspace, kind: str = None) -> Entity:
    """Load a file and return its last entity of the given kind (by default, the kind its suffix names)."""
    kind = kind or SUFFIXES.get(Path(path).suffix)
    loaded = load(path, workspace)
    matching = [e for k, _, e in loaded if kind is None or k == kind]
    if not matching:
        raise ValidationError(f"{path} contains no {kind} section")
    return matching[-1]


# ---------------------------------------------------------------- serializing

def _sorted_pairs(pairs: Iterable[tuple]) -> list[tuple]:
    return sorted(pairs, key=lambda p: tuple(canonical_key(x) for x in p))


def dump_category(C: FinCat) -> str:
    lines = [f"category {C.name}", "objects: " + " ".join(C.objects)]
    for m in C.morphisms:
        if not C.is_identity(m.name):
            lines.append(f"mor {m.name} : {m.src} -> {m.tgt}")
    for g, f in _sorted_pairs(C.composable_pairs()):
        if not C.is_identity(g) and not C.is_identity(f):
            lines.append(f"compose {g} {f} = {C.compose(g, f)}")
    return "\n".join(lines) + "\n"


def dump_poset(J: Poset) -> str:
    lines = [f"poset {J.name}", "elements: " + " ".join(J.elements)]
    edges = hasse_edges(J)
    if edges:
        lines.append("le: " + " ".join(f"{a}<={b}" for a, b in edges))
    return "\n".join(lines) + "\n"


def dump_setfun(X: SetFunctor) -> str:
    variance = "presheaf" if X.is_presheaf else "covariant"
    lines = [f"setfun {X.name} on {X.base.name} {variance}"]
    for c in X.base.objects:
        lines.append(f"at {c}: " + " ".join(X.at(c)))
    for f in X.base.non_identities():
        pairs = " ".join(f"{x}->{y}" for x, y in sorted(X.act(f).items(), key=lambda p: canonical_key(p[0])))
        lines.append(f"act {f}: {pairs}".rstrip())
    return "\n".join(lines) + "\n"


def dump_functor(F: FinFunctor) -> str:
    lines = [f"functor {F.name} : {F.dom.name} -> {F.cod.name}"]
    lines += [f"ob {a} -> {F.ob(a)}" for a in F.dom.objects]
    lines += [f"mor {f} -> {F.mor(f)}" for f in F.dom.non_identities()]
    return "\n".join(lines) + "\n"


def dump_diagram(D: CatDiagram) -> str:
    """The diagram section alone; its fibers and transitions are referenced by name."""
    lines = [f"diagram {D.name} over {D.index.name}"]
    lines += [f"fiber {j} = {D.at(j).name}" for j in D.index.elements]
    lines += [f"transition {a}<={b} = {D.act(a, b).name}" for a, b in hasse_edges(D.index)]
    return "\n".join(lines) + "\n"


def dumps(entity: Entity) -> str:
    if isinstance(entity, FinCat):
        return dump_category(entity)
    if isinstance(entity, Poset):
        return dump_poset(entity)
    if isinstance(entity, SetFunctor):
        return dump_setfun(entity)
    if isinstance(entity, FinFunctor):
        return dump_functor(entity)
    if isinstance(entity, CatDiagram):
        return dump_diagram(entity)
    raise TypeError(f"cannot serialize {type(entity).__name__}")


def dump_workspace(ws: Workspace) -> str:
    return "\n".join(dumps(e) for _, _, e in ws.entities())


# ---------------------------------------------------------------- DOT

def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def category_dot(C: FinCat) -> str:
    """Objects as nodes, non-identity morphisms as labelled edges."""
    lines = [f"digraph {_q(C.name)} {{"]
    for a in C.objects:
        lines.append(f"{_q(a)} [label={_q(a)}];")
    for m in C.morphisms:
        if not C.is_identity(m.name):
            lines.append(f"{_q(m.src)} -> {_q(m.tgt)} [label={_q(m.name)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_dot(J: Poset) -> str:
    """The Hasse diagram, smaller elements at the bottom."""
    lines = [f"digraph {_q(J.name)} {{", "rankdir=BT;"]
    for j in J.elements:
        lines.append(f"{_q(j)} [label={_q(j)}];")
    for a, b in hasse_edges(J):
        lines.append(f"{_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def elements_dot(X: SetFunctor) -> str:
    return category_dot(elements(X).cat)


def to_dot(entity: Entity) -> str:
    if isinstance(entity, Poset):
        return poset_dot(entity)
    if isinstance(entity, FinCat):
        return category_dot(entity)
    if isinstance(entity, SetFunctor):
        return elements_dot(entity)
    if isinstance(entity, FinFunctor):
        return category_dot(entity.dom)
    raise TypeError(f"no DOT rendering for {type(entity).__name__}")
