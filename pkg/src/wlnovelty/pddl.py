"""Parser for the STRIPS + typing subset of PDDL.

Only ``:strips`` and ``:typing`` are accepted. Anything outside pure STRIPS
(negative preconditions, equality, conditional or quantified effects,
numeric fluents, costs) is rejected with an explicit error rather than
silently ignored. Identifiers are folded to lowercase.

Types are kept on objects and parameters and are compiled into unary static
atoms only when the problem's initial atoms are requested, see
:meth:`LiftedProblem.initial_atoms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Union

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing"})
ROOT_TYPE = "object"

# (predicate, args); args are objects, or ?variables inside action schemata
Atom = tuple[str, tuple[str, ...]]


class PDDLError(ValueError):
    """Malformed or unsupported PDDL input."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


class UnsupportedRequirement(PDDLError):
    def __init__(self, requirement: str, line: int | None = None, col: int | None = None):
        self.requirement = requirement
        super().__init__(f"unsupported requirement {requirement}", line, col)


# -- s-expressions -----------------------------------------------------------


class _Sym(str):
    line: int
    col: int


class _List(list):
    line: int
    col: int


_Expr = Union[_Sym, _List]


def _located(obj, line: int, col: int):
    obj.line = line
    obj.col = col
    return obj


def _read_sexprs(text: str) -> list[_Expr]:
    stack: list[_List] = [_located(_List(), 1, 1)]
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(_located(_List(), line, col))
            i += 1
            col += 1
            continue
        if ch == ")":
            if len(stack) == 1:
                raise PDDLError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].append(done)
            i += 1
            col += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "();":
            j += 1
        stack[-1].append(_located(_Sym(text[i:j].lower()), line, col))
        col += j - i
        i = j
    if len(stack) > 1:
        opened = stack[-1]
        raise PDDLError("unclosed '('", opened.line, opened.col)
    return list(stack[0])


def _loc(expr) -> tuple[int | None, int | None]:
    return getattr(expr, "line", None), getattr(expr, "col", None)


def _fail(message: str, expr) -> PDDLError:
    return PDDLError(message, *_loc(expr))


def _expect_list(expr, what: str) -> _List:
    if not isinstance(expr, list):
        raise _fail(f"expected {what}, got '{expr}'", expr)
    return expr


def _expect_sym(expr, what: str) -> _Sym:
    if not isinstance(expr, str):
        raise _fail(f"expected {what}", expr)
    return expr


# -- data model --------------------------------------------------------------


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    param_types: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.param_types)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[tuple[str, str], ...]  # (?var, type)
    precondition: tuple[Atom, ...]
    add_effects: tuple[Atom, ...]
    del_effects: tuple[Atom, ...]


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: tuple[str, ...]
    types: tuple[tuple[str, str], ...]  # (type, parent), root type excluded
    constants: tuple[tuple[str, str], ...]  # (name, type)
    predicates: tuple[PredicateDecl, ...]
    actions: tuple[ActionSchema, ...]

    @property
    def type_parents(self) -> dict[str, str]:
        return dict(self.types)

    def predicate(self, name: str) -> PredicateDecl | None:
        for pred in self.predicates:
            if pred.name == name:
                return pred
        return None

    def ancestors(self, type_name: str) -> list[str]:
        """``type_name`` followed by its supertypes, root type excluded."""
        parents = self.type_parents
        chain = []
        t = type_name
        while t != ROOT_TYPE and t not in chain:
            chain.append(t)
            t = parents.get(t, ROOT_TYPE)
        return chain

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sup == ROOT_TYPE or sup in self.ancestors(sub)


@dataclass(frozen=True)
class LiftedProblem:
    name: str
    domain: Domain
    objects: tuple[tuple[str, str], ...]  # declared in the problem, (name, type)
    init: frozenset[Atom]
    goal: frozenset[Atom]

    @property
    def all_objects(self) -> tuple[tuple[str, str], ...]:
        """Domain constants followed by problem objects."""
        return self.domain.constants + self.objects

    @property
    def object_types(self) -> dict[str, str]:
        return dict(self.all_objects)

    def type_atoms(self) -> frozenset[Atom]:
        atoms = set()
        for obj, typ in self.all_objects:
            for t in self.domain.ancestors(typ):
                atoms.add((t, (obj,)))
        return frozenset(atoms)

    def initial_atoms(self) -> frozenset[Atom]:
        """Declared init atoms plus one static ``type(obj)`` atom per type membership."""
        return self.init | self.type_atoms()


# -- domain ------------------------------------------------------------------


def _typed_list(items: list, *, variables: bool) -> list[tuple[_Sym, str]]:
    out: list[tuple[_Sym, str]] = []
    pending: list[_Sym] = []
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, list):
            raise _fail("unexpected list in typed list", item)
        if item == "-":
            if i + 1 >= len(items):
                raise _fail("missing type after '-'", item)
            typ = items[i + 1]
            if isinstance(typ, list):
                head = typ[0] if typ else None
                if head == "either":
                    raise _fail("'either' types are not supported", typ)
                raise _fail("expected a type name", typ)
            out.extend((name, str(typ)) for name in pending)
            pending = []
            i += 2
            continue
        if variables and not item.startswith("?"):
            raise _fail(f"expected a variable, got '{item}'", item)
        if not variables and item.startswith("?"):
            raise _fail(f"unexpected variable '{item}'", item)
        pending.append(item)
        i += 1
    out.extend((name, ROOT_TYPE) for name in pending)
    return out


_UNSUPPORTED_SECTIONS = {
    ":functions": ":numeric-fluents",
    ":derived": ":derived-predicates",
    ":constraints": ":constraints",
    ":metric": ":action-costs",
}

_UNSUPPORTED_HEADS = {
    "not": "negative preconditions are not supported",
    "=": "equality is not supported",
    "or": "disjunctive conditions are not supported",
    "imply": "implications are not supported",
    "exists": "quantified conditions are not supported",
    "forall": "quantified formulas are not supported",
    "when": "conditional effects are not supported",
    "increase": "numeric effects are not supported",
    "decrease": "numeric effects are not supported",
    "assign": "numeric effects are not supported",
}


def _conjuncts(expr) -> list:
    expr = _expect_list(expr, "a formula")
    if not expr:
        return []
    if expr[0] == "and":
        return list(expr[1:])
    return [expr]


def _check_requirements(section: _List) -> tuple[str, ...]:
    reqs = []
    for req in section[1:]:
        req = _expect_sym(req, "a requirement")
        if req not in SUPPORTED_REQUIREMENTS:
            raise UnsupportedRequirement(req, req.line, req.col)
        reqs.append(str(req))
    return tuple(reqs)


def _header(form, kind: str) -> tuple[_List, str]:
    form = _expect_list(form, f"a ({kind} ...) definition")
    if len(form) < 2 or form[0] != "define":
        raise _fail("expected (define ...)", form)
    head = _expect_list(form[1], f"({kind} name)")
    if len(head) != 2 or head[0] != kind:
        raise _fail(f"expected ({kind} name)", head)
    return form, str(_expect_sym(head[1], "a name"))


def _single_form(text: str) -> _List:
    forms = _read_sexprs(text)
    if len(forms) != 1:
        if not forms:
            raise PDDLError("empty input")
        raise _fail("expected exactly one top-level form", forms[1])
    return forms[0]


def parse_domain(text: str) -> Domain:
    form, name = _header(_single_form(text), "domain")

    requirements: tuple[str, ...] = ()
    types: dict[str, str] = {}
    constants: list[tuple[str, str]] = []
    predicates: dict[str, PredicateDecl] = {}
    raw_actions: list[_List] = []

    for section in form[2:]:
        section = _expect_list(section, "a domain section")
        if not section:
            raise _fail("empty section", section)
        key = _expect_sym(section[0], "a section keyword")
        if key == ":requirements":
            requirements = _check_requirements(section)
        elif key == ":types":
            for t, parent in _typed_list(section[1:], variables=False):
                if t == ROOT_TYPE:
                    continue
                if t in types:
                    raise _fail(f"duplicate type '{t}'", t)
                types[str(t)] = parent
        elif key == ":constants":
            constants.extend((str(c), t) for c, t in _typed_list(section[1:], variables=False))
        elif key == ":predicates":
            for decl in section[1:]:
                decl = _expect_list(decl, "a predicate declaration")
                if not decl:
                    raise _fail("empty predicate declaration", decl)
                pname = _expect_sym(decl[0], "a predicate name")
                if pname in predicates:
                    raise _fail(f"duplicate predicate '{pname}'", pname)
                params = _typed_list(decl[1:], variables=True)
                predicates[str(pname)] = PredicateDecl(str(pname), tuple(t for _, t in params))
        elif key == ":action":
            raw_actions.append(section)
        elif key in _UNSUPPORTED_SECTIONS:
            raise UnsupportedRequirement(_UNSUPPORTED_SECTIONS[key], key.line, key.col)
        else:
            raise _fail(f"unknown domain section '{key}'", key)

    # parent types named only on the right of '-' are declared implicitly
    for parent in list(types.values()):
        if parent != ROOT_TYPE and parent not in types:
            types[parent] = ROOT_TYPE
    known_types = set(types) | {ROOT_TYPE}

    def check_type(t: str, where) -> None:
        if t not in known_types:
            raise _fail(f"undeclared type '{t}'", where)

    for t in types:
        if t in predicates:
            raise PDDLError(f"type '{t}' clashes with a predicate of the same name")
    for pred in predicates.values():
        for t in pred.param_types:
            check_type(t, form)
    for c, t in constants:
        check_type(t, c)

    dom = Domain(
        name=name,
        requirements=requirements,
        types=tuple(types.items()),
        constants=tuple(constants),
        predicates=tuple(predicates.values()),
        actions=(),
    )
    actions = [_parse_action(section, dom, check_type) for section in raw_actions]
    names = [a.name for a in actions]
    if len(set(names)) != len(names):
        raise _fail("duplicate action name", form)
    return Domain(
        name=dom.name,
        requirements=dom.requirements,
        types=dom.types,
        constants=dom.constants,
        predicates=dom.predicates,
        actions=tuple(actions),
    )


def _parse_atom(expr, dom: Domain, allowed_terms, what: str) -> Atom:
    expr = _expect_list(expr, "an atom")
    if not expr:
        raise _fail("empty atom", expr)
    head = _expect_sym(expr[0], "a predicate name")
    if head in _UNSUPPORTED_HEADS:
        raise _fail(_UNSUPPORTED_HEADS[head], head)
    pred = dom.predicate(head)
    if pred is None:
        raise _fail(f"unknown predicate '{head}' in {what}", head)
    args = []
    for arg in expr[1:]:
        arg = _expect_sym(arg, "an argument")
        if arg not in allowed_terms:
            kind = "variable" if arg.startswith("?") else "object"
            raise _fail(f"unknown {kind} '{arg}' in {what}", arg)
        args.append(str(arg))
    if len(args) != pred.arity:
        raise _fail(
            f"arity mismatch for '{head}': expected {pred.arity}, got {len(args)}", expr
        )
    return (str(head), tuple(args))


def _dedup(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    return tuple(dict.fromkeys(atoms))


def _parse_action(section: _List, dom: Domain, check_type) -> ActionSchema:
    if len(section) < 2:
        raise _fail("action without a name", section)
    name = _expect_sym(section[1], "an action name")
    fields: dict[str, object] = {}
    rest = section[2:]
    if len(rest) % 2:
        raise _fail(f"malformed action '{name}'", section)
    for key, value in zip(rest[::2], rest[1::2]):
        key = _expect_sym(key, "an action keyword")
        if key not in (":parameters", ":precondition", ":effect"):
            raise _fail(f"unknown action keyword '{key}'", key)
        fields[str(key)] = value

    params = _typed_list(_expect_list(fields.get(":parameters", []), "a parameter list"), variables=True)
    for var, t in params:
        check_type(t, var)
    if len({v for v, _ in params}) != len(params):
        raise _fail(f"duplicate parameter in action '{name}'", section)
    terms = {v for v, _ in params} | {c for c, _ in dom.constants}
    what = f"action '{name}'"

    pre = []
    if ":precondition" in fields:
        for conj in _conjuncts(fields[":precondition"]):
            pre.append(_parse_atom(conj, dom, terms, what))

    add, delete = [], []
    if ":effect" in fields:
        for conj in _conjuncts(fields[":effect"]):
            conj = _expect_list(conj, "an effect")
            if conj and conj[0] == "not":
                if len(conj) != 2:
                    raise _fail("malformed delete effect", conj)
                delete.append(_parse_atom(conj[1], dom, terms, what))
            else:
                add.append(_parse_atom(conj, dom, terms, what))

    return ActionSchema(
        name=str(name),
        params=tuple((str(v), t) for v, t in params),
        precondition=_dedup(pre),
        add_effects=_dedup(add),
        del_effects=_dedup(delete),
    )


# -- problem -----------------------------------------------------------------


def parse_problem(text: str, dom: Domain) -> LiftedProblem:
    form, name = _header(_single_form(text), "problem")
    objects: list[tuple[str, str]] = []
    init_exprs: list = []
    goal_expr = None
    known_types = {t for t, _ in dom.types} | {ROOT_TYPE}

    for section in form[2:]:
        section = _expect_list(section, "a problem section")
        if not section:
            raise _fail("empty section", section)
        key = _expect_sym(section[0], "a section keyword")
        if key == ":domain":
            if len(section) != 2 or section[1] != dom.name:
                raise _fail(f"problem is for domain '{section[1:]}', not '{dom.name}'", section)
        elif key == ":requirements":
            _check_requirements(section)
        elif key == ":objects":
            for obj, t in _typed_list(section[1:], variables=False):
                if t not in known_types:
                    raise _fail(f"undeclared type '{t}'", obj)
                objects.append((str(obj), t))
        elif key == ":init":
            init_exprs.extend(section[1:])
        elif key == ":goal":
            if len(section) != 2:
                raise _fail("expected a single goal formula", section)
            goal_expr = section[1]
        elif key in _UNSUPPORTED_SECTIONS:
            raise UnsupportedRequirement(_UNSUPPORTED_SECTIONS[key], key.line, key.col)
        else:
            raise _fail(f"unknown problem section '{key}'", key)

    names = [o for o, _ in dom.constants] + [o for o, _ in objects]
    seen: set[str] = set()
    for o in names:
        if o in seen:
            raise PDDLError(f"duplicate object '{o}'")
        seen.add(o)

    init = frozenset(_parse_atom(e, dom, seen, "init") for e in init_exprs)
    if goal_expr is None:
        raise _fail("missing goal", form)
    goal = frozenset(_parse_atom(e, dom, seen, "goal") for e in _conjuncts(goal_expr))
    if not goal:
        raise _fail("empty goal", goal_expr)
    return LiftedProblem(name=name, domain=dom, objects=tuple(objects), init=init, goal=goal)


def load_domain(path: str | Path) -> Domain:
    return parse_domain(Path(path).read_text())


def load_problem(path: str | Path, dom: Domain) -> LiftedProblem:
    return parse_problem(Path(path).read_text(), dom)


# -- printing ----------------------------------------------------------------


def format_atom(atom: Atom) -> str:
    pred, args = atom
    return "(" + " ".join((pred,) + tuple(args)) + ")"


def _format_typed(items: Iterable[tuple[str, str]]) -> str:
    # groups consecutive items of equal type: "a b - t c - u"
    parts: list[str] = []
    group: list[str] = []
    current = None
    for name, t in items:
        if group and t != current:
            parts.append(" ".join(group) + f" - {current}")
            group = []
        group.append(name)
        current = t
    if group:
        parts.append(" ".join(group) + f" - {current}")
    return " ".join(parts)


def _conj(atoms: Iterable[str]) -> str:
    return "(and " + " ".join(atoms) + ")"


def _lines_domain(dom: Domain) -> Iterator[str]:
    yield f"(define (domain {dom.name})"
    if dom.requirements:
        yield f"  (:requirements {' '.join(dom.requirements)})"
    if dom.types:
        yield f"  (:types {_format_typed(dom.types)})"
    if dom.constants:
        yield f"  (:constants {_format_typed(dom.constants)})"
    yield "  (:predicates"
    for pred in dom.predicates:
        params = _format_typed((f"?x{i}", t) for i, t in enumerate(pred.param_types))
        yield f"    ({pred.name}{' ' + params if params else ''})"
    yield "  )"
    for act in dom.actions:
        yield f"  (:action {act.name}"
        yield f"    :parameters ({_format_typed(act.params)})"
        yield f"    :precondition {_conj(map(format_atom, act.precondition))}"
        effects = [format_atom(a) for a in act.add_effects]
        effects += [f"(not {format_atom(a)})" for a in act.del_effects]
        yield f"    :effect {_conj(effects)})"
    yield ")"


def domain_to_pddl(dom: Domain) -> str:
    return "\n".join(_lines_domain(dom)) + "\n"


def problem_to_pddl(prob: LiftedProblem) -> str:
    lines = [f"(define (problem {prob.name})", f"  (:domain {prob.domain.name})"]
    if prob.objects:
        lines.append(f"  (:objects {_format_typed(prob.objects)})")
    lines.append("  (:init")
    lines.extend(f"    {format_atom(a)}" for a in sorted(prob.init))
    lines.append("  )")
    lines.append(f"  (:goal {_conj(format_atom(a) for a in sorted(prob.goal))})")
    lines.append(")")
    return "\n".join(lines) + "\n"
