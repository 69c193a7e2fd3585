"""Formulas, rules, universal sentences, and brute-force evaluation.

The syntax layer is deliberately small: formulas over & | -> ~ box with
constants, rules as premise/conclusion formula sets, and their standard
reading as universal sentences (every formula equated to top).  Evaluation
enumerates assignments through the scan kernels and reports the least
counterexample, so results are reproducible down to the witness.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapExceeded, InputError, ParseError
from .finlat import HeytingAlgebra
from .modal import ModalAlgebra

EVAL_CAP = 10**7

SIGNATURES = ("heyting", "modal")


class Formula:
    """Base class; the node types below form the whole syntax."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    name: str  # "bot" or "top"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


def formula_vars(f: Formula, out: list[str]) -> None:
    """Append variable names in first-occurrence order."""
    if isinstance(f, Var):
        if f.name not in out:
            out.append(f.name)
    elif isinstance(f, (Not, Box)):
        formula_vars(f.arg, out)
    elif isinstance(f, (And, Or, Imp)):
        formula_vars(f.left, out)
        formula_vars(f.right, out)


def check_signature(f: Formula, signature: str) -> None:
    if signature not in SIGNATURES:
        raise InputError(f"signature must be one of {SIGNATURES}")
    if signature == "heyting" and isinstance(f, Box):
        raise InputError("box is not part of the heyting signature")
    if isinstance(f, (Not, Box)):
        check_signature(f.arg, signature)
    elif isinstance(f, (And, Or, Imp)):
        check_signature(f.left, signature)
        check_signature(f.right, signature)


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, Box):
        return Box(substitute(f.arg, mapping))
    ctor = type(f)
    return ctor(substitute(f.left, mapping), substitute(f.right, mapping))


@dataclass(frozen=True)
class Rule:
    """Premise and conclusion formula sets, kept in written order."""

    premises: tuple[Formula, ...]
    conclusions: tuple[Formula, ...]
    signature: str

    @property
    def variables(self) -> tuple[str, ...]:
        out: list[str] = []
        for f in self.premises + self.conclusions:
            formula_vars(f, out)
        return tuple(out)


@dataclass(frozen=True)
class UniversalSentence:
    """Premise equations imply the disjunction of the conclusion equations."""

    premises: tuple[tuple[Formula, Formula], ...]
    conclusions: tuple[tuple[Formula, Formula], ...]
    signature: str
    variables: tuple[str, ...]

    def __post_init__(self):
        if len(self.premises) + len(self.conclusions) == 0:
            raise InputError("a universal sentence needs at least one equation")

    @property
    def classification(self) -> str:
        m, n = len(self.premises), len(self.conclusions)
        if n == 1 and m == 0:
            return "identity"
        if n == 1:
            return "quasi-identity"
        if m == 0:
            return "positive"
        return "universal"


def translate(rule: Rule) -> UniversalSentence:
    """Read a rule as a universal sentence: every formula equated to top."""
    if not rule.premises and not rule.conclusions:
        raise InputError("cannot translate the empty rule")
    top = Const("top")
    return UniversalSentence(
        tuple((f, top) for f in rule.premises),
        tuple((f, top) for f in rule.conclusions),
        rule.signature,
        rule.variables,
    )


# ---------------------------------------------------------------------------
# Parsing and printing

_TOKEN = re.compile(r"[a-z][a-z0-9]*|->|[&|~(),/]|\S")
_WS = re.compile(r"\s*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        pos = _WS.match(text, pos).end()
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        tok = m.group()
        if tok in ("->", "&", "|", "~", "(", ")", ",", "/"):
            out.append((tok, tok, pos))
        elif re.fullmatch(r"[a-z][a-z0-9]*", tok):
            out.append(("name", tok, pos))
        else:
            raise ParseError(f"unexpected character {tok!r}", pos, text)
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, signature: str):
        if signature not in SIGNATURES:
            raise InputError(f"signature must be one of {SIGNATURES}")
        self.text = text
        self.signature = signature
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}", tok[2], self.text)
        return tok

    def formula(self) -> Formula:
        left = self.or_level()
        if self.peek()[0] == "->":
            self.take()
            return Imp(left, self.formula())
        return left

    def or_level(self) -> Formula:
        f = self.and_level()
        while self.peek()[0] == "|":
            self.take()
            f = Or(f, self.and_level())
        return f

    def and_level(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "~":
            self.take()
            return Not(self.unary())
        if kind == "name" and value == "box":
            if self.signature != "modal":
                raise ParseError("box needs the modal signature", pos, self.text)
            self.take()
            return Box(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "(":
            f = self.formula()
            tok = self.take()
            if tok[0] != ")":
                raise ParseError("expected ')'", tok[2], self.text)
            return f
        if kind == "name":
            if value in ("bot", "top"):
                return Const(value)
            return Var(value)
        raise ParseError("expected a formula", pos, self.text)

    def formula_list(self) -> tuple[Formula, ...]:
        if self.peek()[0] in ("/", "end"):
            return ()
        out = [self.formula()]
        while self.peek()[0] == ",":
            self.take()
            out.append(self.formula())
        return tuple(out)


def parse_formula(text: str, signature: str) -> Formula:
    p = _Parser(text, signature)
    f = p.formula()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError("trailing input after formula", tok[2], text)
    return f


def parse_rule(text: str, signature: str) -> Rule:
    p = _Parser(text, signature)
    premises = p.formula_list()
    p.expect("/")
    conclusions = p.formula_list()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError("trailing input after rule", tok[2], text)
    return Rule(premises, conclusions, signature)


def parse(text: str, signature: str):
    """A rule when a '/' separator occurs, otherwise a single formula."""
    if any(tok[0] == "/" for tok in _tokenize(text)):
        return parse_rule(text, signature)
    return parse_formula(text, signature)


def to_text(f: Formula) -> str:
    return _render(f, 0)


def _render(f: Formula, level: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return f.name
    if isinstance(f, Not):
        return "~" + _render(f.arg, 3)
    if isinstance(f, Box):
        return "box " + _render(f.arg, 3)
    if isinstance(f, Imp):
        s = _render(f.left, 1) + " -> " + _render(f.right, 0)
        need = level > 0
    elif isinstance(f, Or):
        s = _render(f.left, 1) + " | " + _render(f.right, 2)
        need = level > 1
    else:
        s = _render(f.left, 2) + " & " + _render(f.right, 3)
        need = level > 2
    return "(" + s + ")" if need else s


def rule_to_text(rule: Rule) -> str:
    return (
        ", ".join(to_text(f) for f in rule.premises)
        + " / "
        + ", ".join(to_text(f) for f in rule.conclusions)
    ).strip()


def sentence_from_json(doc: dict, signature: str) -> UniversalSentence:
    """Equations as pairs of term strings, premises then conclusions."""
    if not isinstance(doc, dict):
        raise InputError("sentence document must be an object")
    sides = {}
    for key in ("premises", "conclusions"):
        pairs = doc.get(key, [])
        if not isinstance(pairs, list) or any(
            not isinstance(p, list) or len(p) != 2 for p in pairs
        ):
            raise InputError(f"{key} must be a list of [lhs, rhs] pairs")
        sides[key] = tuple(
            (parse_formula(l, signature), parse_formula(r, signature)) for l, r in pairs
        )
    variables: list[str] = []
    for lhs, rhs in sides["premises"] + sides["conclusions"]:
        formula_vars(lhs, variables)
        formula_vars(rhs, variables)
    return UniversalSentence(
        sides["premises"], sides["conclusions"], signature, tuple(variables)
    )


def sentence_to_json(sent: UniversalSentence) -> dict:
    return {
        "premises": [[to_text(l), to_text(r)] for l, r in sent.premises],
        "conclusions": [[to_text(l), to_text(r)] for l, r in sent.conclusions],
    }


# ---------------------------------------------------------------------------
# Evaluation


def _compile_formula(f, var_index, bot, top, modal, code, arg):
    if isinstance(f, Var):
        code.append(kernels.OP_VAR)
        arg.append(var_index[f.name])
    elif isinstance(f, Const):
        code.append(kernels.OP_CONST)
        arg.append(bot if f.name == "bot" else top)
    elif isinstance(f, Not):
        if modal:
            _compile_formula(f.arg, var_index, bot, top, modal, code, arg)
            code.append(kernels.OP_NOT)
            arg.append(0)
        else:
            # ~a is a -> bot in the heyting signature
            _compile_formula(f.arg, var_index, bot, top, modal, code, arg)
            code.append(kernels.OP_CONST)
            arg.append(bot)
            code.append(kernels.OP_IMP)
            arg.append(0)
    elif isinstance(f, Box):
        if not modal:
            raise InputError("box formula on a heyting algebra")
        _compile_formula(f.arg, var_index, bot, top, modal, code, arg)
        code.append(kernels.OP_BOX)
        arg.append(0)
    elif isinstance(f, (And, Or, Imp)):
        _compile_formula(f.left, var_index, bot, top, modal, code, arg)
        _compile_formula(f.right, var_index, bot, top, modal, code, arg)
        code.append(
            kernels.OP_MEET
            if isinstance(f, And)
            else kernels.OP_JOIN
            if isinstance(f, Or)
            else kernels.OP_IMP
        )
        arg.append(0)
    else:
        raise InputError(f"not a formula: {f!r}")


def compile_sentence(sent: UniversalSentence, algebra):
    """Postfix programs plus equation boundaries for the scan kernels."""
    modal = isinstance(algebra, ModalAlgebra)
    bot = 0 if modal else algebra.bot
    top = algebra.top
    var_index = {name: i for i, name in enumerate(sent.variables)}
    code: list[int] = []
    arg: list[int] = []
    eqb: list[list[int]] = []
    for lhs, rhs in sent.premises + sent.conclusions:
        row = [len(code)]
        _compile_formula(lhs, var_index, bot, top, modal, code, arg)
        row.append(len(code))
        row.append(len(code))
        _compile_formula(rhs, var_index, bot, top, modal, code, arg)
        row.append(len(code))
        eqb.append(row)
    return (
        np.array(code, dtype=np.int64),
        np.array(arg, dtype=np.int64),
        np.array(eqb, dtype=np.int64).reshape(-1, 4),
        len(sent.premises),
    )


def _require_signature(algebra, sent: UniversalSentence) -> None:
    if isinstance(algebra, ModalAlgebra):
        if sent.signature != "modal":
            raise InputError("modal algebra needs a modal-signature sentence")
    elif isinstance(algebra, HeytingAlgebra):
        if sent.signature != "heyting":
            raise InputError("heyting algebra needs a heyting-signature sentence")
    else:
        raise InputError(f"cannot evaluate on {type(algebra).__name__}")


def eval_sentence(
    algebra,
    sent: UniversalSentence,
    cap: int = EVAL_CAP,
    force_backend: str | None = None,
) -> dict:
    """Validity on one algebra, with the least counterexample when refuted.

    Assignments are ordered with the first variable as the most significant
    digit and elements in index order.
    """
    _require_signature(algebra, sent)
    size = algebra.size
    nvars = len(sent.variables)
    total = size**nvars
    if total > cap:
        raise CapExceeded(
            f"sentence needs {total} assignments on this algebra, cap is {cap}"
        )
    code, arg, eqb, n_prem = compile_sentence(sent, algebra)
    if isinstance(algebra, ModalAlgebra):
        idx = kernels.scan_modal(
            algebra.atoms, nvars, code, arg, eqb, n_prem, algebra.box, force_backend
        )
    else:
        idx = kernels.scan_heyting(
            size,
            nvars,
            code,
            arg,
            eqb,
            n_prem,
            algebra.meet,
            algebra.join,
            algebra.imp,
            force_backend,
        )
    if idx < 0:
        return {"valid": True, "counterexample": None}
    assignment = {}
    rest = idx
    for name in reversed(sent.variables):
        assignment[name] = rest % size
        rest //= size
    return {
        "valid": False,
        "counterexample": {name: assignment[name] for name in sent.variables},
    }


def catalog_validates(cat, sent: UniversalSentence, cap: int = EVAL_CAP) -> dict:
    """Validity across a catalog; names the first failing member."""
    for i, member in enumerate(cat.members):
        res = eval_sentence(member, sent, cap)
        if not res["valid"]:
            return {
                "valid": False,
                "failing_member": i,
                "counterexample": res["counterexample"],
            }
    return {"valid": True, "failing_member": None, "counterexample": None}


def eval_formula(algebra, f: Formula, env: dict[str, int]) -> int:
    """One formula under one assignment; env maps variable names to elements."""
    if isinstance(algebra, ModalAlgebra):
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, Const):
            return 0 if f.name == "bot" else algebra.top
        if isinstance(f, Not):
            return algebra.top ^ eval_formula(algebra, f.arg, env)
        if isinstance(f, Box):
            return int(algebra.box[eval_formula(algebra, f.arg, env)])
        x = eval_formula(algebra, f.left, env)
        y = eval_formula(algebra, f.right, env)
        if isinstance(f, And):
            return x & y
        if isinstance(f, Or):
            return x | y
        return (algebra.top ^ x) | y
    if isinstance(f, Var):
        return env[f.name]
    if isinstance(f, Const):
        return algebra.bot if f.name == "bot" else algebra.top
    if isinstance(f, Not):
        return int(algebra.imp[eval_formula(algebra, f.arg, env), algebra.bot])
    if isinstance(f, Box):
        raise InputError("box formula on a heyting algebra")
    x = eval_formula(algebra, f.left, env)
    y = eval_formula(algebra, f.right, env)
    table = algebra.meet if isinstance(f, And) else algebra.join if isinstance(f, Or) else algebra.imp
    return int(table[x, y])


# ---------------------------------------------------------------------------
# Candidate enumeration for the completeness falsifiers


def enumerate_formulas(signature: str, variables: tuple[str, ...], depth: int) -> list[Formula]:
    """All formulas to the given connective depth, deterministically ordered."""
    if signature not in SIGNATURES:
        raise InputError(f"signature must be one of {SIGNATURES}")
    pool: list[Formula] = [Var(v) for v in variables] + [Const("bot"), Const("top")]
    seen = set(pool)
    for _ in range(depth):
        prev = list(pool)
        for f in prev:
            new: list[Formula] = [Not(f)]
            if signature == "modal":
                new.append(Box(f))
            for g in prev:
                new.extend((And(f, g), Or(f, g), Imp(f, g)))
            for cand in new:
                if cand not in seen:
                    seen.add(cand)
                    pool.append(cand)
    return pool


def enumerate_rules(
    signature: str,
    max_vars: int,
    max_premises: int,
    depth: int = 1,
    conclusions: int = 1,
) -> list[Rule]:
    """Candidate rules over a bounded formula pool, smallest first."""
    names = ("p", "q", "r", "s")[:max_vars]
    pool = enumerate_formulas(signature, names, depth)
    out = []
    for n_prem in range(max_premises + 1):
        for prem in itertools.combinations(pool, n_prem):
            for concl in itertools.combinations(pool, conclusions):
                out.append(Rule(prem, concl, signature))
    return out


def grz_formula() -> Formula:
    return parse_formula("box(box(p -> box p) -> p) -> p", "modal")
