"""Recursive-descent parser for the concrete formula grammar.

Unannotated free variables get their types by unification; a free variable
whose type stays open must be annotated once as ``name:type``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .types import NAT, OMEGA, EVENT, RAT, BASES, Arrow, pure
from .syntax import (
    Var, App, Lam, NatLit, Add, MinAlpha, Union, Compl, EmptySet, Up, CONSTANTS, Const,
    RatLit, QVal, ProbOf, RAdd, RSub, RMin, PowHalf, RSum,
    NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq,
)
from .typecheck import TMeta, infer
from ..errors import FormulaSyntaxError, UnknownSort

KEYWORDS = {"all", "ex", "in", "Pr", "min", "up", "sum", "empty", "cup"}
NAT_CMP = {"=0": "=", "<0": "<", "<=0": "<=", ">=0": ">=", ">0": ">"}
REAL_CMP = ("<", "<=", "=", ">=", ">")

_UNICODE = {"∀": "all ", "∃": "ex ", "¬": "!", "∧": "&", "∨": "|", "→": "->",
            "≤": "<=", "≥": ">=", "∈": " in "}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<natcmp>(?:<=|>=|=|<|>)0(?![\w/']))
  | (?P<arrow>->)
  | (?P<pow>2\^-)
  | (?P<compl>\^c)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op><=|>=|[<>=()\[\],.:|&!+\-*\\/;])
""", re.VERBOSE)


class Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"{self.kind}:{self.text}@{self.pos}"


def tokenize(text):
    for u, a in _UNICODE.items():
        text = text.replace(u, a)
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(pos, ["a token"], text)
        kind = m.lastgroup
        s = m.group(kind)
        if kind == "ident" and s in KEYWORDS:
            kind = "kw"
        if kind == "op":
            kind = s
        if kind != "ws":
            toks.append(Tok(kind, s, pos))
        pos = m.end()
    toks.append(Tok("eof", "", len(text)))
    return toks, text


class _Fail(Exception):
    pass


class Parser:
    def __init__(self, text):
        self.toks, self.text = tokenize(text)
        self.i = 0
        self.best_pos = -1
        self.best_expected = set()
        self.metas = {}

    # ---- token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def fail(self, *expected):
        pos = self.tok.pos
        if pos > self.best_pos:
            self.best_pos, self.best_expected = pos, set(expected)
        elif pos == self.best_pos:
            self.best_expected |= set(expected)
        raise _Fail()

    def at(self, kind, text=None):
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind, text=None):
        if not self.at(kind, text):
            self.fail(text or kind)
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind, text=None):
        if self.at(kind, text):
            self.i += 1
            return True
        return False

    def attempt(self, fn, *args):
        save = self.i
        try:
            return fn(*args)
        except _Fail:
            self.i = save
            return None

    # ---- entry points
    def parse(self, what):
        try:
            node = what({})
            if not self.at("eof"):
                self.fail("end of input")
        except _Fail:
            raise FormulaSyntaxError(self.best_pos, self.best_expected, self.text) from None
        return node

    # ---- types
    def type_(self):
        t = self.type_atom()
        while self.at("(") and self._type_follows():
            self.expect("(")
            a = self.type_()
            self.expect(")")
            t = Arrow(t, a)
        return t

    def _type_follows(self):
        # a '(' continues a type only if a type starts right after it
        nxt = self.peek()
        return nxt.kind == "num" or nxt.kind == "(" or (nxt.kind == "ident" and nxt.text in BASES)

    def type_atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return pure(int(t.text))
        if t.kind == "ident" and t.text in BASES:
            self.i += 1
            return BASES[t.text]
        if t.kind == "ident":
            raise UnknownSort(f"unknown sort {t.text!r} at position {t.pos}")
        if t.kind == "(":
            self.i += 1
            inner = self.type_()
            self.expect(")")
            return inner
        self.fail("a sort")

    # ---- formulas
    def formula(self, env):
        if self.at("kw", "all") or self.at("kw", "ex"):
            return self.quant(env)
        return self.implication(env)

    def quant(self, env):
        universal = self.expect("kw").text == "all"
        name = self.expect("ident").text
        if self.accept("<="):
            bound = self.term(env, annotations=False)
            self.expect(":")
            t = self.type_()
            self.expect(".")
            v = Var(name, t)
            body = self.formula({**env, name: t})
            return (BForall if universal else BExists)(v, bound, body)
        self.expect(":")
        t = self.type_()
        self.expect(".")
        v = Var(name, t)
        body = self.formula({**env, name: t})
        return (Forall if universal else Exists)(v, body)

    def implication(self, env):
        left = self.disjunction(env)
        if self.accept("arrow"):
            return Implies(left, self.implication(env))
        return left

    def disjunction(self, env):
        left = self.conjunction(env)
        while self.accept("|"):
            left = Or(left, self.conjunction(env))
        return left

    def conjunction(self, env):
        left = self.unary(env)
        while self.accept("&"):
            left = And(left, self.unary(env))
        return left

    def unary(self, env):
        if self.accept("!"):
            return Not(self.unary(env))
        if self.at("kw", "all") or self.at("kw", "ex"):
            return self.quant(env)
        if self.at("kw", "Pr") and self.peek().kind == "[":
            return self.prob(env)
        if self.at("("):
            atom = self.attempt(self.atom, env)
            if atom is not None:
                return atom
            self.expect("(")
            f = self.formula(env)
            self.expect(")")
            return f
        return self.atom(env)

    def prob(self, env):
        self.expect("kw", "Pr")
        self.expect("[")
        sample = "w"
        if self.at("ident") and self.peek().kind == ".":
            sample = self.tok.text
            self.i += 2
        body = self.formula({**env, sample: OMEGA})
        self.expect("]")
        if self.accept(">="):
            return ProbGeq(body, self.rexpr(env), sample)
        if self.accept("<="):
            return ProbLeq(body, self.rexpr(env), sample)
        self.fail(">=", "<=")

    def atom(self, env):
        save = self.i
        try:
            left = self.term(env)
            if self.at("natcmp"):
                op = NAT_CMP[self.tok.text]
                self.i += 1
                return NatCmp(op, left, self.term(env))
            if self.accept("kw", "in"):
                return AtomIn(left, self.term(env))
            self.fail("=0", "<0", "<=0", ">=0", ">0", "in")
        except _Fail:
            self.i = save
        left = self.rexpr(env)
        for op in REAL_CMP:
            if self.accept(op):
                return RealCmp(left, op, self.rexpr(env))
        self.fail(*REAL_CMP)

    # ---- terms
    def term(self, env, annotations=True):
        if self.at("\\"):
            return self.lam(env)
        left = self.add_term(env, annotations)
        while self.accept("kw", "cup"):
            left = Union(left, self.add_term(env, annotations))
        return left

    def add_term(self, env, annotations=True):
        left = self.app_term(env, annotations)
        while self.accept("+"):
            left = Add(left, self.app_term(env, annotations))
        return left

    def app_term(self, env, annotations=True):
        head = self.post_term(env, annotations)
        while self._starts_post():
            head = App(head, self.post_term(env, annotations))
        return head

    def _starts_post(self):
        t = self.tok
        if t.kind in ("num", "("):
            return True
        if t.kind == "ident":
            return True
        return t.kind == "kw" and t.text in ("empty", "up") or (t.kind == "kw" and t.text == "min" and self.peek().kind == "[")

    def post_term(self, env, annotations=True):
        e = self.prim(env, annotations)
        while self.accept("compl"):
            e = Compl(e)
        return e

    def prim(self, env, annotations=True):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return NatLit(int(t.text))
        if t.kind == "ident":
            self.i += 1
            return self.ident(t.text, env, annotations)
        if t.kind == "kw" and t.text == "empty":
            self.i += 1
            return EmptySet()
        if t.kind == "kw" and t.text == "up":
            self.i += 1
            self.expect("(")
            s = self.term(env)
            self.expect(")")
            return Up(s)
        if t.kind == "kw" and t.text == "min" and self.peek().kind == "[":
            self.i += 2
            ty = self.type_()
            self.expect("]")
            self.expect("(")
            a = self.term(env)
            self.expect(",")
            b = self.term(env)
            self.expect(")")
            return MinAlpha(ty, a, b)
        if t.kind == "(":
            self.i += 1
            e = self.term(env)
            self.expect(")")
            return e
        self.fail("a term")

    def lam(self, env):
        self.expect("\\")
        name = self.expect("ident").text
        self.expect(":")
        t = self.type_()
        self.expect(".")
        return Lam(Var(name, t), self.term({**env, name: t}))

    def ident(self, name, env, annotations):
        if name in BASES:
            self.i -= 1
            self.fail("a variable name")
        if annotations and self.at(":"):
            self.i += 1
            t = self.type_()
            if name in env and env[name] != t:
                self.fail("annotation matching the binder")
            return Var(name, t)
        if name in env:
            return Var(name, env[name])
        if name in CONSTANTS:
            return Const(name, CONSTANTS[name])
        if name not in self.metas:
            self.metas[name] = TMeta(name)
        return Var(name, self.metas[name])

    # ---- real terms
    def rexpr(self, env):
        left = self.rterm(env)
        while True:
            if self.accept("+"):
                left = RAdd(left, self.rterm(env))
            elif self.accept("-"):
                left = RSub(left, self.rterm(env))
            else:
                return left

    def rterm(self, env):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            if self.accept("/"):
                q = self.expect("num")
                if int(q.text) == 0:
                    self.fail("a non-zero denominator")
                return RatLit(Fraction(int(t.text), int(q.text)))
            return RatLit(Fraction(int(t.text)))
        if t.kind == "pow":
            self.i += 1
            return PowHalf(self.post_term(env))
        if t.kind == "kw" and t.text == "Pr" and self.peek().kind == "(":
            self.i += 2
            e = self.term(env)
            self.expect(")")
            return ProbOf(e)
        if t.kind == "kw" and t.text == "min" and self.peek().kind == "(":
            self.i += 2
            a = self.rexpr(env)
            self.expect(",")
            b = self.rexpr(env)
            self.expect(")")
            return RMin(a, b)
        if t.kind == "kw" and t.text == "sum":
            self.i += 1
            self.expect("[")
            name = self.expect("ident").text
            self.expect("<=")
            bound = self.term(env)
            self.expect("]")
            self.expect("(")
            body = self.rexpr({**env, name: NAT})
            self.expect(")")
            return RSum(Var(name, NAT), bound, body)
        if t.kind == "(":
            r = self.attempt(self._paren_real, env)
            if r is not None:
                return r
        return QVal(self.app_term(env))

    def _paren_real(self, env):
        self.expect("(")
        r = self.rexpr(env)
        self.expect(")")
        return r


def parse_formula(text, ctx=None):
    p = Parser(text)
    node = p.parse(p.formula)
    return infer(node, ctx)


def parse_term(text, ctx=None):
    p = Parser(text)
    node = p.parse(lambda env: p.term(env))
    return infer(node, ctx)


def parse_real(text, ctx=None):
    p = Parser(text)
    node = p.parse(lambda env: p.rexpr(env))
    return infer(node, ctx)
