"""Command-line front end: ``probmine <subcommand> ...``.

Exit status 0 means success or PASS, 1 a FAIL (a false formula for ``eval``,
an unmet side condition for ``rewrite``), 2 a usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ProbmineError, FormulaSyntaxError, SideConditionUnmet
from .kernel.types import NAT, EVENT, Arrow, parse_type, show_type
from .kernel.syntax import Var, ProbGeq
from .kernel.parser import parse_formula, parse_term
from .kernel.printer import show
from .kernel.typecheck import typecheck, free_types
from .interp import kuroda, dialectica, modified_realizability
from .prob.expand import expand_node, inner_expand
from .prob.forms import detect_form, quantitative_interpretation
from .prob.rewrite import prenex_rewrite, Side
from .prob.schemas import instantiate_ub, instantiate_cc
from .prob.algebra import sigma_additivity_statement
from .prob.modulus import ModulusTable, transform_modulus_equiv
from .model.content import EvalBounds, parse_model
from .model.evaluate import evaluate
from .model.fleet import FLEET_NAMES, model_text
from .model.fluct import count_fluctuations
from .model.check import check_modulus, KINDS
from .suites import SUITES, run_suite


class UsageError(Exception):
    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; route its complaints through our exit code instead
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- shared helpers

def _ctx(items):
    ctx = {}
    for item in items or ():
        name, sep, text = item.partition(":")
        if not sep or not name:
            raise UsageError(f"--ctx expects name:type, got {item!r}", item)
        ctx[name.strip()] = parse_type(text.strip())
    return ctx


def _formula(text, ctx_items=None):
    ctx = _ctx(ctx_items)
    return parse_formula(text, ctx), ctx


def resolve_model(spec):
    """A model file path, a bundled fleet name, or ``name.model`` for a bundled one."""
    path = Path(spec)
    if path.is_file():
        return parse_model(path.read_text(), name=path.stem)
    stem = path.name[:-len(".model")] if path.name.endswith(".model") else path.name
    if stem in FLEET_NAMES:
        return parse_model(model_text(stem), name=stem)
    raise UsageError(f"no model file or bundled model named {spec!r} (bundled: {', '.join(FLEET_NAMES)})", spec)


def _bounds(file_bounds, nat, fun):
    b = file_bounds or EvalBounds()
    d, r = b.fun_bound
    if fun is not None:
        try:
            d, r = (int(p) for p in fun.lower().split("x"))
        except ValueError:
            raise UsageError(f"--fun expects DxR, got {fun!r}", fun) from None
    return EvalBounds(nat_bound=b.nat_bound if nat is None else nat, fun_bound=(d, r),
                      rat_grid=b.rat_grid, cap=b.cap)


def _value(text):
    """Env value: JSON, a set ``{a b}``, a rational ``p/q`` or a bare sample point."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}") and ":" not in text:
        return text[1:-1].split()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    if "/" in text:
        try:
            return Fraction(text)
        except ValueError:
            pass
    return text


def _env(items):
    env = {}
    for item in items or ():
        name, sep, text = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--env expects name=value, got {item!r}", item)
        env[name.strip()] = _value(text)
    return env


def _modulus(args):
    params = tuple(p.strip() for p in args.params.split(","))
    if args.expr is not None:
        return ModulusTable.from_expr(args.expr, params)
    if args.table is not None:
        try:
            raw = json.loads(args.table)
        except json.JSONDecodeError as e:
            raise UsageError(f"--table is not JSON: {e}", args.table) from None
        table = {tuple(int(p) for p in str(k).split(",")): int(v) for k, v in raw.items()}
        return ModulusTable(params, table=table)
    raise UsageError("give --expr or --table")


def _out(text=""):
    print(text)


# ---------------------------------------------------------------- subcommands

def cmd_parse(args):
    f, ctx = _formula(args.formula, args.ctx)
    _out(show(f, ctx))
    return 0


def cmd_typecheck(args):
    f, ctx = _formula(args.formula, args.ctx)
    typecheck(f, ctx)
    frees = free_types(f, ctx)
    _out("well-formed")
    for name, t in frees.items():
        _out(f"{name} : {show_type(t)}")
    return 0


def cmd_translate(args):
    f, ctx = _formula(args.formula, args.ctx)
    if args.kuroda:
        _out(show(kuroda(f), ctx))
        return 0
    if args.dialectica:
        d = dialectica(f)
        if args.header:
            _out("exists: " + " ".join(f"{v.name}:{show_type(v.type)}" for v in d.exists_vars)
                 + " | forall: " + " ".join(f"{v.name}:{show_type(v.type)}" for v in d.forall_vars))
        _out(show(d.render(), ctx))
        return 0
    m = modified_realizability(f)
    if args.header:
        _out("witness: " + " ".join(f"{v.name}:{show_type(v.type)}" for v in m.witness_vars))
    _out(show(m.render(), ctx))
    return 0


def cmd_prob(args):
    f, ctx = _formula(args.formula, args.ctx)
    if args.action == "expand":
        _out(show(expand_node(f), ctx))
    elif args.action == "inner":
        if not isinstance(f, ProbGeq):
            raise UsageError("prob inner expects a formula of the form Pr[...] >= lam")
        _out(show(inner_expand(f.body, f.lam, f.sample), ctx))
    elif args.action == "form":
        pf = detect_form(f)
        _out(f"shape: {pf.shape}")
        if pf.outer_vars:
            _out("outer: " + " ".join(f"{v.name}:{show_type(v.type)}" for v in pf.outer_vars))
        if pf.inner_var is not None:
            _out(f"inner: {pf.inner_var.name}")
        if pf.error_var is not None:
            _out(f"error: {pf.error_var.name}")
        if pf.diagnostic:
            _out(f"diagnostic: {pf.diagnostic}")
    else:
        pf = detect_form(f)
        spec = quantitative_interpretation(pf, args.mode, "Monotone" if args.monotone else None)
        _out(f"kind: {spec.kind}  modulus: {spec.modulus.name}:{show_type(spec.modulus.type)}")
        _out(show(spec.spec_formula, ctx))
    return 0


def cmd_rewrite(args):
    f, ctx = _formula(args.formula, args.ctx)
    position = ()
    if args.position:
        try:
            position = tuple(int(p) for p in args.position.split(","))
        except ValueError:
            raise UsageError(f"--position expects comma-separated child indices, got {args.position!r}",
                             args.position) from None
    oracle = None
    if args.model:
        space, fb = resolve_model(args.model)
        oracle = (space, _bounds(fb, args.nat, args.fun), _env(args.env))
    witness = parse_term(args.witness, ctx) if args.witness else None
    target = parse_formula(args.target, ctx) if args.target else None
    side = Side(verdict=args.verdict, witness=witness, target=target, oracle=oracle,
                assume=frozenset(args.assume or ()))
    out, just = prenex_rewrite(f, args.rule, side, position)
    _out(show(out, ctx))
    _out("principles: " + (", ".join(just.principles) if just.principles else "(none)"))
    return 0


def _default_ub_phi(betas):
    # generic relation R k x w z... =0 0
    zs = [f"z{i + 1}" for i in range(len(betas))] if len(betas) != 1 else ["z"]
    return "R k x w" + "".join(f" {z}" for z in zs) + " =0 0"


def cmd_schema(args):
    betas = [parse_type(b) for b in args.beta or ()]
    if args.kind == "ub":
        if args.rho is None:
            raise UsageError("schema ub needs --rho TYPE")
        rho = parse_type(args.rho)
        alpha = parse_type(args.alpha) if args.alpha else NAT
        ctx = {"y": Arrow(alpha, NAT), "k": NAT, "x": alpha, "w": rho}
        zs = [f"z{i + 1}" for i in range(len(betas))] if len(betas) != 1 else ["z"]
        ctx.update({z: b for z, b in zip(zs, betas)})
        ctx.update(_ctx(args.ctx))
        text = args.phi or _default_ub_phi(betas)
        phi = parse_formula(text, ctx)
        inst = instantiate_ub(rho, args.sort, phi, alpha, betas, "full" if args.full else "restricted")
    else:
        zs = [f"z{i + 1}" for i in range(len(betas))] if len(betas) != 1 else ["z"]
        ctx = {"n": NAT, **{z: b for z, b in zip(zs, betas)}, **_ctx(args.ctx)}
        text = args.phi or ("R n" + "".join(f" {z}" for z in zs) + " =0 0")
        phi = parse_formula(text, ctx)
        inst = instantiate_cc(args.sort, phi, betas)
    _out(f"principle: {inst.principle}")
    _out(show(inst.rendered))
    return 0


def cmd_sigma_add(args):
    a = Var(args.seq, Arrow(EVENT, NAT))
    lower, upper = sigma_additivity_statement(a)
    _out(show(lower))
    _out(show(upper))
    return 0


def cmd_eval(args):
    f, ctx = _formula(args.formula, args.ctx)
    space, fb = resolve_model(args.model)
    value = evaluate(f, space, _bounds(fb, args.nat, args.fun), _env(args.env))
    _out("true" if value else "false")
    return 0 if value else 1


def cmd_verify(args):
    space = resolve_model(args.model)[0] if args.model else None
    kw = {}
    if args.count is not None:
        kw["count"] = args.count
    res = run_suite(args.suite, seed=args.seed, model=space, **kw)
    _out(res.line())
    return 0 if res.passed else 1


def cmd_fluct(args):
    try:
        seq = [Fraction(p) for p in args.seq.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"--seq expects comma-separated rationals, got {args.seq!r}", args.seq) from None
    horizon = len(seq) if args.horizon is None else args.horizon
    _out(str(count_fluctuations(seq, args.k, horizon)))
    return 0


def cmd_modulus(args):
    phi = _modulus(args)
    if args.action == "transform":
        _out(transform_modulus_equiv(phi).describe())
        return 0
    if args.kind is None or args.data is None or args.model is None:
        raise UsageError("modulus check needs --kind, --data and --model")
    try:
        data = json.loads(args.data)
    except json.JSONDecodeError as e:
        raise UsageError(f"--data is not JSON: {e}", args.data) from None
    space, fb = resolve_model(args.model)
    report = check_modulus(args.kind, phi, data, space, _bounds(fb, args.nat, args.fun), args.horizon)
    _out(report.line())
    return 0 if report.passed else 1


# ---------------------------------------------------------------- grammar

def _add_ctx(p):
    p.add_argument("--ctx", action="append", metavar="NAME:TYPE",
                   help="type of a free variable, e.g. A:Ev(0); repeatable")


def _add_bounds(p):
    p.add_argument("--nat", type=int, help="range 0..N for type-0 quantifiers")
    p.add_argument("--fun", metavar="DxR", help="function arguments 0..D, natural results 0..R")


def build_parser():
    top = _Parser(prog="probmine", description="Formulas with probability operators over finite content spaces.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("parse", help="parse and pretty-print a formula")
    p.add_argument("formula")
    _add_ctx(p)
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("typecheck", help="check well-formedness and list inferred free-variable types")
    p.add_argument("formula")
    _add_ctx(p)
    p.set_defaults(run=cmd_typecheck)

    p = sub.add_parser("translate", help="negative, functional or realizability translation")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kuroda", action="store_true")
    g.add_argument("--dialectica", action="store_true")
    g.add_argument("--mr", action="store_true")
    p.add_argument("--header", action="store_true", help="first print a line naming the new variables")
    p.add_argument("formula")
    _add_ctx(p)
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("prob", help="expand, classify or interpret probability statements")
    p.add_argument("action", choices=("expand", "inner", "form", "interpret"))
    p.add_argument("formula")
    p.add_argument("--mode", choices=("c", "i"), default="c", help="classical or intuitionistic modulus")
    p.add_argument("--monotone", action="store_true", help="the matrix is monotone in the inner variable")
    _add_ctx(p)
    p.set_defaults(run=cmd_prob)

    p = sub.add_parser("rewrite", help="apply one prenexation rule")
    p.add_argument("formula")
    p.add_argument("--rule", required=True, help="R1 .. R13")
    p.add_argument("--assume", action="append", metavar="COND",
                   help="side condition accepted without evidence, e.g. AntiMonotone; repeatable")
    p.add_argument("--verdict", choices=("Monotone", "AntiMonotone"), help="monotonicity of the quantified variable")
    p.add_argument("--position", help="child indices of the target subformula, e.g. 0,1")
    p.add_argument("--witness", metavar="TERM", help="measurable set or null set term")
    p.add_argument("--target", metavar="FORMULA", help="replacement probability body (R13)")
    p.add_argument("--model", help="model used to derive verdicts and check witnesses")
    p.add_argument("--env", action="append", metavar="NAME=VALUE")
    _add_bounds(p)
    _add_ctx(p)
    p.set_defaults(run=cmd_rewrite)

    p = sub.add_parser("schema", help="instantiate a uniform boundedness or contra-collection schema")
    p.add_argument("kind", choices=("ub", "cc"))
    p.add_argument("--sort", choices=("omega", "ev"), required=True)
    p.add_argument("--rho", metavar="TYPE", help="pure type of the bounded variable (ub)")
    p.add_argument("--full", action="store_true", help="unrestricted matrix class (ub)")
    p.add_argument("--alpha", metavar="TYPE", help="type of x (ub); default 0")
    p.add_argument("--beta", action="append", metavar="TYPE", help="type of a z parameter; repeatable")
    p.add_argument("--phi", metavar="FORMULA", help="matrix; default a generic relation R")
    _add_ctx(p)
    p.set_defaults(run=cmd_schema)

    p = sub.add_parser("sigma-add", help="print the two halves of countable additivity")
    p.add_argument("--seq", default="A", help="name of the event sequence (type Ev(0))")
    p.set_defaults(run=cmd_sigma_add)

    p = sub.add_parser("eval", help="evaluate a closed formula on a model")
    p.add_argument("formula")
    p.add_argument("--model", required=True, help="model file or bundled name")
    p.add_argument("--env", action="append", metavar="NAME=VALUE",
                   help="value of a free variable: JSON, {a b}, p/q or a sample point")
    _add_bounds(p)
    _add_ctx(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--model", help="model file or bundled name; default the whole fleet")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("fluct", help="count 2^-k fluctuations of a finite sequence")
    p.add_argument("--seq", required=True, help="comma-separated rationals")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--horizon", type=int)
    p.set_defaults(run=cmd_fluct)

    p = sub.add_parser("modulus", help="transform or check a modulus")
    p.add_argument("action", choices=("transform", "check"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--expr", help="arithmetic over m, x (or m, k, g) with + * max")
    g.add_argument("--table", help='JSON object {"m,x": value, ...}')
    p.add_argument("--params", default="m,x", help="argument names, comma-separated")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--data", help="JSON event family or process")
    p.add_argument("--model")
    p.add_argument("--horizon", type=int)
    _add_bounds(p)
    p.set_defaults(run=cmd_modulus)
    return top


def _grammar(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command].format_usage().strip()
    return parser.format_usage().strip()


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        return args.run(args)
    except UsageError as e:
        print(f"probmine: error: {e}", file=sys.stderr)
        if e.token is not None:
            print(f"offending token: {e.token}", file=sys.stderr)
        print(_grammar(parser, command), file=sys.stderr)
        return 2
    except FormulaSyntaxError as e:
        print(f"probmine: {e}", file=sys.stderr)
        if e.text:
            tail = e.text[e.position:].split()
            print(f"offending token: {tail[0] if tail else '<end of input>'}", file=sys.stderr)
        print(_grammar(parser, command), file=sys.stderr)
        return 2
    except SideConditionUnmet as e:
        # a refused rewrite is a negative answer, not a usage error
        print(f"FAIL {e}")
        return 1
    except (ProbmineError, ValueError, TypeError) as e:
        print(f"probmine: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())
