"""Command-line driver.

Expressions use the grammar

    expr    := chain | sum
    chain   := '[' [sum ('|' sum)*] ']'
    sum     := ['-'] term (('+' | '-') term)*
    term    := [scalar '*'] product | scalar
    product := factor ('.' factor)*
    factor  := (atom | '(' sum ')') ('*' 's' '^' INT)*
    atom    := e(i) | p(i) | q(i) | s(i) | a(j,i)
    scalar  := INT ['/' INT]

Composition ``x.y`` applies ``y`` first. Output is key-sorted JSON unless
``--format text`` is given. Exit codes: 0 success, 1 a verification failed,
2 bad flags or input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .bimodules_transfer import BarElement, bar_term, make_module, transfer_G
from .braiding import composable_chains, verify_functor
from .hochschild import check_d_squared, hh_table
from .klrw_core import (
    AlgebraElement,
    KLRWError,
    NormalMorphism,
    QuiverConfig,
    e,
    mu2,
    reduce_word,
)
from .klrw_core import p as arrow_p, q as arrow_q, s as arrow_s
from .nattrans import NatParams, NaturalTransformation, ParameterError, cocycle_residual
from .resolution import (
    S_counts,
    check_boundary_squared,
    check_exactness,
    check_recursive_agreement,
)


class ExprSyntaxError(KLRWError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.column = line, col


# ---------------------------------------------------------------------------
# expression parser


class _Parser:
    def __init__(self, text: str, cfg: QuiverConfig | None = None):
        self.text = text
        self.cfg = cfg
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise ExprSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, k: int = 0) -> str:
        self.skip()
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}, found {self.peek() or 'end of input'!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def scalar(self) -> Fraction:
        num = self.integer()
        if self.peek() == "/":
            self.pos += 1
            den_pos = self.pos
            den = self.integer()
            if den == 0:
                self.error("zero denominator", den_pos)
            return Fraction(num, den)
        return Fraction(num)

    # grammar -------------------------------------------------------------

    def top(self):
        if self.peek() == "[":
            self.pos += 1
            items = []
            if self.peek() != "]":
                items.append(self.sum())
                while self.peek() == "|":
                    self.pos += 1
                    items.append(self.sum())
            self.eat("]")
            out = items
        else:
            out = self.sum()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return out

    def sum(self) -> AlgebraElement:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        total = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            x = self.term()
            total = total + x if op == "+" else total - x
        return total

    def term(self) -> AlgebraElement:
        if self.peek().isdigit():
            c = self.scalar()
            if self.peek() == "*":
                self.pos += 1
                return self.product() * c
            if c == 0:
                return AlgebraElement()
            self.error("a nonzero scalar needs a morphism")
        return self.product()

    def product(self) -> AlgebraElement:
        start = self.pos
        out = self.factor()
        while self.peek() == ".":
            self.pos += 1
            fpos = self.pos
            right = self.factor()
            try:
                out = mu2(out, right)
            except KLRWError as exc:
                self.skip()
                self.error(f"factor does not compose: {exc}", fpos if fpos > start else start)
        return out

    def factor(self) -> AlgebraElement:
        if self.peek() == "(":
            self.pos += 1
            x = self.sum()
            self.eat(")")
        else:
            x = self.atom()
        while self.peek() == "*" and self.peek(1) == "s" and self._dot_suffix_ahead():
            self.pos += 1
            self.eat("s")
            self.eat("^")
            k = self.integer()
            x = AlgebraElement({NormalMorphism(m.target, m.source, m.dots + k): c for m, c in x.terms.items()})
        return x

    def _dot_suffix_ahead(self) -> bool:
        rest = self.text[self.pos:].lstrip()[1:].lstrip()
        return rest.startswith("s") and rest[1:].lstrip().startswith("^")

    def atom(self) -> AlgebraElement:
        self.skip()
        start = self.pos
        name = self.peek()
        if name not in ("e", "p", "q", "s", "a"):
            self.error(f"expected a morphism, found {name or 'end of input'!r}")
        self.pos += 1
        self.eat("(")
        args = [self.integer()]
        while self.peek() == ",":
            self.pos += 1
            args.append(self.integer())
        self.eat(")")
        want = 2 if name == "a" else 1
        if len(args) != want:
            self.error(f"{name}(...) takes {want} argument(s)", start)
        try:
            if name == "e":
                m = e(args[0])
            elif name == "a":
                m = NormalMorphism(args[0], args[1], 0)
            else:
                arrow = {"p": arrow_p, "q": arrow_q, "s": arrow_s}[name](args[0])
                m = reduce_word((arrow,))
            for v in (m.source, m.target):
                if v < 0:
                    raise KLRWError(f"object index {v} is negative")
                if self.cfg is not None:
                    self.cfg.check_object(v)
        except KLRWError as exc:
            self.error(str(exc), start)
        return AlgebraElement({m: 1})


def parse_expr(text: str, cfg: QuiverConfig | None = None):
    """Parse an element or a chain ``[x_n | ... | x_1]`` of reduced elements.

    With ``cfg`` every object index is checked against the puncture count.
    """
    return _Parser(text, cfg).top()


def format_morphism(m: NormalMorphism) -> str:
    if m.target == m.source:
        return f"e({m.source})" + (f"*s^{m.dots}" if m.dots else "")
    return f"a({m.target},{m.source})" + (f"*s^{m.dots}" if m.dots else "")


def format_element(x: AlgebraElement) -> str:
    """Canonical text, parseable by :func:`parse_expr`."""
    if not x:
        return "0"
    out = []
    for m, c in x.sorted_items():
        body = format_morphism(m)
        mag = abs(c)
        text = body if mag == 1 else f"{mag}*{body}"
        if not out:
            out.append(text if c > 0 else f"-{text}")
        else:
            out.append(("+ " if c > 0 else "- ") + text)
    return " ".join(out)


def basis_chain(items) -> list[NormalMorphism]:
    out = []
    for k, x in enumerate(items):
        if len(x.terms) != 1 or next(iter(x.terms.values())) != 1:
            raise KLRWError(f"chain entry {k + 1} must be a single basis morphism")
        out.append(next(iter(x.terms)))
    return out


# ---------------------------------------------------------------------------
# commands


def _cfg(args) -> QuiverConfig:
    return QuiverConfig(args.punctures)


def _read_input(args) -> str:
    if args.input is None or args.input == "-":
        return sys.stdin.read()
    return args.input


def cmd_counts(args):
    cfg = _cfg(args)
    counts = S_counts(cfg, args.max_degree)
    report = {
        "punctures": cfg.punctures,
        "counts": counts,
        "note": "S_0 lists the vertex idempotents, one per object",
    }
    return report, True


def cmd_verify_resolution(args):
    cfg = _cfg(args)
    squared = check_boundary_squared(cfg, args.max_degree)
    agree = check_recursive_agreement(cfg, min(args.max_degree, 5))
    exact = check_exactness(cfg, min(args.max_degree, 6), args.max_qdeg)
    failures = [r for r in exact if not r["exact"]]
    modules = [("delta", None)] + [(n, v) for v in cfg.objects for n in ("braided", "simple")]
    dsq = {}
    for name, v in modules:
        label = name if v is None else f"{name}({v})"
        dsq[label] = len(check_d_squared(make_module(cfg, name, v), args.max_degree, -2 * args.max_qdeg))
    report = {
        "punctures": cfg.punctures,
        "boundary_squared_failures": [w.label() for w in squared],
        "recursive_mismatches": [w.label() for w in agree],
        "exactness_failures": failures,
        "exactness_slices": len(exact),
        "cochain_d_squared_failures": dsq,
    }
    ok = not squared and not agree and not failures and not any(dsq.values())
    return report, ok


def cmd_hh(args):
    cfg = _cfg(args)
    module = make_module(cfg, args.module, args.braid_index)
    rows = hh_table(module, args.max_degree, args.min_internal)
    totals = {}
    for r in rows:
        totals[r["n"]] = totals.get(r["n"], 0) + r["dim"]
    report = {
        "module": module.name,
        "punctures": cfg.punctures,
        "min_internal_degree": args.min_internal,
        "rows": rows,
        "totals": [{"n": n, "total": totals.get(n, 0)} for n in range(args.max_degree + 1)],
    }
    return report, True


def cmd_verify_functor(args):
    cfg = _cfg(args)
    indices = [args.braid_index] if args.braid_index is not None else list(cfg.braid_indices)
    checked = 0
    failures = []
    for i in indices:
        cfg.check_braid_index(i)
        for d in range(1, args.max_length + 1):
            for chain in composable_chains(cfg, d, args.max_dots):
                checked += 1
                if verify_functor(cfg, i, chain):
                    failures.append({"braid_index": i, "chain": [format_morphism(m) for m in chain]})
    return {"punctures": cfg.punctures, "checked": checked, "failures": failures}, not failures


def _load_params(args) -> NatParams:
    if args.params is None:
        raise ParameterError("--params is required")
    with open(args.params) as fh:
        data = json.load(fh)
    if args.braid_index is not None and "braid_index" not in data:
        data["braid_index"] = args.braid_index
    return NatParams.from_json(data)


def _nat_report(params: NatParams) -> dict:
    return {
        "degree": params.degree,
        "target": params.target if params.target == "id" else f"beta({params.braid_index})",
        "epsilon": {str(k): str(v) for k, v in sorted(params.epsilon.items())},
        "sigma": {str(k): str(v) for k, v in sorted(params.sigma.items())},
        "theta": {str(k): str(v) for k, v in sorted(params.theta.items())},
    }


def cmd_nat_eval(args):
    cfg = _cfg(args)
    params = _load_params(args)
    nt = NaturalTransformation(cfg, params)
    parsed = parse_expr(_read_input(args), cfg)
    chain = basis_chain(parsed if isinstance(parsed, list) else [parsed])
    if not chain and args.object is None:
        raise ParameterError("an empty chain needs --object")
    val = nt.eta(chain, args.object)
    report = {
        "params": _nat_report(params),
        "chain": [format_morphism(m) for m in chain],
        "arity": len(chain),
        "in_support": len(chain) <= params.degree + (params.target == "beta"),
        "blocks": val.block_records(),
    }
    return report, True


def cmd_nat_verify(args):
    cfg = _cfg(args)
    params = _load_params(args)
    nt = NaturalTransformation(cfg, params)
    checked = 0
    failures = []
    if args.input is not None:
        parsed = parse_expr(_read_input(args), cfg)
        chains = [basis_chain(parsed if isinstance(parsed, list) else [parsed])]
    else:
        chains = [list(c) for d in range(1, args.max_length + 1)
                  for c in composable_chains(cfg, d, args.max_dots)]
        for j in cfg.objects:
            checked += 1
            if cocycle_residual(nt, (), obj=j):
                failures.append({"object": j})
    for chain in chains:
        checked += 1
        res = cocycle_residual(nt, chain, obj=args.object)
        if res:
            failures.append({"chain": [format_morphism(m) for m in chain], "residual": res.block_records()})
    return {"params": _nat_report(params), "checked": checked, "failures": failures}, not failures


def cmd_transfer(args):
    cfg = _cfg(args)
    parsed = parse_expr(_read_input(args), cfg)
    ys = basis_chain(parsed if isinstance(parsed, list) else [parsed])
    if args.degree is not None and args.degree != len(ys):
        raise ParameterError(f"--degree {args.degree} but the chain has {len(ys)} entries")
    x = BarElement({bar_term(e(ys[0].target), ys, e(ys[-1].source)): 1})
    out = transfer_G(len(ys), x)
    terms = [{"left": format_morphism(u), "generator": w.label(), "right": format_morphism(v), "coeff": str(c)}
             for (u, w, v), c in out.sorted_items()]
    return {"degree": len(ys), "input": [format_morphism(m) for m in ys], "terms": terms,
            "count": len(terms)}, True


COMMANDS = {
    "counts": cmd_counts,
    "verify-resolution": cmd_verify_resolution,
    "hh": cmd_hh,
    "verify-functor": cmd_verify_functor,
    "nat-eval": cmd_nat_eval,
    "nat-verify": cmd_nat_verify,
    "transfer": cmd_transfer,
}


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--punctures", type=_positive, default=4)
        sp.add_argument("--max-degree", type=_nonneg, default=8)
        sp.add_argument("--max-qdeg", type=_nonneg, default=10)
        sp.add_argument("--braid-index", type=int)
        sp.add_argument("--params")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--module", default="delta")
        sp.add_argument("--degree", type=_nonneg)
        sp.add_argument("--input", help="expression text, or '-' for stdin")
        sp.add_argument("--object", type=int)
        sp.add_argument("--max-length", type=_positive, default=3)
        sp.add_argument("--max-dots", type=_nonneg, default=2)
        sp.add_argument("--min-internal", type=int, default=-10)
    return parser


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    lines = []
    for key in sorted(report):
        lines.append(f"{key}: {json.dumps(report[key], sort_keys=True)}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, ok = COMMANDS[args.command](args)
    except (KLRWError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
