"""Command-line front end.

Exit codes: 0 success (or a true verdict), 1 false verdict, 2 parse error,
3 unsupported level, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from finseq import bounds, canon, lower, selftest
from finseq import ordinal as o
from finseq.syntax import ParseError, load_poset, parse_ordinal, parse_pk, parse_poset, parse_term, parse_word
from finseq.words import (
    UnsupportedLevel,
    embeds_exact,
    find_witness,
    format_word,
    length,
    canonical_omega,
    witness_check,
)
from finseq.wqo import Base, H, enumerate_elements, format_term, h_embed, leq_elem, o_eval

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_LEVEL, EXIT_INVARIANT = 0, 1, 2, 3, 4


class _Fail(Exception):
    pass


def _out(args, text: str, data=None):
    if getattr(args, "json", False) and data is not None:
        print(json.dumps(data, indent=2, sort_keys=False))
    else:
        print(text)


# -- ord ------------------------------------------------------------------------------

_BINARY = {
    "nat_add": o.nat_add,
    "nat_mul": o.nat_mul,
    "add": o.ord_add,
    "mul": o.ord_mul,
}
_UNARY = {
    "omega_pow": o.omega_pow,
    "two_pow": o.two_pow,
    "minus_one_plus": o.minus_one_plus,
    "parse": lambda a: a,
}


def cmd_ord(args) -> int:
    vals = [parse_ordinal(x) for x in args.operands]
    op = args.op
    need = 2 if op in _BINARY or op == "compare" else 1
    if len(vals) != need:
        raise ParseError(f"{op} takes {need} operand(s)", " ".join(args.operands), 0)
    if op == "compare":
        c = o.compare(*vals)
        text = {-1: "less", 0: "equal", 1: "greater"}[c]
        _out(args, text, {"result": text})
    elif op == "successor_split":
        ok, pred = o.successor_split(vals[0])
        text = f"{str(ok).lower()} {pred}" if ok else "false"
        _out(args, text, {"is_successor": ok, "predecessor": None if pred is None else str(pred)})
    else:
        fn = _BINARY.get(op) or _UNARY[op]
        res = fn(*vals)
        _out(args, str(res), {"result": str(res)})
    return EXIT_OK


# -- bound ----------------------------------------------------------------------------


def cmd_bound(args) -> int:
    what = args.what
    if what == "report":
        rep = bounds.report(parse_ordinal(args.alpha), parse_ordinal(args.beta))
        _out(args, rep.to_text(), rep.to_dict())
        return EXIT_OK
    beta = parse_ordinal(args.beta)
    if what == "h":
        res = bounds.h_fun(beta)
        _out(args, str(res), {"h": str(res)})
    elif what == "u":
        res = bounds.u_fun(beta)
        _out(args, str(res), {"u": str(res)})
    elif what == "pq":
        p, q = bounds.pq(args.k, beta)
        _out(args, f"p = {p}\nq = {q}", {"p": str(p), "q": str(q)})
    elif what == "fg":
        r = bounds.fg(args.k, beta)
        d = {"f": str(r.f), "g": str(r.g), "p_plus": str(r.p_plus), "g_plus": str(r.g_plus)}
        _out(args, "\n".join(f"{k} = {v}" for k, v in d.items()), d)
    elif what == "upper":
        res = bounds.upper_alpha(parse_ordinal(args.alpha), beta, args.mode)
        _out(args, str(res), {"upper": str(res)})
    elif what == "lower":
        res, exact = bounds.lower_report(parse_ordinal(args.alpha), beta)
        _out(args, f"{res} ({'exact' if exact else 'lower bound'})", {"lower": str(res), "exact": exact})
    return EXIT_OK


# -- word -------------------------------------------------------------------------------


def _alphabet(args):
    return load_poset(args.poset) if getattr(args, "poset", None) else None


def cmd_word(args) -> int:
    alpha = _alphabet(args)
    order = alpha.leq if alpha is not None else None
    if args.what == "embeds":
        s, t = parse_word(args.s, alpha), parse_word(args.t, alpha)
        verdict = embeds_exact(s, t, order)
        data = {"embeds": verdict}
        text = str(verdict).lower()
        if verdict and args.witness:
            w = find_witness(s, t, order)
            if w is None or not witness_check(s, t, w, order):
                raise _Fail("positive verdict without a valid witness")
            data["witness"] = repr(w)
            text += f"\n{w!r}"
        _out(args, text, data)
        return EXIT_OK if verdict else EXIT_FALSE
    s = parse_word(args.s, alpha)
    if args.what == "canon":
        prefix, tail = canonical_omega(s)
        tail_s = "{" + ", ".join(map(str, sorted(tail, key=str))) + "}"
        _out(args, f"prefix = {format_word(prefix)}\ntailset = {tail_s}", {"prefix": format_word(prefix), "tailset": sorted(map(str, tail))})
        return EXIT_OK
    if args.what == "length":
        _out(args, str(length(s)), {"length": str(length(s))})
        return EXIT_OK
    # decompose
    if args.eq:
        w, S = canon.decompose_eq(s, args.k, order)
        text = f"prefix = {canon.format_pk(w)}\nset = {canon.format_pk(S)}"
        _out(args, text, {"prefix": canon.format_pk(w), "set": canon.format_pk(S)})
    else:
        w = canon.decompose(s, args.k)
        _out(args, canon.format_pk(w), {"decomposition": [repr(q) for q in w]})
    return EXIT_OK


# -- wqo ----------------------------------------------------------------------------------


def cmd_wqo(args) -> int:
    if args.what == "oeval":
        t = parse_term(args.term)
        r = o_eval(t)
        _out(args, f"{r.value} ({r.exactness})", {"term": format_term(t), "value": str(r.value), "exactness": r.exactness})
        return EXIT_OK
    b, b2 = parse_ordinal(args.b), parse_ordinal(args.b2)
    f = h_embed(b, b2)
    els = enumerate_elements(H(b), args.samples).elements
    pairs = bad = 0
    for x in els:
        for y in els:
            pairs += 1
            bad += leq_elem(H(b), x, y) != leq_elem(H(b2), f(x), f(y))
    lines = [f"{x!r} -> {f(x)!r}" for x in els]
    lines.append(f"checked {pairs} pairs, {bad} violations")
    _out(args, "\n".join(lines), {"pairs": pairs, "violations": bad, "map": [[repr(x), repr(f(x))] for x in els]})
    if bad:
        raise _Fail("embedding is not an order embedding")
    return EXIT_OK


# -- lower -------------------------------------------------------------------------------


def cmd_lower(args) -> int:
    spec = load_poset(args.poset) if os.path.exists(args.poset) else parse_poset(args.poset)
    # psi uses v_1..v_{k-1}; the separator-joined word also uses v_k
    need = args.k if args.star else max(args.k - 1, 0)
    d = lower.extract_maximals(Base(spec), need)
    inputs = [parse_pk(x, tagged=False) for x in args.input]
    for S in inputs:
        for y in _leaves(S):
            if y in d.v:
                raise ParseError(f"{y!r} is a separator, not an element of Y", str(S), 0)
    if args.star:
        w = lower.psi_star(args.k, d, inputs)
    else:
        if len(inputs) != 1:
            raise ParseError("psi takes exactly one --input", " ".join(args.input), 0)
        w = lower.psi(args.k, d, inputs[0])
    _out(args, f"separators = {list(d.v)}\n{format_word(w)}", {"separators": list(d.v), "word": format_word(w)})
    return EXIT_OK


def _leaves(S):
    if isinstance(S, frozenset):
        for m in S:
            yield from _leaves(m)
    else:
        yield S


# -- demos ---------------------------------------------------------------------------------


def cmd_demo(args) -> int:
    w = o.OMEGA
    if args.name == "schmidt":
        bound = bounds.upper_alpha(o.ord_add(w, 1), 2)
        chain = o.ord_add(o.ord_mul(o.omega_pow(w), 2), 1)
        anti = o.ord_add(o.ord_mul(o.omega_pow(w), 3), 1)
        print(f"upper bound for words of length < w+1 over any X with o(X) = 2: {bound}")
        print(f"exact value for the 2-chain:       {chain}   (bound holds: {chain <= bound})")
        print(f"exact value for the 2-antichain:   {anti}   (bound holds: {anti <= bound})")
        return EXIT_OK if anti <= bound and chain <= bound else EXIT_INVARIANT
    rows = [
        ("o(X) = 0", "1", [0]),
        ("o(X) = n, 0 < n < w", "w^(w^(n-1))", [1, 2, 3, 7]),
        ("o(X) = eps + k", "w^(w^(o(X)+1))", []),
        ("otherwise", "w^(w^o(X))", [w, o.ord_add(w, 1), o.omega_pow(w), o.ord_add(o.ord_mul(o.omega_pow(w), 2), 1)]),
    ]
    for case, form, samples in rows:
        print(f"{case:<24} o(X*) = {form}")
        if not samples:
            print("    (no epsilon numbers below epsilon_0; branch unreachable)")
        for b in samples:
            print(f"    h({o.as_ordinal(b)}) = {bounds.h_fun(b)}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest.run_all(args.seed)
    failed = 0
    for name, (ok, total) in results.items():
        status = "PASS" if ok == total else "FAIL"
        failed += ok != total
        print(f"{status} {name}: {ok}/{total}")
    return EXIT_OK if not failed else EXIT_INVARIANT


# -- wiring -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finseq", description="Ordinal bounds and transfinite word embeddings.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def with_json(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = with_json(sub.add_parser("ord", help="ordinal arithmetic"))
    sp.add_argument("op", choices=sorted(["compare", "successor_split", *_BINARY, *_UNARY]))
    sp.add_argument("operands", nargs="+")
    sp.set_defaults(fn=cmd_ord)

    sp = sub.add_parser("bound", help="bound calculators")
    bsub = sp.add_subparsers(dest="what", required=True)
    r = with_json(bsub.add_parser("report"))
    r.add_argument("--alpha", required=True)
    r.add_argument("--beta", required=True)
    for name in ("h", "u"):
        x = with_json(bsub.add_parser(name))
        x.add_argument("beta")
    for name in ("pq", "fg"):
        x = with_json(bsub.add_parser(name))
        x.add_argument("k", type=int)
        x.add_argument("beta")
    x = with_json(bsub.add_parser("upper"))
    x.add_argument("--alpha", required=True)
    x.add_argument("--beta", required=True)
    x.add_argument("--mode", choices=["finseq", "finseqeq"], default="finseq")
    x = with_json(bsub.add_parser("lower"))
    x.add_argument("--alpha", required=True)
    x.add_argument("--beta", required=True)
    sp.set_defaults(fn=cmd_bound)

    sp = sub.add_parser("word", help="word terms")
    wsub = sp.add_subparsers(dest="what", required=True)
    x = with_json(wsub.add_parser("embeds"))
    x.add_argument("s")
    x.add_argument("t")
    x.add_argument("--poset", help="poset JSON file for the letters (default: discrete)")
    x.add_argument("--witness", action="store_true", help="also print a certificate")
    for name in ("canon", "length"):
        x = with_json(wsub.add_parser(name))
        x.add_argument("s")
        x.add_argument("--poset")
    x = with_json(wsub.add_parser("decompose"))
    x.add_argument("s")
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--eq", action="store_true", help="length is exactly w^k")
    x.add_argument("--poset")
    sp.set_defaults(fn=cmd_word)

    sp = sub.add_parser("wqo", help="WPO terms")
    qsub = sp.add_subparsers(dest="what", required=True)
    x = with_json(qsub.add_parser("oeval"))
    x.add_argument("term")
    x = with_json(qsub.add_parser("hembed"))
    x.add_argument("b")
    x.add_argument("b2")
    x.add_argument("--samples", type=int, default=10)
    sp.set_defaults(fn=cmd_wqo)

    sp = sub.add_parser("lower", help="lower-bound embeddings")
    lsub = sp.add_subparsers(dest="what", required=True)
    x = with_json(lsub.add_parser("psi"))
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--poset", required=True, help="poset JSON file or chainN/antichainN")
    x.add_argument("--input", action="append", required=True, help="nested-brace set; repeat with --star")
    x.add_argument("--star", action="store_true", help="separator-joined word of sets")
    sp.set_defaults(fn=cmd_lower)

    sp = sub.add_parser("demo", help="worked examples")
    sp.add_argument("name", choices=["schmidt", "higman-table"])
    sp.set_defaults(fn=cmd_demo)

    sp = sub.add_parser("selftest", help="run the randomized consistency sweeps")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e}\n{e.caret()}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedLevel as e:
        print(f"unsupported: {e}", file=sys.stderr)
        return EXIT_LEVEL
    except (_Fail, AssertionError) as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OverflowError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
