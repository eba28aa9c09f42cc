"""Command line entry point.

Exit codes: 0 success, 1 domain error (``WeylError``), 2 usage or syntax
error.  ``--json`` prints one JSON document with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from weylalg.errors import WeylError
from weylalg.morphism import (
    Substitution,
    format_word,
    is_endomorphism,
    parse_word,
    apply,
    apply_word,
    rectangularize,
    word_to_sub,
)
from weylalg.parser import ParseError, parse_operator
from weylalg.polygon import (
    WeightVec,
    almost_commute,
    hom_part,
    newton_polygon,
    top_line,
    weight_degree,
)
from weylalg.psido import psido_json, render_psido, schur_normalize
from weylalg.scalars import rat_str
from weylalg.spectral import (
    SolutionPair,
    dixmier_pair,
    find_relation,
    orbit_search,
    space_probes,
)
from weylalg.weyl import WeylOp, commutator, eval_poly


class UsageError(Exception):
    pass


def _rational(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _nat(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return n


def _op(args, text: str) -> WeylOp:
    P = parse_operator(text)
    if args.alpha is not None:
        P = P.eval_alpha(args.alpha)
    return P


def _weight(args) -> WeightVec:
    return WeightVec(args.sigma, args.rho)


def _op_out(P: WeylOp) -> dict:
    return {"text": str(P), **P.to_json()}


# ---------------------------------------------------------------------------
# subcommands; each returns (text, json-able)


def cmd_normalize(args):
    P = _op(args, args.expr)
    return str(P), _op_out(P)


def cmd_mul(args):
    ops = [_op(args, e) for e in args.exprs]
    out = ops[0]
    for P in ops[1:]:
        out = out * P
    return str(out), _op_out(out)


def cmd_comm(args):
    C = commutator(_op(args, args.p), _op(args, args.q))
    return str(C), _op_out(C)


def cmd_ord(args):
    P = _op(args, args.expr)
    ht = P.ht()
    data = {"ord": P.ord(), "ord_x": P.ord_x(), "ht": _op_out(ht), "monic": P.is_monic()}
    text = f"ord={P.ord()} ord_x={P.ord_x()} HT={ht} monic={str(P.is_monic()).lower()}"
    return text, data


def cmd_polygon(args):
    P = _op(args, args.expr)
    hull = newton_polygon(P)
    line = top_line(P, _weight(args))
    text = " ".join(f"({i},{j})" for i, j in hull) + "\n" + str(line)
    data = {
        "vertices": [[i, j] for i, j in hull],
        "top_line": {"sigma": rat_str(line.sigma), "rho": rat_str(line.rho),
                     "theta": rat_str(line.theta),
                     "points": [[i, j] for i, j in sorted(line.points)]},
    }
    return text, data


def cmd_hom_part(args):
    P = _op(args, args.expr)
    w = _weight(args)
    f = hom_part(P, w)
    v = weight_degree(P, w)
    return f"{f}\ndegree {rat_str(v)}", {"hom_part": f.to_json(), "text": str(f), "degree": rat_str(v)}


def cmd_almost_commute(args):
    flag = almost_commute(_op(args, args.p), _op(args, args.q), _weight(args))
    return str(flag).lower(), {"almost_commute": flag}


def _substitution(args) -> Substitution:
    if args.word is not None:
        if args.img_d is not None or args.img_x is not None:
            raise UsageError("give either --word or --img-d/--img-x")
        return word_to_sub(parse_word(args.word))
    if args.img_d is None or args.img_x is None:
        raise UsageError("need --word or both --img-d and --img-x")
    s = Substitution(_op(args, args.img_d), _op(args, args.img_x))
    if is_endomorphism(s):
        s = Substitution(s.img_d, s.img_x, True)
    return s


def _sub_out(s: Substitution) -> dict:
    return {"img_d": _op_out(s.img_d), "img_x": _op_out(s.img_x), "endo_certified": s.endo_certified}


def cmd_apply(args):
    P = _op(args, args.expr)
    if args.word is not None and args.img_d is None and args.img_x is None:
        # one generator at a time is cheaper than building the composite
        out = apply_word(parse_word(args.word), P)
    else:
        out = apply(_substitution(args), P)
    return str(out), _op_out(out)


def cmd_compose(args):
    word = ()
    for w in args.words:
        word += parse_word(w)
    s = word_to_sub(word)
    text = f"D -> {s.img_d}\nx -> {s.img_x}\ncertified {str(s.endo_certified).lower()}"
    return text, {"word": format_word(word), **_sub_out(s)}


def cmd_rectangularize(args):
    s = _substitution(args)
    res = rectangularize(s, max_steps=args.max_steps, mode=args.mode)
    lines = []
    for n, st in enumerate(res.log, 1):
        mu = ",".join(rat_str(m) for m in st.mu)
        lines.append(f"step {n}: case {st.case} weight {st.weight} mu={mu} "
                     f"gens {format_word(st.gens)} measure {st.measure_before} -> {st.measure_after}")
    lines.append(f"status {res.status.value}" + (f" ({res.detail})" if res.detail else ""))
    lines.append(f"word {format_word(res.word)}")
    lines.append(f"D -> {res.s_out.img_d}")
    lines.append(f"x -> {res.s_out.img_x}")
    data = {
        "status": res.status.value,
        "detail": res.detail,
        "word": format_word(res.word),
        "steps": [st.to_json() for st in res.log],
        "s_out": _sub_out(res.s_out),
    }
    return "\n".join(lines), data


def cmd_schur(args):
    Q = _op(args, args.expr)
    res = schur_normalize(Q, args.N, args.M)
    S = render_psido(res.S)
    text = (f"S = {S}\nc = {rat_str(res.c)}\n"
            f"residual: S^-1 Q S - c*D^{res.q} = 0 mod (x^{args.M}, D^{res.q - 1 - args.N})")
    data = {"S": psido_json(res.S), "S_text": S, "c": rat_str(res.c), "q": res.q,
            "N": args.N, "M": args.M, "residual_zero": res.residual_ok}
    return text, data


def cmd_dixmier_verify(args):
    pair = dixmier_pair(args.alpha)
    defect = pair.Q * pair.Q - pair.P * pair.P * pair.P
    rel_ok = not eval_poly(pair.relation, pair.P, pair.Q)
    comm_ok = not commutator(pair.P, pair.Q)
    rel = pair.relation.render("X", "Y")
    text = "\n".join([
        f"L6^2 - L4^3 = {defect}",
        f"relation {rel} = 0: {'holds' if rel_ok else 'fails'}",
        f"[L4, L6] = 0: {'yes' if comm_ok else 'no'}",
        f"ord(L4) = {pair.P.ord()}, ord(L6) = {pair.Q.ord()}",
    ])
    data = {"relation": rel, "relation_holds": rel_ok, "commutator_zero": comm_ok,
            "L6^2-L4^3": _op_out(defect), "ord_L4": pair.P.ord(), "ord_L6": pair.Q.ord(),
            "alpha": None if args.alpha is None else rat_str(args.alpha)}
    return text, data


def _pair_ops(args):
    if args.p is None and args.q is None:
        pair = dixmier_pair(args.alpha)
        return pair.P, pair.Q
    if args.p is None or args.q is None:
        raise UsageError("give both operators or neither")
    return _op(args, args.p), _op(args, args.q)


def cmd_find_relation(args):
    P, Q = _pair_ops(args)
    rep = find_relation(P, Q, args.degx, args.degy)
    rels = [str(r) for r in rep.relations]
    text = f"dimension {rep.dim}" + "".join(f"\n{r}" for r in rels)
    return text, {"dimension": rep.dim, "relations": rels, "rank": rep.rank,
                  "basis": [r.as_bipoly().to_json() for r in rep.relations]}


def cmd_probe(args):
    P, Q = _pair_ops(args)
    rep = space_probes(P, Q, args.bound)
    eigen = None if rep.eigen is None else str(rep.eigen)
    text = "\n".join([
        f"vq_dim {rep.vq_dim}" + ("" if rep.vq_stable else " (lower bound)"),
        f"nilpotency {rep.nilpotency if rep.nilpotency is not None else 'none'}",
        f"eigen {eigen if eigen is not None else 'none'}",
        f"central {str(rep.central).lower()}",
    ])
    return text, {"vq_dim": rep.vq_dim, "vq_stable": rep.vq_stable, "nilpotency": rep.nilpotency,
                  "eigen": eigen, "central": rep.central, "bound": rep.bound}


def cmd_orbit_search(args):
    with open(args.gens, encoding="utf-8") as fh:
        gens = parse_word(fh.read())
    if not gens:
        raise UsageError("generator file is empty")
    start = dixmier_pair(args.alpha)
    rep = orbit_search(start, gens, args.depth, workers=args.workers)
    lines = [f"distinct pairs {rep.distinct_pairs}", f"explored depth {rep.explored_depth}",
             f"collisions {len(rep.collisions)}"]
    lines += [f"  [{format_word(a)}] = [{format_word(b)}]" for a, b in rep.collisions]
    lines.append("all visited pairs satisfy the relation and commute")
    return "\n".join(lines), rep.to_json()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--alpha", type=_rational, default=None,
                        help="specialize the parameter a to this rational")
    weight = argparse.ArgumentParser(add_help=False)
    weight.add_argument("--sigma", type=_rational, default=Fraction(1))
    weight.add_argument("--rho", type=_rational, default=Fraction(1))
    subst = argparse.ArgumentParser(add_help=False)
    subst.add_argument("--word", help="tame word, e.g. 'Phi(1,2);PhiP(2,-1)'")
    subst.add_argument("--img-d", dest="img_d", help="image of D")
    subst.add_argument("--img-x", dest="img_x", help="image of x")

    parser = argparse.ArgumentParser(prog="weylalg", description="Exact computations in the first Weyl algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, parents=(), **kw):
        p = sub.add_parser(name, parents=[common, *parents], **kw)
        p.set_defaults(func=func)
        return p

    add("normalize", cmd_normalize).add_argument("expr")
    add("mul", cmd_mul).add_argument("exprs", nargs="+")
    p = add("comm", cmd_comm)
    p.add_argument("p")
    p.add_argument("q")
    add("ord", cmd_ord).add_argument("expr")
    add("polygon", cmd_polygon, [weight]).add_argument("expr")
    add("hom-part", cmd_hom_part, [weight]).add_argument("expr")
    p = add("almost-commute", cmd_almost_commute, [weight])
    p.add_argument("p")
    p.add_argument("q")
    add("apply", cmd_apply, [subst]).add_argument("expr")
    add("compose", cmd_compose).add_argument("words", nargs="+")
    p = add("rectangularize", cmd_rectangularize, [subst])
    p.add_argument("--max-steps", dest="max_steps", type=_nat, default=20)
    p.add_argument("--mode", choices=["compose", "conjugate"], default="compose")
    p = add("schur", cmd_schur)
    p.add_argument("expr")
    p.add_argument("--N", type=_nat, default=8)
    p.add_argument("--M", type=_nat, default=12)
    add("dixmier-verify", cmd_dixmier_verify)
    p = add("find-relation", cmd_find_relation)
    p.add_argument("p", nargs="?")
    p.add_argument("q", nargs="?")
    p.add_argument("--degx", type=_nat, required=True)
    p.add_argument("--degy", type=_nat, required=True)
    p = add("probe", cmd_probe)
    p.add_argument("p", nargs="?")
    p.add_argument("q", nargs="?")
    p.add_argument("--bound", type=_nat, default=8)
    p = add("orbit-search", cmd_orbit_search)
    p.add_argument("--gens", required=True, help="file with a tame word listing the generators")
    p.add_argument("--depth", type=_nat, required=True)
    p.add_argument("--workers", type=_nat, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, data = args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except WeylError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
