"""Command-line front end.  Every command prints one JSON document with an embedded run manifest."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import __version__
from .groups import (GradedGroup, GroupError, OrderBoundExceeded, build_graded_group, coset_space,
                     cyclic, dihedral, graded_cyclic, graded_product, quaternion, real_conjugacy_classes,
                     split_graded, symmetric, symmetric_graded, trivially_graded)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- group specs


def _split_args(text: str) -> List[str]:
    """Split on commas that are not inside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


FAMILIES = {
    "cyclic": lambda n: trivially_graded(cyclic(n)),
    "graded_cyclic": graded_cyclic,
    "dihedral": dihedral,
    "symmetric": lambda n: trivially_graded(symmetric(n)),
    "symmetric_graded": symmetric_graded,
    "quaternion": lambda n: trivially_graded(quaternion(n)),
}


def parse_group(spec: str, inputs: Dict[str, str]) -> GradedGroup:
    """cyclic:n, dihedral:n, symmetric:n, quaternion:8, split(...), product(..., ...) or a JSON file."""
    spec = spec.strip()
    for ctor in ("split", "product"):
        if spec.startswith(ctor + "(") and spec.endswith(")"):
            args = [parse_group(a, inputs) for a in _split_args(spec[len(ctor) + 1:-1])]
            return _construct(ctor, args)
        if spec.startswith(ctor + ":"):
            args = [parse_group(a, inputs) for a in _split_args(spec[len(ctor) + 1:])]
            return _construct(ctor, args)
    name, _, arg = spec.partition(":")
    if name in FAMILIES:
        try:
            n = int(arg)
        except ValueError:
            raise InputError(f"bad group size in {spec!r}") from None
        if n < 1:
            raise InputError("group size must be positive")
        return FAMILIES[name](n)
    return build_graded_group(_load_json(spec, inputs))


def _construct(ctor: str, args: List[GradedGroup]) -> GradedGroup:
    if ctor == "split":
        if len(args) != 1:
            raise InputError("split takes one group")
        return split_graded(args[0].group)
    if len(args) < 2:
        raise InputError("product takes at least two groups")
    out = args[0]
    for g in args[1:]:
        out = graded_product(out, g)
    return out


def _load_json(path: str, inputs: Dict[str, str]):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    inputs[path] = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def _load_twist(args, grp: GradedGroup, inputs, degree: int = 3):
    from .cochains import cochain_from_json, is_cocycle
    if not getattr(args, "twist", None):
        return None
    c = cochain_from_json(_load_json(args.twist, inputs), grp)
    if c.degree != degree:
        raise InputError(f"twist must have degree {degree}")
    if not is_cocycle(c):
        raise InputError("twist is not a cocycle")
    return c


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


# ---------------------------------------------------------------- commands


def cmd_group(args, ctx):
    G = parse_group(args.group, ctx["inputs"])
    ctx["omega"] = G.omega if G.is_graded else None
    return {
        "order": G.order,
        "graded": G.is_graded,
        "kernel_order": len(G.kernel_elements),
        "omega": ctx["omega"],
        "pi": list(G.pi),
        "labels": [_jsonable(lab) for lab in G.labels],
        "element_orders": [G.group.element_order(x) for x in range(G.order)],
        "abelian": G.group.is_abelian(),
    }


def cmd_classes(args, ctx):
    G = parse_group(args.group, ctx["inputs"])
    if G.is_graded and not args.complex:
        ctx["omega"] = G.omega
        data = real_conjugacy_classes(G)
        return {"kind": "real", "classes": [
            {"rep": g, "sign": data.sign[g], "members": list(data.members[g])} for g in data.classes]}
    ker = G.kernel()
    cls = ker.conjugacy_classes()
    return {"kind": "ordinary", "classes": [
        {"rep": ker.to_root(r), "members": [ker.to_root(x) for x in range(ker.order)
                                            if cls.reps[cls.class_of[x]] == r]} for r in cls.reps]}


def cmd_transgress(args, ctx):
    from .cochains import cochain_from_json, cochain_to_json
    from .transgression import transgress_all
    G = parse_group(args.group, ctx["inputs"])
    alpha = cochain_from_json(_load_json(args.cocycle, ctx["inputs"]), G)
    kind = args.kind or ("real3" if G.is_graded and alpha.degree == 3 else "ref2" if G.is_graded else "plain")
    if kind == "plain" and alpha.degree != 3 and not G.is_graded:
        raise InputError("plain transgression needs a 3-cocycle")
    if kind == "real3" and (alpha.degree != 3 or alpha.twisted):
        raise InputError("real3 needs an untwisted 3-cochain")
    if kind == "ref2" and (alpha.degree != 2 or not alpha.twisted):
        raise InputError("ref2 needs a twisted 2-cochain")
    if kind != "plain" and not G.is_graded:
        raise InputError(f"{kind} needs a graded group")
    if G.is_graded:
        ctx["omega"] = G.omega
    out = transgress_all(alpha, kind)
    return {"kind": kind, "components": [
        {"class": rep, "cocycle": cochain_to_json(c)} for rep, c in sorted(out.components.items())],
        "class_of": {str(k): v for k, v in sorted(out.class_of.items())}}


def cmd_chartab(args, ctx):
    from .characters import character_table, check_orthogonality, frobenius_schur, real_type
    G = parse_group(args.group, ctx["inputs"])
    T = character_table(G.kernel())
    out = T.to_json()
    out["class_representatives"] = [G.kernel().to_root(r) for r in T.classes.reps]
    out["orthogonal"] = check_orthogonality(T)
    out["frobenius_schur"] = [frobenius_schur(T, r) for r in range(len(T))]
    if G.is_graded:
        ctx["omega"] = G.omega
        out["real_types"] = [real_type(G, T, r).kind for r in range(len(T))]
    return out


def cmd_rr(args, ctx):
    from .characters import regular_class_count, twisted_irreps
    from .cochains import central_extension, zero_cochain
    G = parse_group(args.group, ctx["inputs"])
    theta = None
    if args.twist:
        from .cochains import cochain_from_json
        theta = cochain_from_json(_load_json(args.twist, ctx["inputs"]), G)
        if theta.degree != 2:
            raise InputError("rr twist must be a 2-cocycle")
    else:
        theta = zero_cochain(G, 2, 1, twisted=G.is_graded)
    ext = central_extension(theta)
    irr = twisted_irreps(ext)
    if G.is_graded:
        ctx["omega"] = G.omega
    types = [ir.real_type for ir in irr]
    return {
        "modulus": theta.modulus,
        "irreducibles": [{"index": i, "degree": ir.degree, "real_type": ir.real_type, "partner": ir.partner}
                         for i, ir in enumerate(irr)],
        "counts": {t: types.count(t) for t in sorted(set(types))},
        "rank": types.count("R") + types.count("H") + types.count("C") // 2 + types.count("complex"),
        "regular_class_count": regular_class_count(ext),
    }


def cmd_mackey(args, ctx):
    from .mackey import check_configuration, mackey_decompose, standard_configurations
    seed = args.seed if args.seed is not None else 0
    ctx["seeds"] = [seed]
    out = []
    for cfg in standard_configurations(seed):
        if args.name and args.name not in cfg.name:
            continue
        res = check_configuration(cfg)
        res["summary"] = mackey_decompose(cfg.group, cfg.normal, cfg.theta).summary()
        out.append(res)
    if not out:
        raise InputError("no configuration matches")
    return {"configurations": out, "pass": all(r["pass"] for r in out)}


def cmd_lambda(args, ctx):
    from .enhanced import enhanced_model, model_irreps
    G = parse_group(args.group, ctx["inputs"])
    if not 0 <= args.g < G.order or G.pi[args.g] != 1:
        raise InputError("g must be an even element")
    ahat = _load_twist(args, G, ctx["inputs"])
    real = G.is_graded and not args.complex
    M = enhanced_model(G, args.g, args.level, ahat, real)
    ctx["levels"] = [M.level]
    if real:
        ctx["omega"] = G.omega
    irr = model_irreps(M)
    return {
        "g": args.g, "level": M.level, "lift_order": M.lift_order, "order": M.order,
        "stabilizer_order": M.stabilizer.order, "real": real,
        "irreducibles": [{"core_irrep": ir.core_irrep, "slope": str(ir.slope), "degree": ir.degree,
                          "real_type": ir.real_type} for ir in irr],
    }


def _structure(args, ctx):
    from .qell import QEllStructure, _attach_presentations
    G = parse_group(args.group, ctx["inputs"])
    alpha = _load_twist(args, G, ctx["inputs"])
    real = not args.complex
    if real and not G.is_graded:
        raise InputError("the Real theory needs a graded group; pass --complex for QEll")
    X = None
    if getattr(args, "subgroup", None):
        try:
            elems = [int(x) for x in args.subgroup.split(",")]
        except ValueError:
            raise InputError("--subgroup is a comma-separated list of element indices") from None
        if not G.group.is_subgroup(elems):
            raise InputError("--subgroup does not list a subgroup")
        X = coset_space(G, elems)
    S = QEllStructure(G, X, alpha, real=real, jobs=args.jobs)
    _attach_presentations(S)
    ctx["omega"] = G.omega if G.is_graded else None
    ctx["levels"] = [c.level for c in S.components]
    return S


def _class(args, ctx, S):
    from .qell import class_from_json
    if args.class_file:
        return class_from_json(S, _load_json(args.class_file, ctx["inputs"]))
    return S.one()


def cmd_qellr(args, ctx):
    from .qell import character_sheet, structure_json, tate_completion
    S = _structure(args, ctx)
    if args.what in ("point", "gset"):
        if args.what == "point" and args.subgroup:
            raise InputError("point takes no --subgroup")
        return structure_json(S)
    x = _class(args, ctx, S)
    if args.what == "tate":
        out = tate_completion(x, args.precision).to_json()
        out["rank_per_window"] = [c.rank for c in S.components]
        return out
    return {"class": x.to_json(), "sheet": character_sheet(x).to_json()}


def cmd_tate(args, ctx):
    from . import tate
    N = args.N
    if N < 1:
        raise InputError("--N must be positive")
    if args.op == "mul":
        a, b = (_point(p, N) for p in (args.a, args.b))
        return {"product": tate.multiply(a, b).to_json()}
    if args.op == "inv":
        return {"inverse": tate.invert(_point(args.a, N)).to_json()}
    if args.op == "table":
        return {"points": tate.point_table(N), "table": tate.multiplication_table(N),
                "a4": tate.a4_series(args.precision), "a6": tate.a6_series(args.precision)}
    res = tate.check_all(N)
    if N <= 4:
        res["torsion_vs_qell"] = tate.torsion_vs_qell(N)
        res["real_fixed_points"] = tate.real_fixed_points(N)
        res["pass"] = res["pass"] and res["torsion_vs_qell"]["pass"] and res["real_fixed_points"]["pass"]
    return res


def _point(text: Optional[str], N: int):
    from .tate import TateError, TatePoint
    if text is None:
        raise InputError("missing point argument")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed point JSON: {exc}") from None
    try:
        return TatePoint.from_json(data, N)
    except (KeyError, TypeError) as exc:
        raise TateError(f"malformed point JSON: {exc}") from None


def cmd_power(args, ctx):
    from .power import power_to_json, qellr_power, stringy_power
    S = _structure(args, ctx)
    x = _class(args, ctx, S)
    if args.N < 0:
        raise InputError("--N must be non-negative")
    if args.string:
        series = stringy_power(x, args.N, args.precision)
        out = series.to_json()
        out["structure"] = series.structure.to_json()
    else:
        out = power_to_json(qellr_power(x, args.N))
    out["N"] = args.N
    return out


def cmd_verify(args, ctx):
    from .verify import run_suite
    return run_suite(quick=args.quick)


# ---------------------------------------------------------------- pretty printing


def _pretty(command: str, result) -> str:
    if command in ("qellr point", "qellr gset", "point", "gset") and "components" in result:
        lines = [f"{result['theory']}  rank {result['rank']}"]
        for c in result["components"]:
            basis = " ".join(f"{b['real_type']}@{b['q_exponent']}" for b in c["basis"])
            rel = c.get("relations", {}).get("relations", [])
            lines.append(f"  g={c['class']:<3} x={c['point']:<3} sign={c['sign']:+d} level={c['level']:<3} "
                         f"rank={len(c['basis']):<3} {basis}  {' ; '.join(rel)}")
        return "\n".join(lines)
    if command == "verify":
        rows = [f"  [{r['id']}] {r['name']:<24} {'PASS' if r['pass'] else 'FAIL'}" for r in result["criteria"]]
        return "\n".join(rows + [f"overall: {'PASS' if result['pass'] else 'FAIL'}"])
    if command == "tate table":
        return "\n".join(" ".join(f"{v:>3}" for v in row) for row in result["table"])
    return json.dumps(result, indent=2, sort_keys=True)


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    common.add_argument("--jobs", type=int, default=1, help="threads over independent components")
    common.add_argument("--precision", type=int, default=12, help="q-adic precision for series")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="write the JSON document to a file")

    p = argparse.ArgumentParser(prog="qellr", description=__doc__, parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def group_cmd(name, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("--group", required=True, help="cyclic:n, dihedral:n, split(...), product(...) or JSON file")
        return q

    group_cmd("group", "group data")
    q = group_cmd("classes", "Real (or ordinary) conjugacy classes")
    q.add_argument("--complex", action="store_true")
    q = group_cmd("transgress", "transgress a cocycle over every class")
    q.add_argument("--cocycle", required=True)
    q.add_argument("--kind", choices=["plain", "real3", "ref2"])
    group_cmd("chartab", "character table of the even part")
    q = group_cmd("rr", "twisted irreducibles with Real types")
    q.add_argument("--twist", help="2-cocycle JSON")
    q = sub.add_parser("mackey", parents=[common], help="Mackey count checks on the standard configurations")
    q.add_argument("--name", help="substring filter on configuration names")
    q = group_cmd("lambda", "finite model of an enhanced centralizer")
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--level", type=int, default=None)
    q.add_argument("--twist", help="3-cocycle JSON")
    q.add_argument("--complex", action="store_true")

    def qellr_options(q):
        q.add_argument("--group", required=True)
        q.add_argument("--twist", help="3-cocycle JSON")
        q.add_argument("--complex", action="store_true", help="QEll instead of QEllR")
        q.add_argument("--subgroup", help="comma-separated elements; X is the coset space")
        q.add_argument("--class", dest="class_file", help="class JSON (default: the unit)")

    q = sub.add_parser("qellr", parents=[common], help="quasi-elliptic cohomology")
    q.add_argument("what", choices=["point", "gset", "tate", "char"])
    qellr_options(q)
    for alias in ("point", "gset", "char"):
        q = sub.add_parser(alias, parents=[common], help=f"same as 'qellr {alias}'")
        qellr_options(q)

    q = sub.add_parser("tate", parents=[common], help="torsion points of the Tate curve")
    q.add_argument("op", choices=["mul", "inv", "table", "check"])
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--a", help='point JSON, e.g. {"xi": {"sign": 1, "zeta": 0, "q_num": 0, "q_den": 1}, "i": 0}')
    q.add_argument("--b", help="second point JSON for mul")

    q = sub.add_parser("power", parents=[common], help="Real power operation at a point")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--string", action="store_true", help="stringy version, kept modulo q^precision")
    qellr_options(q)

    q = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    q.add_argument("--quick", action="store_true")
    return p


COMMANDS = {"group": cmd_group, "classes": cmd_classes, "transgress": cmd_transgress, "chartab": cmd_chartab,
            "rr": cmd_rr, "mackey": cmd_mackey, "lambda": cmd_lambda, "qellr": cmd_qellr, "tate": cmd_tate,
            "power": cmd_power, "verify": cmd_verify}


def _command_name(args) -> str:
    if args.command in ("point", "gset", "char"):
        args.what = args.command
        args.command = "qellr"
    if args.command == "qellr":
        return f"qellr {args.what}"
    if args.command == "tate":
        return f"tate {args.op}"
    return args.command


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = _command_name(args)
    ctx = {"inputs": {}, "omega": None, "levels": [], "seeds": [] if args.seed is None else [args.seed]}
    from .cochains import CochainError
    from .tate import TateError
    try:
        result = COMMANDS[args.command](args, ctx)
    except OrderBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InputError, GroupError, CochainError, TateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    options = {k: v for k, v in sorted(vars(args).items())
               if k not in ("pretty", "out", "jobs", "command") and v is not None}
    manifest = {"command": name, "options": options, "inputs": dict(sorted(ctx["inputs"].items())),
                "omega": ctx["omega"], "levels": ctx["levels"], "seeds": ctx["seeds"], "version": __version__}
    doc = {"manifest": manifest, "result": result}
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(_pretty(name, result) if args.pretty else text)
    if args.command == "verify":
        return EXIT_OK if result["pass"] else EXIT_FAIL
    if isinstance(result, dict) and result.get("pass") is False:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
