"""Command-line front end.

Commands: fgl, ring, diag, steenrod, mdt, classify-k2, motive.  Input is
a JSON profile (UTF-8) read from a path or stdin ('-'); unknown keys are
rejected.  Exit codes: 2 on parse failure, 3 on validation failure, 1 on
internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import coefficients as coeff
from . import corr, forms, mdt, motives, render, steenrod
from .quadring import SplitQuadric, degree

EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3

PROFILE_KEYS = {
    "dim", "splitting_pattern", "kahn_dims", "disc_trivial",
    "clifford_index", "i_power", "symbols", "anisotropic", "chow_mdt",
}


class CliError(Exception):
    def __init__(self, code: int, reason: str, message: str):
        super().__init__(message)
        self.code = code
        self.reason = reason


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmot",
        description="Oriented-cohomology rings of split quadrics and "
                    "decomposition types of their motives.")
    parser.add_argument("command",
                        choices=["fgl", "ring", "diag", "steenrod", "mdt",
                                 "classify-k2", "motive"])
    parser.add_argument("input", nargs="?", default=None,
                        help="JSON input path, or '-' for stdin")
    parser.add_argument("--n", type=int, default=2,
                        help="height of the periodic theory (default 2)")
    parser.add_argument("--precision", type=int, default=8,
                        help="2-adic precision M (default 8)")
    parser.add_argument("--truncation", type=int, default=None,
                        help="series truncation N (default 2^(n+1)+2)")
    parser.add_argument("--format", choices=["ascii", "svg", "structured-text"],
                        default="ascii")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    return parser


def _read_input(path: str | None) -> dict:
    if path is None:
        raise CliError(EXIT_PARSE, "missing-input",
                       "this command requires an input file (or '-')")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as err:
        raise CliError(EXIT_PARSE, "unreadable-input", str(err)) from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise CliError(EXIT_PARSE, "bad-json", str(err)) from err
    if not isinstance(data, dict):
        raise CliError(EXIT_PARSE, "bad-schema", "top level must be an object")
    return data


def _parse_profile(data: dict) -> forms.FormProfile:
    unknown = set(data) - PROFILE_KEYS
    if unknown:
        raise CliError(EXIT_PARSE, "unknown-keys",
                       f"unknown profile keys: {sorted(unknown)}")
    if "dim" not in data or not isinstance(data["dim"], int):
        raise CliError(EXIT_PARSE, "bad-schema", "profile needs integer 'dim'")
    try:
        kahn = {int(k): int(v) for k, v in data.get("kahn_dims", {}).items()}
        symbols = {int(k): str(v) for k, v in data.get("symbols", {}).items()}
        profile = forms.FormProfile(
            dim=data["dim"],
            splitting_pattern=tuple(data.get("splitting_pattern", ())),
            kahn_dims=kahn,
            disc_trivial=bool(data.get("disc_trivial", False)),
            clifford_index=data.get("clifford_index"),
            i_power=data.get("i_power"),
            symbols=symbols,
            anisotropic=bool(data.get("anisotropic", True)),
        )
    except (TypeError, ValueError) as err:
        raise CliError(EXIT_PARSE, "bad-schema", str(err)) from err
    return profile


def _theory(args, need_dim: int | None = None) -> coeff.Theory:
    n_trunc = args.truncation
    if n_trunc is None:
        n_trunc = 2 ** (args.n + 1) + 2
        if need_dim is not None:
            n_trunc = max(n_trunc, need_dim + 2)
    return coeff.morava(args.n, args.precision, n_trunc)


def _fmt_series(series: dict, var: str = "t") -> str:
    if not series:
        return "0"
    bits = []
    for deg in sorted(series):
        c = series[deg]
        body = repr(c)
        if body == "1":
            bits.append(f"{var}^{deg}" if deg != 1 else var)
        else:
            bits.append(f"({body})*{var}^{deg}" if deg != 1 else f"({body})*{var}")
    return " + ".join(bits)


def _fmt_log(fgl: coeff.FormalGroupLaw) -> str:
    bits = []
    for deg in sorted(fgl.log):
        vl = fgl.log[deg]
        for vexp, frac in sorted(vl.items()):
            num = frac.num if frac.num <= frac.ctx.big // 2 else frac.num - frac.ctx.big
            coeff_s = f"{num}" if frac.den == 0 else f"{num}/2^{frac.den}"
            v_s = "" if vexp == 0 else ("*v" if vexp == 1 else f"*v^{vexp}")
            t_s = "t" if deg == 1 else f"t^{deg}"
            if coeff_s == "1" and not v_s:
                bits.append(t_s)
            else:
                bits.append(f"({coeff_s}{v_s})*{t_s}")
    return " + ".join(bits)


def cmd_fgl(args, out) -> int:
    theory = _theory(args)
    out.write(f"theory: {theory.name}, precision 2^{args.precision}, "
              f"truncation {theory.fgl.truncation}\n")
    out.write("log(t) = " + _fmt_log(theory.fgl) + "\n")
    out.write("[2](t) = " + _fmt_series(theory.fgl.two_series) + "\n")
    return 0


def _dim_from_input(args) -> int:
    data = _read_input(args.input)
    profile = _parse_profile(data)
    if profile.dim < 3:
        raise CliError(EXIT_VALIDATION, "dim-too-small",
                       "need a form of dimension >= 3 (quadric dim >= 1)")
    return profile.quadric_dim()


def cmd_ring(args, out) -> int:
    dim_q = _dim_from_input(args)
    theory = _theory(args, need_dim=dim_q)
    quad = SplitQuadric(dim_q, theory)
    out.write(f"split quadric D={dim_q} over {theory.name}\n")
    keys = quad.basis_keys()
    names = [mdt_key_name(k) for k in keys]
    out.write("basis: " + " ".join(names) + "\n")
    out.write("h-powers:\n")
    for k in range(dim_q + 1):
        out.write(f"  h^{k} = {quad.h_power(k)!r}\n")
    out.write("multiplication table:\n")
    for k1 in keys:
        for k2 in keys:
            prod = quad.basis_class(k1) * quad.basis_class(k2)
            out.write(f"  {mdt_key_name(k1)} * {mdt_key_name(k2)} = {prod!r}\n")
    out.write("degrees:\n")
    for k in keys:
        out.write(f"  deg {mdt_key_name(k)} = {degree(quad.basis_class(k))!r}\n")
    return 0


def mdt_key_name(key) -> str:
    return "lt" if key[0] == "lt" else f"{key[0]}{key[1]}"


def cmd_diag(args, out) -> int:
    dim_q = _dim_from_input(args)
    if args.n < 2:
        raise CliError(EXIT_VALIDATION, "bad-height",
                       "the projector families need n >= 2")
    theory = coeff.morava_mod2(args.n, args.truncation)
    quad = SplitQuadric(dim_q, theory)
    fam = corr.diagonal(quad, "morava", args.n)
    ident = corr.identity(quad)
    total = ident.zero_like()
    for p in fam:
        total = total + p
    ok_sum = total == ident
    ok = True
    for i, a in enumerate(fam):
        for j, b in enumerate(fam):
            want = a if i == j else a.zero_like()
            if corr.compose(a, b) != want:
                ok = False
    out.write(f"split quadric D={dim_q}, height n={args.n}\n")
    d_lo, d_pr = corr.window_bounds(quad, args.n)
    for i, p in enumerate(fam):
        tag = f"pi_{i}" if i <= d_pr else f"varpi_{i - d_pr - 1 + d_lo}"
        out.write(f"  {tag} = {p!r}\n")
    out.write(f"sum equals diagonal: {ok_sum}\n")
    out.write(f"mutually orthogonal idempotents: {ok}\n")
    return 0 if (ok and ok_sum) else EXIT_INTERNAL


def cmd_steenrod(args, out) -> int:
    dim_q = _dim_from_input(args)
    theory = coeff.chow_mod2()
    quad = SplitQuadric(dim_q, theory)
    out.write(f"total operation on the split quadric D={dim_q} (mod 2)\n")
    for key in quad.basis_keys():
        st = steenrod.steenrod_total(quad, quad.basis_class(key))
        out.write(f"  St({mdt_key_name(key)}) = {st!r}\n")
    n = args.n
    r = dim_q - (2 ** n - 1)
    if 0 < r < 2 ** n:
        rep = steenrod.steenrod_lemma_predicates(n, r)
        out.write(f"window report (n={n}, r={r}): "
                  f"l0-carriers {rep.l0_carriers()}, "
                  f"predicted (m, x) = ({rep.predicted_m}, {rep.predicted_x}), "
                  f"special summand: {rep.special_summand_ok}, "
                  f"exclusive: {rep.exclusive_ok}\n")
    else:
        out.write(f"dimension {dim_q} outside the height-{n} window; "
                  "no structure report\n")
    return 0


def _declared_chow_mdt(data: dict, profile: forms.FormProfile) -> mdt.MDTDiagram:
    if "chow_mdt" not in data:
        raise CliError(EXIT_PARSE, "missing-mdt",
                       "the mdt command needs a declared 'chow_mdt'")
    block = data["chow_mdt"]
    if not isinstance(block, dict) or "components" not in block:
        raise CliError(EXIT_PARSE, "bad-schema",
                       "'chow_mdt' must be an object with 'components'")
    try:
        comps = [frozenset(mdt.parse_cell(c) for c in comp)
                 for comp in block["components"]]
        return mdt.chow_diagram(profile.quadric_dim(), comps,
                                profile.anisotropic)
    except (ValueError, KeyError) as err:
        raise CliError(EXIT_VALIDATION, "bad-diagram", str(err)) from err


def _emit_diagram(args, out, diagram, n=None):
    if args.format == "svg":
        out.write(render.diagram_svg(diagram, n=n))
    elif args.format == "structured-text":
        out.write(json.dumps(mdt.diagram_to_dict(diagram), indent=2,
                             sort_keys=True) + "\n")
    else:
        out.write(render.diagram_ascii(diagram))


def cmd_mdt(args, out) -> int:
    data = _read_input(args.input)
    profile = _parse_profile(data)
    diagram = _declared_chow_mdt(data, profile)
    issues = mdt.check_outer_excellent(diagram, args.n)
    if issues:
        raise CliError(EXIT_VALIDATION, "outer-connections",
                       "; ".join(issues))
    out.write(f"Chow decomposition type (D={diagram.dim_q}):\n")
    _emit_diagram(args, out, diagram, n=args.n)
    window = mdt.chow_to_morava(diagram, args.n)
    out.write(f"height-{args.n} decomposition type:\n")
    _emit_diagram(args, out, window)
    back = mdt.morava_to_chow(window, args.n)
    out.write(f"round trip restores the Chow diagram: "
              f"{back.components == diagram.components}\n")
    return 0


def cmd_classify(args, out) -> int:
    data = _read_input(args.input)
    profile = _parse_profile(data)
    issues = forms.validate(profile)
    if issues:
        raise CliError(EXIT_VALIDATION, "profile-invalid", "; ".join(issues))
    try:
        result = mdt.classify_k2(profile)
    except ValueError as err:
        raise CliError(EXIT_VALIDATION, "classification", str(err)) from err
    red = result.reduction
    out.write(f"row: {result.row}\n")
    out.write(f"kernel level {red.level}, twist offset {red.twist}, "
              f"kernel dimension {red.kernel_dim}\n")
    _emit_diagram(args, out, result.diagram)
    out.write("summands: " + result.expr.render() + "\n")
    return 0


def _parse_expr(block, period) -> motives.MotiveExpr:
    if not isinstance(block, list):
        raise CliError(EXIT_PARSE, "bad-schema", "expression must be a list")
    out = []
    for item in block:
        kind = item.get("kind", "L")
        sym = motives.symbol(*item.get("symbol", []))
        twist = int(item.get("twist", 0))
        label = item.get("label")
        if kind == "tate":
            kind, sym = motives.KIND_INVERTIBLE, motives.ZERO
        out.append(motives.Summand(kind, sym, twist, label))
    return motives.MotiveExpr(out, period)


def cmd_motive(args, out) -> int:
    data = _read_input(args.input)
    op = data.get("op")
    period = 2 ** args.n - 1
    if op == "tensor":
        a = _parse_expr(data.get("a", []), period)
        b = _parse_expr(data.get("b", []), period)
        out.write(motives.tensor(a, b).render() + "\n")
    elif op == "kill":
        a = _parse_expr(data.get("a", []), period)
        alpha = motives.symbol(*data.get("symbol", []))
        out.write(motives.base_change_kill(a, alpha).render() + "\n")
    elif op == "detect":
        a = _parse_expr(data.get("a", []), period)
        alpha = motives.symbol(*data.get("symbol", []))
        twist = int(data.get("twist", 0))
        out.write(str(motives.detect_count(a, alpha, twist)) + "\n")
    elif op == "pfister":
        alpha = motives.symbol(*data.get("symbol", []))
        out.write(motives.pfister_motive(args.n, alpha, period).render() + "\n")
    else:
        raise CliError(EXIT_PARSE, "bad-op",
                       "op must be tensor, kill, detect, or pfister")
    return 0


COMMANDS = {
    "fgl": cmd_fgl,
    "ring": cmd_ring,
    "diag": cmd_diag,
    "steenrod": cmd_steenrod,
    "mdt": cmd_mdt,
    "classify-k2": cmd_classify,
    "motive": cmd_motive,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        return COMMANDS[args.command](args, sink)
    except CliError as err:
        print(f"error: {err.reason}: {err}", file=sys.stderr)
        return err.code
    except Exception as err:  # noqa: BLE001 - map to the internal exit code
        print(f"error: internal: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        if args.out:
            sink.close()


if __name__ == "__main__":
    sys.exit(main())
