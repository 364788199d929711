"""Command-line surface.

Exit codes: 0 success, 1 contract violation, 2 parse error.  Rationals print
as p/q unless --float is given.  CSV schemas follow the producing modules.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from .coefficients import (
    farley_matches_phi,
    farley_norm,
    farley_phi,
    gram_psd_check,
    phi_alpha,
    phi_alpha_eval,
    reduced_rotation_elements,
)
from .errors import ContractError, ParseError
from .oracles import (
    check_cyclic_forest_lemma,
    check_reduction_soundness,
    check_term_parity,
    check_word_injectivity,
)
from .shiftrep import almost_invariance_report, c_constant, kn_coefficient, zeta
from .thompson import (
    VElement,
    classify,
    element_from_json,
    eval_pl,
    format_element_literal,
    inverse,
    multiply,
    parse_dyadic,
    parse_element_literal,
)

SWEEP_FIELDS = ["element_id", "n_leaves", "alpha_num", "alpha_den", "phi_num", "phi_den"]


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}") from exc


def _load_element(source: str) -> VElement:
    try:
        return parse_element_literal(source)
    except ParseError:
        if os.path.exists(source):
            with open(source, encoding="ascii") as fh:
                text = fh.read().strip()
            if text.startswith("{"):
                return element_from_json(json.loads(text))
            return parse_element_literal(text)
        raise


def _load_elements_file(path: str) -> list[VElement]:
    with open(path, encoding="ascii") as fh:
        text = fh.read().strip()
    if text.startswith("["):
        return [element_from_json(obj) for obj in json.loads(text)]
    return [parse_element_literal(line) for line in text.splitlines() if line.strip()]


def _show_fraction(x: Fraction, as_float: bool) -> str:
    if as_float:
        return repr(float(x))
    return f"{x.numerator}/{x.denominator}"


def _emit_rows(rows, fieldnames, csv_path, out):
    if csv_path:
        with open(csv_path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(fieldnames)
            writer.writerows(rows)
    else:
        writer = csv.writer(out)
        writer.writerow(fieldnames)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_element(args, out) -> int:
    elems = [_load_element(e) for e in args.elements]
    if args.action == "reduce":
        print(format_element_literal(elems[0]), file=out)
    elif args.action == "multiply":
        if len(elems) < 2:
            raise ContractError("element multiply: need at least two elements")
        acc = elems[0]
        for e in elems[1:]:
            acc = multiply(acc, e)
        print(format_element_literal(acc), file=out)
    elif args.action == "inverse":
        print(format_element_literal(inverse(elems[0])), file=out)
    elif args.action == "classify":
        print(classify(elems[0]), file=out)
    elif args.action == "eval":
        if args.at is None:
            raise ContractError("element eval: --at is required")
        x = parse_dyadic(args.at)
        y = eval_pl(elems[0], x)
        if args.float:
            print(repr(y.to_fraction().numerator / y.to_fraction().denominator), file=out)
        else:
            print(str(y), file=out)
    return 0


def _cmd_phi(args, out) -> int:
    g = _load_element(args.element)
    if args.symbolic:
        poly = phi_alpha(g)
        if args.coeffs:
            print(json.dumps(list(poly.alpha_coefficients())), file=out)
        else:
            print(str(poly), file=out)
    else:
        if args.alpha is None:
            raise ContractError("phi: give --alpha p/q or --symbolic")
        value = phi_alpha_eval(g, _parse_fraction(args.alpha))
        print(_show_fraction(value, args.float), file=out)
    return 0


def _cmd_scan(args, out) -> int:
    alpha = _parse_fraction(args.alpha)
    rows = []
    per_n: dict[int, list[Fraction]] = {n: [] for n in range(1, args.max_leaves + 1)}
    for g in reduced_rotation_elements(args.max_leaves):
        value = phi_alpha_eval(g, alpha)
        per_n[g.leaf_count].append(value)
        rows.append(
            [
                format_element_literal(g),
                g.leaf_count,
                alpha.numerator,
                alpha.denominator,
                value.numerator,
                value.denominator,
            ]
        )
    _emit_rows(rows, SWEEP_FIELDS, args.csv, out)
    for n in range(1, args.max_leaves + 1):
        expected = alpha ** (2 * n - 2)
        deviation = max((abs(v - expected) for v in per_n[n]), default=Fraction(0))
        print(
            f"# n={n} count={len(per_n[n])}"
            f" phi={expected.numerator}/{expected.denominator}"
            f" max_deviation={deviation.numerator}/{deviation.denominator}",
            file=out,
        )
    return 0


def _cmd_sweep(args, out) -> int:
    g = _load_element(args.element)
    label = format_element_literal(g)
    rows = []
    for text in args.alphas.split(","):
        alpha = _parse_fraction(text)
        value = phi_alpha_eval(g, alpha)
        rows.append(
            [label, g.leaf_count, alpha.numerator, alpha.denominator, value.numerator, value.denominator]
        )
    _emit_rows(rows, SWEEP_FIELDS, args.csv, out)
    return 0


def _cmd_gram(args, out) -> int:
    elements = _load_elements_file(args.elements)
    result = gram_psd_check(elements, _parse_fraction(args.alpha))
    if result.is_psd:
        print("PSD", file=out)
    else:
        witness = {k: str(v) for k, v in result.witness.items()}
        print(f"NOT-PSD {json.dumps(witness)}", file=out)
    return 0


def _cmd_farley(args, out) -> int:
    g = _load_element(args.element)
    norm = farley_norm(g)
    print(f"norm_sq={norm}", file=out)
    print(f"phi_alpha={phi_alpha(g)}", file=out)
    verdict = "matches" if farley_matches_phi(g) else "differs"
    print(f"exponential-family={verdict}", file=out)
    if args.beta is not None:
        value = farley_phi(g, _parse_fraction(args.beta))
        print(f"decay=exp(-{value.beta})^{value.exponent}", file=out)
        if args.float:
            print(f"decay_float={value.as_float()!r}", file=out)
    return 0


def _cmd_kazhdan(args, out) -> int:
    if args.which == "kn":
        z = zeta(args.m)
        coeff = kn_coefficient(args.n, [z] * (2**args.n), z)
        reference = c_constant(z) ** (2**args.n)
        verdict = "exact-match" if coeff == reference else "MISMATCH"
        if args.json:
            print(
                json.dumps(
                    {
                        "n": args.n,
                        "m": args.m,
                        "coefficient": f"{coeff.numerator}/{coeff.denominator}",
                        "reference": f"{reference.numerator}/{reference.denominator}",
                        "verdict": verdict,
                    }
                ),
                file=out,
            )
            return 0
        rows = [
            [
                args.n,
                args.m,
                f"{coeff.numerator}/{coeff.denominator}",
                f"{reference.numerator}/{reference.denominator}",
                verdict,
            ]
        ]
        _emit_rows(rows, ["n", "m", "coefficient", "reference", "verdict"], args.csv, out)
        return 0
    g = _load_element(args.element)
    report = almost_invariance_report(g, args.m)
    if args.json:
        payload = dict(report)
        for key in ("coefficient", "bound"):
            payload[key] = f"{report[key].numerator}/{report[key].denominator}"
        print(json.dumps(payload), file=out)
        return 0
    rows = [
        [
            report["m"],
            f"{report['coefficient'].numerator}/{report['coefficient'].denominator}",
            f"{report['bound'].numerator}/{report['bound'].denominator}",
            report["satisfied"],
        ]
    ]
    _emit_rows(rows, ["m", "coefficient", "bound", "satisfied"], args.csv, out)
    return 0


def _cmd_oracle(args, out) -> int:
    if args.which == "word-injectivity":
        report = check_word_injectivity(args.bound if args.bound else 8)
    elif args.which == "cyclic-forest":
        report = check_cyclic_forest_lemma(args.bound if args.bound else 6)
    elif args.which == "parity":
        report = check_term_parity(max_leaves=args.bound if args.bound else 5)
    else:
        report = check_reduction_soundness(
            samples=args.bound if args.bound else 500, seed=args.seed
        )
    print(json.dumps(report), file=out)
    return 0 if report["violations"] == 0 else 1


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forestrep")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("element", help="group arithmetic on element literals")
    p.add_argument("action", choices=["reduce", "multiply", "inverse", "classify", "eval"])
    p.add_argument("elements", nargs="+")
    p.add_argument("--at", help="dyadic argument for eval, e.g. 3/8")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=_cmd_element)

    p = sub.add_parser("phi", help="interpolation coefficient of one element")
    p.add_argument("--element", required=True)
    p.add_argument("--alpha")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--coeffs", action="store_true", help="dense coefficient list, lowest degree first")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=_cmd_phi)

    p = sub.add_parser("scan-vanishing", help="decay table over reduced rotation pairs")
    p.add_argument("--alpha", required=True)
    p.add_argument("--max-leaves", type=int, required=True)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("sweep", help="phi values of one element over several alphas")
    p.add_argument("--element", required=True)
    p.add_argument("--alphas", required=True, help="comma-separated rationals")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("gram", help="exact positive-semidefiniteness verdict")
    p.add_argument("--elements", required=True, help="file of literals or JSON array")
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=_cmd_gram)

    p = sub.add_parser("farley", help="cocycle norm and comparison verdict")
    p.add_argument("--element", required=True)
    p.add_argument("--beta")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=_cmd_farley)

    p = sub.add_parser("kazhdan", help="shift-representation coefficients")
    ksub = p.add_subparsers(dest="which", required=True)
    pk = ksub.add_parser("kn")
    pk.add_argument("--n", type=int, required=True)
    pk.add_argument("--m", type=int, required=True)
    pk.add_argument("--csv")
    pk.add_argument("--json", action="store_true")
    pk.set_defaults(func=_cmd_kazhdan, which="kn")
    pa = ksub.add_parser("almost-invariant")
    pa.add_argument("--element", required=True)
    pa.add_argument("--m", type=int, required=True)
    pa.add_argument("--csv")
    pa.add_argument("--json", action="store_true")
    pa.set_defaults(func=_cmd_kazhdan, which="almost-invariant")

    p = sub.add_parser("oracle", help="brute-force verification reports")
    p.add_argument(
        "which", choices=["word-injectivity", "cyclic-forest", "parity", "reduction"]
    )
    p.add_argument("--bound", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
