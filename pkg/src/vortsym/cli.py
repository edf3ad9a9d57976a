"""Command line interface: ``vortsym analyze | verify | export``.

Reports are line oriented UTF-8 text.  Verification lines have the form
``CHECK <name> <PASS|FAIL|XFAIL> [factor=p/q]``; XFAIL marks an injected
perturbation that failed as it should.  Exit status is 0 when every check
passes, 1 on a failed check and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import liealg
from . import verifier as vf
from . import vortmodel as vm
from .exactla import DimensionError, as_fraction
from .liealg import LieAlgebra, StructureConstantError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad command line value or algebra file."""


# ---------------------------------------------------------------------------
# algebra files


def fmt_rational(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def algebra_to_json(L: LieAlgebra) -> dict:
    return {
        "dim": L.dim,
        "labels": list(L.labels),
        "brackets": [{"i": i, "j": j, "coeffs": [fmt_rational(c) for c in v]}
                     for i, j, v in L.nonzero_brackets()],
    }


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f"{where}: expected a 'p/q' string, got {value!r}")
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: cannot parse rational {value!r}") from None


def algebra_from_json(data) -> LieAlgebra:
    if not isinstance(data, dict):
        raise InputError("algebra file must contain a JSON object")
    for key in ("dim", "labels", "brackets"):
        if key not in data:
            raise InputError(f"missing key {key!r}")
    n = data["dim"]
    labels = data["labels"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError("dim must be a non-negative integer")
    if not isinstance(labels, list) or len(labels) != n or not all(isinstance(a, str) for a in labels):
        raise InputError(f"labels must be a list of {n} strings")
    if len(set(labels)) != n:
        raise InputError("labels must be distinct")
    brackets = {}
    for k, entry in enumerate(data["brackets"]):
        where = f"brackets[{k}]"
        if not isinstance(entry, dict) or not {"i", "j", "coeffs"} <= set(entry):
            raise InputError(f"{where}: expected an object with i, j, coeffs")
        i, j, coeffs = entry["i"], entry["j"], entry["coeffs"]
        if not all(isinstance(a, int) and not isinstance(a, bool) for a in (i, j)):
            raise InputError(f"{where}: i and j must be integers")
        if not (0 <= i < j < n):
            raise InputError(f"{where}: need 0 <= i < j < {n}, got i={i}, j={j}")
        if (i, j) in brackets:
            raise InputError(f"{where}: duplicate entry for ({i}, {j})")
        if not isinstance(coeffs, list) or len(coeffs) != n:
            raise InputError(f"{where}: coeffs must be a list of {n} rationals")
        brackets[(i, j)] = [_parse_rational(c, f"{where}.coeffs[{m}]") for m, c in enumerate(coeffs)]
    return LieAlgebra(labels, brackets)


def load_algebra(path: str) -> LieAlgebra:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return algebra_from_json(data)


# ---------------------------------------------------------------------------
# analyze


def analyze_report(L: LieAlgebra, depth: int = 2) -> list:
    lines = [f"ALGEBRA dim={L.dim} labels={','.join(L.labels)}"]
    fmt = L.format_subspace
    for rep in (liealg.derived_series(L), liealg.lower_central_series(L), liealg.upper_central_series(L)):
        lines.append(f"SERIES {rep.kind} dims={','.join(map(str, rep.dims))}")
        for k, term in enumerate(rep.terms):
            lines.append(f"  {rep.kind}[{k}] {fmt(term)}")
    solvable = liealg.is_solvable(L)
    lines.append(f"SOLVABLE {'yes' if solvable else 'no'}")
    lines.append(f"NILPOTENT {'yes' if liealg.is_nilpotent(L) else 'no'}")
    for name, s in (("CENTER", liealg.center(L)), ("RADICAL", liealg.radical(L)),
                    ("NILRADICAL", liealg.nilradical(L))):
        lines.append(f"{name} dim={s.dim} {fmt(s)}")
    lat = liealg.megaideal_closure(L, depth=depth)
    lines.append(f"MEGAIDEALS count={len(lat.closure)} (provable megaideals; the list is not claimed complete)")
    for k, s in enumerate(lat.closure):
        tags = sorted(set(lat.tags_of(s)))
        tag = f" tags={','.join(tags)}" if tags else ""
        lines.append(f"  M{k} dim={s.dim} {fmt(s)}{tag}")
    covers = [(i, j) for i, j in lat.inclusion_order
              if not any((i, k) in lat.inclusion_order and (k, j) in lat.inclusion_order
                         for k in range(len(lat.closure)))]
    for i, j in covers:
        lines.append(f"  INCLUSION M{i} < M{j}")
    return lines


# ---------------------------------------------------------------------------
# verify


class Report:
    def __init__(self):
        self.lines = []
        self.first_failure = None

    def header(self, text: str):
        self.lines.append(text)

    def check(self, name: str, ok: bool, factor: Optional[Fraction] = None, expect_fail: bool = False):
        if expect_fail:
            status = "XFAIL" if not ok else "FAIL"
        else:
            status = "PASS" if ok else "FAIL"
        if status == "FAIL" and self.first_failure is None:
            self.first_failure = name
        line = f"CHECK {name} {status}"
        if factor is not None:
            line += f" factor={fmt_rational(as_fraction(factor))}"
        self.lines.append(line)

    @property
    def ok(self) -> bool:
        return self.first_failure is None


def _betas(args) -> tuple:
    return (args.beta,) if args.beta is not None else vf.BETAS


def suite_theorem1(rep: Report, args, rng: random.Random):
    betas = _betas(args)
    for k in range(args.samples):
        fam = vf.random_family(rng)
        beta = rng.choice(betas)
        psi = vf.random_psi(rng, 5)
        r = vf.verify_theorem1(fam, psi, beta)
        rep.check(f"theorem1[{k}]", r.holds, r.factor)
        if args.inject != "none":
            s, factor = vf.perturbed_family(fam, args.inject)
            results = [vf.verify_theorem1(s, vf.random_psi(rng, 5), beta, factor=factor).holds for _ in range(3)]
            rep.check(f"theorem1.inject-{args.inject}[{k}]", all(results), factor, expect_fail=True)


def suite_discrete(rep: Report, args, rng: random.Random):
    betas = _betas(args)
    psis = vf.structured_psis() + [vf.random_psi(rng, 5) for _ in range(3)]
    for beta in betas:
        r = vf.verify_discrete_group(beta, psis)
        for name, reports in r.symmetries.items():
            rep.check(f"discrete.symmetry.{name}[beta={beta}]", all(x.holds for x in reports),
                      vf.DISCRETE_ELEMENTS[name].factor)
    rep.check("discrete.involution", r.involutions)
    rep.check("discrete.commutative", r.commutative)
    rep.check("discrete.klein-four", r.klein)
    rep.lines.extend(r.render_table())


def suite_conjugation(rep: Report, args, rng: random.Random):
    for beta in _betas(args):
        for k in range(args.samples):
            r = vf.verify_conjugation_map(vf.random_psi(rng, 5), beta)
            rep.check(f"conjugation[beta={beta}][{k}]", r.holds, r.factor)


def suite_g2(rep: Report, args, rng: random.Random):
    betas = _betas(args)
    for k in range(args.samples):
        beta = rng.choice(betas)
        e = vf.random_g2(rng, beta)
        try:
            r = vf.verify_g2_composition(e, beta)
        except vm.NotTheorem1FormError:
            rep.check(f"g2[{k}]", False)
            continue
        sym = vf.verify_theorem1(r.family, vf.random_psi(rng, 4), beta)
        rep.check(f"g2[{k}]", r.matches_closed_form and sym.holds, r.family.factor)


def suite_pushforward(rep: Report, args, rng: random.Random):
    spec = vm.TruncationSpec.polynomial(args.degree if args.degree is not None else 3)
    for k in range(args.samples):
        fam = vf.random_family(rng)
        s = vm.family_to_substitution(fam)
        for name in ("g'", "g''"):
            r = vm.check_megaideal_preservation(spec, s, name)
            rep.check(f"pushforward.{name}[{k}]", r.preserved)
        z = vm.pushforward(s, vm.VectorField(eta=vf.random_poly_t(rng, 3)))
        rep.check(f"pushforward.Z-vertical[{k}]", not (z.xi_t or z.xi_x or z.xi_y))


SUITES = {
    "theorem1": suite_theorem1,
    "discrete": suite_discrete,
    "conjugation": suite_conjugation,
    "g2": suite_g2,
    "pushforward": suite_pushforward,
}


def run_verify(args) -> Report:
    rep = Report()
    beta = "sweep" if args.beta is None else fmt_rational(args.beta)
    rep.header(f"CONFIG command=verify suite={args.suite} beta={beta} samples={args.samples} "
               f"seed={args.seed} inject={args.inject}")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        # one generator per suite so 'all' reproduces the single-suite runs
        SUITES[name](rep, args, random.Random(f"{args.seed}:{name}"))
    rep.lines.append(f"RESULT {'PASS' if rep.ok else 'FAIL'}"
                     + ("" if rep.ok else f" first_failure={rep.first_failure}"))
    return rep


# ---------------------------------------------------------------------------
# argument handling


def _rational_arg(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _exponents_arg(text: str) -> tuple:
    try:
        return tuple(as_fraction(p) for p in text.split(",") if p.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad exponent list: {text!r}") from None


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=("poly", "polynomial", "exp", "exponential"), default="poly")
    p.add_argument("--degree", type=int, default=None, help="max degree of the polynomial model")
    p.add_argument("--exponents", type=_exponents_arg, default=None,
                   help="comma separated exponents of the exponential model (must include 0)")


def spec_from_args(args) -> vm.TruncationSpec:
    try:
        if args.model in ("exp", "exponential"):
            return vm.TruncationSpec.exponential(args.exponents or (Fraction(0), Fraction(1)))
        return vm.TruncationSpec.polynomial(2 if args.degree is None else args.degree)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vortsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="structural report of a Lie algebra")
    pa.add_argument("source", help="algebra JSON file, or 'vorticity' for a built-in model")
    _add_model_args(pa)
    pa.add_argument("--depth", type=int, default=2, help="megaideal seed recursion depth")
    pa.add_argument("--out", default=None)

    pv = sub.add_parser("verify", help="run exact invariance checks")
    pv.add_argument("suite", choices=list(SUITES) + ["all"])
    pv.add_argument("--beta", type=_rational_arg, default=None,
                    help="beta-plane parameter; default sweeps 0, 1, 7/3")
    pv.add_argument("--samples", type=int, default=20)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--inject", choices=("none",) + vf.INJECTIONS, default="none")
    pv.add_argument("--degree", type=int, default=None, help="model degree for the pushforward suite")
    pv.add_argument("--out", default=None)

    pe = sub.add_parser("export", help="write a built-in model as an algebra JSON file")
    pe.add_argument("source", choices=("vorticity",))
    _add_model_args(pe)
    pe.add_argument("--out", default=None)
    return parser


def _emit(lines: Sequence[str], out: Optional[str]):
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            if args.depth < 1:
                raise InputError("--depth must be at least 1")
            if args.source == "vorticity":
                L = vm.build_algebra(spec_from_args(args))
            else:
                L = load_algebra(args.source)
            _emit(analyze_report(L, args.depth), args.out)
            return EXIT_OK
        if args.command == "export":
            L = vm.build_algebra(spec_from_args(args))
            _emit([json.dumps(algebra_to_json(L), indent=2)], args.out)
            return EXIT_OK
        if args.samples < 1:
            raise InputError("--samples must be positive")
        rep = run_verify(args)
        _emit(rep.lines, args.out)
        if not rep.ok:
            print(f"vortsym: check failed: {rep.first_failure}", file=sys.stderr)
            return EXIT_FAIL
        return EXIT_OK
    except (InputError, StructureConstantError, DimensionError) as exc:
        print(f"vortsym: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
