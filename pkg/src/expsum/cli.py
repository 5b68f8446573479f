"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 precondition violation, 3 resource
limit, 4 acceptance failure.
"""
from __future__ import annotations

import argparse
import cmath
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

from . import acceptance
from .characters import (
    character_group,
    enumerate_characters,
    gauss_P_formula,
    parse_character,
    satisfies_gauss_hypothesis,
)
from .complexsum import PhaseAngle
from .errors import DomainError, InvalidConfigError, PreconditionError, ResourceLimitError
from .multfun import (
    ModifiedCharacterSpec,
    MultiplicativeFunctionSpec,
    construct_example1,
    construct_example2,
    from_character,
    modified_character,
)
from .oracles import naive_P
from .pretentious import distance, log_correlation
from .sums import A_expansion, A_recursive, B_r, B_r_anchor, B_r_tail_bound, explicit_bounds, sum_trajectory

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_RESOURCE, EXIT_ACCEPTANCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(v: float) -> str:
    # + 0.0 folds -0.0 into 0.0
    return format(v + 0.0, ".17g")


def fmt_c(z: complex) -> str:
    return f"{fmt(z.real)} {fmt(z.imag)}"


def worker_count() -> int:
    raw = os.environ.get("EXPSUM_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"EXPSUM_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def fan_out(fn, items: Sequence) -> List:
    """Map over ``items`` on EXPSUM_THREADS workers; results keep input order."""
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def read_config(path: Optional[str]) -> Dict[str, str]:
    """Plain ``key=value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _angle(text: str) -> PhaseAngle:
    try:
        return PhaseAngle.parse(text)
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc))


def _eta(text: str):
    """``p=re,im`` or ``p=re``."""
    try:
        p, val = text.split("=", 1)
        parts = [float(v) for v in val.split(",")]
        if len(parts) == 1:
            parts.append(0.0)
        re, im = parts
        return int(p), complex(re, im)
    except ValueError:
        raise UsageError(f"bad --eta {text!r}; expected p=re,im")


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _load_spec(path: str) -> MultiplicativeFunctionSpec:
    try:
        return MultiplicativeFunctionSpec.load(path)
    except OSError as exc:
        raise UsageError(str(exc))


def cmd_characters(args) -> int:
    out = []
    if args.inspect:
        chi = parse_character(args.inspect)
        if args.modulus and chi.modulus != args.modulus:
            raise UsageError(f"{args.inspect} is not a character mod {args.modulus}")
        out.append(f"label {chi.label}")
        out.append(f"order {chi.order}")
        out.append(f"conductor {chi.conductor}")
        out.append(f"primitive_part {chi.primitive.label}")
        out.append(f"primitive {'yes' if chi.is_primitive else 'no'}")
        out.append("n re im")
        for n in range(chi.modulus):
            out.append(f"{n} {fmt_c(complex(chi.values[n]))}")
    else:
        if not args.modulus:
            raise UsageError("characters needs --modulus")
        group = character_group(args.modulus)
        out.append(f"# modulus {args.modulus}: {group.size} characters, addressed as m.i")
        out.append("label order conductor primitive_part real")
        for chi in enumerate_characters(args.modulus):
            out.append(f"{chi.label} {chi.order} {chi.conductor} {chi.primitive.label} {'yes' if chi.is_real else 'no'}")
    print("\n".join(out))
    return EXIT_OK


def _sum_target(args):
    if args.spec:
        if args.eta:
            raise UsageError("--eta applies to --char only")
        return _load_spec(args.spec)
    if not args.char:
        raise UsageError("sum needs --spec or --char")
    chi = parse_character(args.char)
    if args.eta:
        return modified_character(ModifiedCharacterSpec(chi, tuple(_eta(e) for e in args.eta)))
    return chi


def cmd_sum(args) -> int:
    target = _sum_target(args)
    limit = int(args.limit)
    alphas = [_angle(a) for a in args.alpha]
    if len(alphas) == 1:
        traj = sum_trajectory(target, alphas[0], args.t, limit)
        if args.out:
            traj.write(args.out)
            cp = traj.final
            print(f"x {cp.x}\nvalue {fmt_c(cp.value)}\nrunsup {fmt(cp.running_sup)}")
        else:
            sys.stdout.write(traj.to_csv())
        return EXIT_OK
    if args.out:
        raise UsageError("--out takes a single --alpha")
    trajs = fan_out(lambda a: sum_trajectory(target, a, args.t, limit, schedule=[limit]), alphas)
    print("alpha,re,im,abs,runsup")
    for a, traj in zip(alphas, trajs):
        cp = traj.final
        print(f"{a.label()},{fmt(cp.value.real)},{fmt(cp.value.imag)},{fmt(abs(cp.value))},{fmt(cp.running_sup)}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    alpha = _angle(args.alpha)
    b = explicit_bounds(args.modulus, alpha)
    print(f"geometric {fmt(b.geometric) if b.geometric is not None else 'unavailable'}")
    print(f"character {fmt(b.character) if b.character is not None else 'unavailable'}")
    return EXIT_OK if b.character is not None else EXIT_PRECONDITION


def cmd_gauss(args) -> int:
    chi = parse_character(f"{args.modulus}.{args.char}")
    if not satisfies_gauss_hypothesis(chi):
        raise PreconditionError(
            f"{chi.label}: m/m0 = {chi.modulus // chi.conductor} is not squarefree and coprime to m0 = {chi.conductor}"
        )
    m = chi.modulus
    if args.all:
        values = list(range(1, m + 1))
    elif args.a is not None:
        values = [args.a]
    else:
        raise UsageError("gauss needs --a or --all")
    print("a formula_re formula_im brute_re brute_im deviation")
    worst = 0.0
    for a in values:
        formula = gauss_P_formula(chi, a)
        brute = naive_P(chi, cmath.exp(2j * math.pi * (a % m) / m))
        dev = abs(formula - brute)
        worst = max(worst, dev)
        print(f"{a} {fmt_c(formula)} {fmt_c(brute)} {fmt(dev)}")
    print(f"max_deviation {fmt(worst)}")
    return EXIT_OK


def _twist_target(text: str) -> MultiplicativeFunctionSpec:
    try:
        label, t = text.split(",", 1)
        return from_character(parse_character(label), float(t))
    except ValueError:
        raise UsageError(f"bad --twist {text!r}; expected m.i,T")


def cmd_distance(args) -> int:
    f = _load_spec(args.f)
    if (args.g is None) == (args.twist is None):
        raise UsageError("distance needs exactly one of --g and --twist")
    g = _load_spec(args.g) if args.g else _twist_target(args.twist)
    print(fmt(distance(f, g, args.y, int(args.x))))
    return EXIT_OK


def cmd_correlate(args) -> int:
    f = _load_spec(args.spec)
    est = log_correlation(f, _angle(args.alpha), args.h, int(args.x))
    print(f"value {fmt_c(est.value)}")
    print(f"plain {fmt_c(est.plain)}")
    print(f"phase_form {fmt_c(est.phase_form)}")
    print(f"deviation {fmt(est.deviation)}")
    return EXIT_OK


def cmd_modified(args) -> int:
    chi = parse_character(args.char)
    if not args.eta:
        raise UsageError("modified needs at least one --eta")
    spec = ModifiedCharacterSpec(chi, tuple(_eta(e) for e in args.eta))
    alpha = _angle(args.alpha)
    ells = _ints(args.ells) if args.ells else []
    print("x A_recursive_re A_recursive_im A_expansion_re A_expansion_im deviation")
    for x in (_ints(args.xs) if args.xs else [10**2, 10**3, 10**4]):
        rec = A_recursive(spec, ells, x, alpha)
        exp = A_expansion(spec, ells, x, alpha)
        print(f"{x} {fmt_c(rec)} {fmt_c(exp)} {fmt(abs(rec - exp))}")
    if args.Br:
        b_ells = (list(ells) + [1] * spec.k)[: spec.k - 1]
        tail = B_r_tail_bound(spec, b_ells)
        print(f"# B_r with ells={tuple(b_ells)}, tail bound {fmt(tail)}")
        print("r abs_Br running_max anchor anchor_gap")
        best = 0.0
        for r in range(1, args.Br + 1):
            v = abs(B_r(spec, b_ells, r, alpha))
            best = max(best, v)
            anchor = B_r_anchor(spec, b_ells, r)
            gap = "skipped"
            if anchor <= args.anchor_limit:
                gap = fmt(abs(A_recursive(spec, b_ells, anchor, alpha) - B_r(spec, b_ells, r, alpha)))
            print(f"{r} {fmt(v)} {fmt(best)} {anchor} {gap}")
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.example == 1:
        if args.alpha is None:
            raise UsageError("example 1 needs --alpha")
        ex = construct_example1(_angle(args.alpha), args.k)
        spec = ex.spec
        print(f"primes {' '.join(map(str, ex.primes))}")
        for z in ex.zs:
            print(f"z {fmt_c(z)}")
        print(f"bound {fmt(ex.bound)}")
    else:
        ex = construct_example2(args.k)
        spec = ex.spec
        print(f"primes {' '.join(map(str, ex.primes))}")
        for z in ex.zs:
            print(f"z {fmt_c(z)}")
    if args.out:
        spec.save(args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    quick = args.suite == "quick"
    numbers = _ints(args.only) if args.only else sorted(acceptance.CRITERIA)
    unknown = [n for n in numbers if n not in acceptance.CRITERIA]
    if unknown:
        raise UsageError(f"unknown criteria {unknown}")
    results = fan_out(lambda n: acceptance.run_criterion(n, quick), numbers)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    return EXIT_ACCEPTANCE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="expsum", description="Exponential sums of multiplicative functions.")
    p.add_argument("--config", help="key=value file with default limits (also EXPSUM_CONFIG)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("characters", help="enumerate or inspect Dirichlet characters")
    c.add_argument("--modulus", type=int)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--inspect", metavar="M.I")
    c.set_defaults(func=cmd_characters)

    s = sub.add_parser("sum", help="partial-sum trajectory with running sup")
    s.add_argument("--spec", help="JSON spec file")
    s.add_argument("--char", metavar="M.I", help="character I mod M")
    s.add_argument("--eta", action="append", metavar="P=RE,IM", help="modify --char at prime P (repeatable)")
    s.add_argument("--alpha", action="append", required=True, help="a/q, decimal, or a named constant; repeat to fan out")
    s.add_argument("--t", type=float, default=0.0, help="twist n^{it}")
    s.add_argument("--limit", type=int, help="largest x (config key limit)")
    s.add_argument("--out", help="write CSV here plus a .json sidecar")
    s.set_defaults(func=cmd_sum)

    b = sub.add_parser("bounds", help="geometric and character-sum bounds")
    b.add_argument("--modulus", type=int, required=True)
    b.add_argument("--alpha", required=True)
    b.set_defaults(func=cmd_bounds)

    ga = sub.add_parser("gauss", help="closed form of P(e(a/m)) against brute force")
    ga.add_argument("--modulus", type=int, required=True)
    ga.add_argument("--char", type=int, required=True, help="index i of the character m.i")
    gg = ga.add_mutually_exclusive_group()
    gg.add_argument("--a", type=int)
    gg.add_argument("--all", action="store_true")
    ga.set_defaults(func=cmd_gauss)

    d = sub.add_parser("distance", help="pretentious distance")
    d.add_argument("--f", required=True, metavar="SPEC.json", help="spec file for f")
    d.add_argument("--g", metavar="SPEC.json", help="spec file for g (exactly one of --g, --twist)")
    d.add_argument("--twist", metavar="M.I,T", help="distance to chi(n) n^{iT} instead of g")
    d.add_argument("--x", type=int, help="upper prime cutoff (config key x)")
    d.add_argument("--y", type=int, default=1, help="lower prime cutoff")
    d.set_defaults(func=cmd_distance)

    co = sub.add_parser("correlate", help="logarithmic correlation, both forms")
    co.add_argument("--spec", required=True)
    co.add_argument("--alpha", required=True)
    co.add_argument("--h", type=int, required=True)
    co.add_argument("--x", type=int)
    co.set_defaults(func=cmd_correlate)

    mo = sub.add_parser("modified", help="A recursion and B_r diagnostics for a modified character")
    mo.add_argument("--char", required=True, metavar="M.I")
    mo.add_argument("--eta", action="append", metavar="P=RE,IM")
    mo.add_argument("--alpha", required=True)
    mo.add_argument("--ells", default="", help="comma-separated tuple, e.g. 1,2")
    mo.add_argument("--x", dest="xs", help="comma-separated x values for the A comparison")
    mo.add_argument("--Br", type=int, metavar="R", help="tabulate B_r for r <= R")
    mo.add_argument("--anchor-limit", type=int, default=10**6)
    mo.set_defaults(func=cmd_modified)

    cs = sub.add_parser("construct", help="emit one of the two counterexample specs")
    cs.add_argument("--example", type=int, choices=(1, 2), required=True)
    cs.add_argument("--k", type=int, required=True)
    cs.add_argument("--alpha", help="required for example 1")
    cs.add_argument("--out", help="also save the spec as JSON")
    cs.set_defaults(func=cmd_construct)

    st = sub.add_parser("selftest", help="run the acceptance criteria")
    st.add_argument("--suite", choices=("acceptance", "quick"), default="acceptance")
    st.add_argument("--only", help="comma-separated criterion numbers")
    st.set_defaults(func=cmd_selftest)
    return p


CONFIG_KEYS = {"limit": int, "x": int}


def _apply_config(args, config: Dict[str, str]) -> None:
    for key, value in config.items():
        if key == "threads":
            os.environ.setdefault("EXPSUM_THREADS", value)
        elif key in CONFIG_KEYS and getattr(args, key, "absent") is None:
            try:
                setattr(args, key, CONFIG_KEYS[key](value))
            except ValueError:
                raise UsageError(f"config {key}={value!r} is not an integer")


FALLBACKS = {"limit": 10**6, "x": 10**4}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        _apply_config(args, read_config(args.config or os.environ.get("EXPSUM_CONFIG")))
        for key, value in FALLBACKS.items():
            if getattr(args, key, "absent") is None:
                setattr(args, key, value)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, InvalidConfigError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
