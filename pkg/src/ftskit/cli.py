"""ftskit command line.

Exit codes: 0 success or pass, 1 fail verdict or not orthogonal,
2 usage error, 3 invalid model or formula.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .dot import format_test_case, suite_to_dot
from .execution import ModelPort, ProcessAdapter, run_online, run_suite
from .feature_logic import TRUE, FormulaError, parse_formula
from .model import ModelError, format_trace, validate
from .modelfile import load_model
from .orthogonality import check_orthogonal
from .projection import format_spec, project
from .spinal import NotValidProduct, build_spinal
from .suite import Verdict, build_suite, iter_test_cases

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class InvalidInput(Exception):
    pass


def _read_model(path: str, check: bool = True):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"{path}: {exc.strerror}") from None
    try:
        return load_model(text, validate=check)
    except ModelError as exc:
        raise InvalidInput(f"{path}: {exc}") from None


def _formula(text: str | None, m):
    if text is None:
        return TRUE
    try:
        return parse_formula(text, m.features)
    except FormulaError as exc:
        raise InvalidInput(f"formula {text!r}: {exc}") from None


def _product(m, name: str):
    try:
        return m.product(name)
    except KeyError:
        raise InvalidInput(f"{m.name} has no product {name!r}") from None


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _target_name(t) -> str:
    if isinstance(t, Verdict):
        return t.value
    return "{" + ",".join(sorted(t.states)) + "}"


def cmd_validate(args) -> int:
    m = _read_model(args.model, check=False)
    diags = validate(m)
    for d in diags:
        print(d)
    if diags:
        return EXIT_INVALID
    print(f"{m.name}: ok ({len(m.states)} states, {len(m.transitions)} transitions, "
          f"{len(m.products)} products)")
    return EXIT_OK


def cmd_project(args) -> int:
    m = _read_model(args.model)
    sys.stdout.write(format_spec(project(m, _formula(args.formula, m))))
    return EXIT_OK


def cmd_suite(args) -> int:
    m = _read_model(args.model)
    suite = build_suite(project(m, _formula(args.formula, m)), args.depth)
    for st in suite.inner_states():
        print(st.label())
        for a, targets in sorted(suite.edges[st].items()):
            names = [_target_name(t) for t in targets]
            print(f"  {a} -> {' '.join(names)}")
    _write(args.dot, suite_to_dot(suite))
    return EXIT_OK


def cmd_testcases(args) -> int:
    m = _read_model(args.model)
    suite = build_suite(project(m, _formula(args.formula, m)), args.depth)
    n = 0
    for case in iter_test_cases(suite):
        if args.limit is not None and n >= args.limit:
            print(f"# stopped after {args.limit} test cases")
            break
        print(f"# test case {n}")
        sys.stdout.write(format_test_case(case, suite.inputs))
        n += 1
    return EXIT_OK


def cmd_spinal(args) -> int:
    m = _read_model(args.model)
    spec = project(m, _formula(args.formula, m))
    product = _product(m, args.product)
    try:
        sp = build_spinal(build_suite(spec, args.depth), product)
    except NotValidProduct as exc:
        raise InvalidInput(str(exc)) from None
    print(f"# spinal suite w.r.t. {product.name}; remaining products: "
          f"{' '.join(p.name for p in sp.products) or '-'}")
    for st in sp.inner_states():
        kind = "spine" if st in sp.spines else "new"
        print(f"{st.label()}  [{kind}]")
        for a, targets in sorted(sp.edges[st].items()):
            names = [_target_name(t) for t in targets]
            print(f"  {a} -> {' '.join(names)}")
    _write(args.dot, suite_to_dot(sp, "spinal"))
    return EXIT_OK


def cmd_run(args) -> int:
    m = _read_model(args.model)
    suite = build_suite(project(m, _formula(args.formula, m)), args.depth)
    if args.adapter:
        if not args.adapter.startswith("exec:"):
            raise InvalidInput("adapter must be given as exec:<command>")
        with ProcessAdapter(args.adapter[len("exec:"):]) as adapter:
            result = run_online(suite, adapter, runs=args.runs, seed=args.seed)
    else:
        impl_model = _read_model(args.impl)
        impl = project(impl_model, _formula(args.impl_formula, impl_model))
        result = run_suite(suite, ModelPort(impl, complete_inputs=args.assume_input_enabled))
    print(f"verdict: {result.verdict.value}")
    for tr in result.failing_traces:
        print(f"failing trace: {format_trace(tr)}")
    print(f"explored: {result.explored}")
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_orthogonal(args) -> int:
    m = _read_model(args.model)
    spec = project(m, _formula(args.formula, m))
    product = _product(m, args.product)
    impl_model = _read_model(args.impl)
    impl = project(impl_model, _formula(args.impl_formula, impl_model))
    try:
        report = check_orthogonal(impl, spec, product, args.depth)
    except NotValidProduct as exc:
        raise InvalidInput(str(exc)) from None
    if report.orthogonal:
        print(f"orthogonal (depth {report.searched_depth}, {report.obligations} obligations)")
        return EXIT_OK
    w = report.witness
    print(f"not orthogonal (depth {report.searched_depth})")
    print(f"sigma': {format_trace(w.sigma_prime)}")
    print(f"new action: {w.action}")
    print(f"sigma'': {format_trace(w.sigma_double_prime)}")
    return EXIT_FAIL


def cmd_verify(args) -> int:
    depths = sorted({3, args.depth})
    reports = [
        harness.conformance_campaign(args.seed, args.cases, depths),
        harness.lemma_campaign(args.seed, args.cases, args.depth),
        harness.theorem_campaign(args.seed, args.cases, args.depth),
    ]
    bad = []
    for r in reports:
        print(r.summary())
        bad += [(r.name, c) for c in r.counterexamples]
    if bad and args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        manifest = []
        for i, (prop, bundle) in enumerate(bad):
            model_file = out / f"cex{i:03d}.iofts"
            model_file.write_text(bundle.pop("model"), encoding="utf-8")
            if "impl" in bundle:
                (out / f"cex{i:03d}.impl.txt").write_text(bundle.pop("impl"), encoding="utf-8")
            manifest.append({"property": prop, "model": model_file.name, **bundle})
        (out / "manifest.json").write_text(
            json.dumps({"seed": args.seed, "cases": args.cases, "depth": args.depth,
                        "counterexamples": manifest}, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {len(bad)} counterexample bundle(s) to {out}")
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftskit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def depth(p, required=True):
        p.add_argument("--depth", "-k", type=int, required=required, default=None if required else 5)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("project", help="print the projection by a feature constraint")
    p.add_argument("model")
    p.add_argument("--formula", "-f")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("suite", help="build a depth-bounded test suite")
    p.add_argument("model")
    p.add_argument("--formula", "-f")
    depth(p)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("testcases", help="list test cases extracted from a suite")
    p.add_argument("model")
    p.add_argument("--formula", "-f")
    depth(p)
    p.add_argument("--limit", type=int, default=20)
    p.set_defaults(func=cmd_testcases)

    p = sub.add_parser("spinal", help="build the spinal suite for a tested product")
    p.add_argument("model")
    p.add_argument("--formula", "-f")
    p.add_argument("--product", "-p", required=True)
    depth(p)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_spinal)

    p = sub.add_parser("run", help="run a suite against an implementation")
    p.add_argument("model")
    p.add_argument("--formula", "-f")
    impl = p.add_mutually_exclusive_group(required=True)
    impl.add_argument("--impl")
    impl.add_argument("--adapter", help="exec:<command> speaking the adapter protocol")
    p.add_argument("--impl-formula")
    depth(p)
    p.add_argument("--assume-input-enabled", action="store_true",
                   help="treat missing implementation inputs as self-loops")
    p.add_argument("--runs", type=int, default=200, help="online runs (adapter only)")
    p.add_argument("--seed", type=int, default=0, help="online run seed (adapter only)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("orthogonal", help="check orthogonality of an implementation")
    p.add_argument("model")
    p.add_argument("--formula", "-f")
    p.add_argument("--product", "-p", required=True)
    p.add_argument("--impl", required=True)
    p.add_argument("--impl-formula")
    depth(p)
    p.set_defaults(func=cmd_orthogonal)

    p = sub.add_parser("verify", help="randomized lemma/theorem falsification")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    depth(p, required=False)
    p.add_argument("--out", help="directory for counterexample bundles")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "depth", None) is not None and args.depth < 0:
        parser.error("--depth must be non-negative")
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
