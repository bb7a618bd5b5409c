"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see conftest.py) and when the module is run directly.
"""
import sys

from ftskit.execution import run_suite
from ftskit.feature_logic import And, equivalent_over, parse_formula
from ftskit.harness import (
    GenParams,
    check_lemma_spine_fail,
    check_theorem_incremental,
    conformance_campaign,
    lemma_campaign,
    random_iofts,
    theorem_campaign,
)
from ftskit.model import DELTA
from ftskit.modelfile import load_model
from ftskit.orthogonality import Witness, check_orthogonal
from ftskit.projection import derive_product, project
from ftskit.spinal import bt_holds, build_spinal, is_spine, is_subsequence
from ftskit.suite import FAIL, PASS, Inner, build_suite

from .oracles import MODELS, naive_steps

RESULTS: dict[int, str] = {}
SEED = 0


def record(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS[n] = line
    print(line)
    assert ok, line


def T(text=""):
    return tuple(text.split())


def I(states, trace=""):
    return Inner(frozenset(states.split()), T(trace))


def _fixtures():
    cruise = load_model((MODELS / "cruise.iofts").read_text())
    faulty = load_model((MODELS / "faulty.iofts").read_text())
    return cruise, faulty


def test_criterion_01_projection_fidelity():
    cruise, _ = _fixtures()
    phi = parse_formula("cc & !cac", cruise.features)
    spec = project(cruise, phi)
    base = {(t.src, t.action, t.dst): t.guard for t in cruise.transitions}
    acts = [t for t in spec.transitions if t.action != DELTA]
    deltas = [t for t in spec.transitions if t.action == DELTA]
    ok = (
        set(spec.states) == {"s0", "s1"}
        and len(spec.transitions) == 4
        and sorted(t.action for t in acts) == ["off", "on", "rgl"]
        and all(t.guard == And(phi, base[(t.src, t.action, t.dst)]) for t in acts)
        and [(t.src, t.dst) for t in deltas] == [("s0", "s0")]
        and equivalent_over(deltas[0].guard, phi, cruise.products)
    )
    record(1, "projection fidelity", ok,
           f"{len(spec.states)} states, {len(spec.transitions)} transitions, "
           f"delta at {spec.delta_states()}")


def test_criterion_02_suite_fidelity():
    cruise, _ = _fixtures()
    suite = build_suite(project(cruise, parse_formula("cc")), 5)
    expected = {
        "": "s0", "on": "s1", "on rgl": "s1", "on off": "s0", "on det": "s2",
        "on off on": "s1", "on off on det": "s2",
    }
    missing = [tr or "ε" for tr, xs in expected.items() if suite.nodes.get(T(tr)) != I(xs, tr)]
    after_on = I("s1", "on")
    ok = (
        not missing
        and suite.targets(suite.root, "rgl") == (FAIL,)
        and suite.targets(suite.root, "srgl") == (FAIL,)
        and suite.targets(after_on, DELTA) == (FAIL,)
        and suite.targets(after_on, "srgl") == (FAIL,)
    )
    record(2, "suite fidelity", ok, f"missing: {missing}" if missing else f"{len(suite.nodes)} inner states")


def test_criterion_03_fault_detection():
    cruise, faulty = _fixtures()
    suite = build_suite(project(cruise, parse_formula("cc")), 5)
    result = run_suite(suite, project(faulty, parse_formula("true")))
    ok = result.verdict is FAIL and T("on off on det rgl") in result.failing_traces
    record(3, "fault detection", ok, f"verdict {result.verdict.value}, "
           f"{len(result.failing_traces)} failing trace(s)")


def test_criterion_04_spinal_blind_spot():
    cruise, faulty = _fixtures()
    spec = project(cruise, parse_formula("cc"))
    impl = project(faulty, parse_formula("true"))
    l1 = cruise.product("l1")
    failing_depths, off_depths = [], []
    first_trace = None
    for k in range(9):
        spinal = build_spinal(build_suite(spec, k), l1)
        result = run_suite(spinal, impl)
        if not result.passed:
            failing_depths.append(k)
            first_trace = first_trace or result.failing_traces[0]
        if any("off" in edges for edges in spinal.edges.values()):
            off_depths.append(k)
    ok = not failing_depths and not off_depths
    detail = (f"fails at depths {failing_depths}"
              + (f" via {' '.join(first_trace)}" if first_trace else "")
              + f"; off edges at depths {off_depths}")
    record(4, "spinal blind spot", ok, detail)


def test_criterion_05_spinal_structure():
    cruise, _ = _fixtures()
    suite = build_suite(project(cruise, parse_formula("cc")), 5)
    sp = build_spinal(suite, cruise.product("l1"))
    after_det = sp.nodes.get(T("on det"))
    ok = (
        sp.edges[sp.root].get(DELTA) == (PASS,)
        and T("on rgl") not in sp.nodes
        and T("delta") not in sp.nodes
        and after_det is not None
        and sp.child(after_det, "srgl") == I("s2", "on det srgl")
        and sp.child(after_det, "nor") == I("s1", "on det nor")
    )
    record(5, "spinal structure", ok, f"{len(sp.nodes)} of {len(suite.nodes)} inner states kept")


def test_criterion_06_orthogonality_counterexample():
    cruise, faulty = _fixtures()
    report = check_orthogonal(project(faulty, parse_formula("true")),
                              project(cruise, parse_formula("cc")), cruise.product("l1"), 5)
    ok = not report.orthogonal and report.witness == Witness(T("on off on"), "det", T("rgl"))
    record(6, "orthogonality counterexample", ok, f"witness {report.witness}")


def test_criterion_07_spine_unit_facts():
    cruise, _ = _fixtures()
    suite = build_suite(project(cruise, parse_formula("cc")), 5)
    ok = (
        bt_holds(suite, T("on")) is True
        and bt_holds(suite, T()) is True
        and is_subsequence(T("on"), T("on off on")) is True
        and is_spine(suite, T("on"), T("on off on")) is True
    )
    record(7, "spine unit facts", ok)


def test_criterion_08_product_conformance():
    cruise, _ = _fixtures()
    bad = []
    runs = 0
    for text in ("true", "cc", "cc & !cac", "cc & cac"):
        spec = project(cruise, parse_formula(text))
        for k in (3, 5):
            suite = build_suite(spec, k)
            for p in spec.products:
                runs += 1
                if not run_suite(suite, derive_product(cruise, p)).passed:
                    bad.append((text, k, p.name))
    report = conformance_campaign(SEED, 100, depths=(3, 5))
    ok = not bad and report.ok and report.cases_run > 0
    record(8, "product conformance", ok,
           f"fixture {runs} runs, {len(bad)} bad; random {report.summary()}")


def test_criterion_09_spine_lemma():
    cruise, _ = _fixtures()
    suite = build_suite(project(cruise, parse_formula("cc")), 5)
    fixture = check_lemma_spine_fail(suite, cruise.product("l1"))
    fixture.merge(check_lemma_spine_fail(suite, cruise.product("l2")))
    report = lemma_campaign(SEED, 200, k=5)
    ok = fixture.ok and fixture.cases_applicable > 0 and report.ok
    record(9, "spine lemma", ok,
           f"fixture {fixture.cases_applicable} applicable; random {report.summary()}")


def test_criterion_10_incremental_theorem():
    cruise, faulty = _fixtures()
    report = theorem_campaign(SEED, 200, k=5)
    faulty_case = check_theorem_incremental(project(cruise, parse_formula("cc")), cruise.product("l1"),
                                     project(faulty, parse_formula("true")), 5)
    n = faulty_case.notes
    ok = (
        report.ok and report.cases_applicable > 0
        and faulty_case.cases_applicable == 0 and not n["orthogonal"]
        and n["passes_spinal"] and not n["passes_full"]
    )
    record(10, "incremental theorem", ok,
           f"random {report.summary()}; faulty case: orthogonal={n['orthogonal']}, "
           f"passes_spinal={n['passes_spinal']}, passes_full={n['passes_full']}")


def test_criterion_11_oracle_equivalence():
    cruise, faulty = _fixtures()
    specs = [project(cruise, parse_formula(t)) for t in ("true", "cc", "cc & !cac", "cc & cac")]
    specs.append(project(faulty, parse_formula("true")))
    specs += [project(random_iofts(GenParams(seed=SEED * 1000 + i, p_tau=0.15)), parse_formula("true"))
              for i in range(50)]
    checked, mismatches = 0, 0
    for spec in specs:
        suite = build_suite(spec, 5)
        for sigma, st in suite.nodes.items():
            checked += 1
            if st.states != naive_steps(spec, [spec.initial], sigma):
                mismatches += 1
    record(11, "oracle equivalence", mismatches == 0,
           f"{checked} inner states over {len(specs)} models, {mismatches} mismatch(es)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
