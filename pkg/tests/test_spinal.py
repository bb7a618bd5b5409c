import pytest
from hypothesis import given, settings, strategies as st

from ftskit.execution import passes
from ftskit.feature_logic import ProductConfig
from ftskit.harness import random_case
from ftskit.model import DELTA
from ftskit.projection import project
from ftskit.spinal import (
    NotValidProduct,
    Novelty,
    bt_holds,
    build_spinal,
    is_new,
    is_spine,
    is_subsequence,
    spines_of,
)
from ftskit.suite import FAIL, PASS, Inner, Verdict, build_suite


def T(text=""):
    return tuple(text.split())


@pytest.fixture(scope="module")
def suite5(spec_cc):
    return build_suite(spec_cc, 5)


@pytest.fixture(scope="module")
def spinal5(suite5, l1):
    return build_spinal(suite5, l1)


def test_bt(suite5):
    assert bt_holds(suite5, T())
    assert bt_holds(suite5, T("on"))
    assert bt_holds(suite5, T("on det"))
    assert not bt_holds(suite5, T("on off on"))
    assert not bt_holds(suite5, T("delta"))


def test_spine_relation(suite5):
    assert is_spine(suite5, T("on"), T("on off on"))
    assert not is_spine(suite5, T("on off on"), T("on off on"))
    assert not is_spine(suite5, T(), T("on off on"))
    assert spines_of(suite5, T("on off on")) == [T("on")]
    assert spines_of(suite5, T("on rgl rgl")) == [T("on")]
    assert spines_of(suite5, T()) == [T()]


def test_subsequence():
    assert is_subsequence(T("on"), T("on off on"))
    assert is_subsequence(T(), T("a"))
    assert not is_subsequence(T("off on on"), T("on off on"))


def test_unknown_trace(suite5):
    with pytest.raises(KeyError):
        bt_holds(suite5, T("off"))


def test_new(spec_cc, l1):
    assert is_new(spec_cc, l1, T("on"), "det")
    assert not is_new(spec_cc, l1, T(), "on")
    assert not is_new(spec_cc, l1, T("on"), "off")
    # on.det is not a trace of l1, so nothing after it is new
    assert not is_new(spec_cc, l1, T("on det"), "srgl")
    assert not Novelty(spec_cc, l1).in_product(T("on det"))


def test_invalid_product(cruise, basic, spec_cc, l2):
    with pytest.raises(NotValidProduct):
        build_spinal(build_suite(basic, 3), l2)
    stranger = ProductConfig.of("l9", {"cc": True, "cac": False})
    with pytest.raises(NotValidProduct):
        build_spinal(build_suite(spec_cc, 3), stranger)


def test_spinal_fragment(spinal5, l1, l2):
    root = spinal5.edges[spinal5.root]
    assert root[DELTA] == (PASS,)
    assert root["rgl"] == (FAIL,) and root["srgl"] == (FAIL,)
    assert T("delta") not in spinal5.nodes
    assert T("on rgl") not in spinal5.nodes
    # on.off revisits {s0}
    assert T("on off") not in spinal5.nodes
    after_det = spinal5.nodes[T("on det")]
    assert after_det in spinal5.continuations
    assert spinal5.child(after_det, "srgl") == Inner(frozenset({"s2"}), T("on det srgl"))
    assert spinal5.child(after_det, "nor") == Inner(frozenset({"s1"}), T("on det nor"))
    assert spinal5.base_product == l1 and spinal5.products == (l2,)


def test_spine_states(spinal5):
    assert {s.trace for s in spinal5.spines} == {T(), T("on")}


def _check_structure(suite, sp):
    assert set(sp.nodes.items()) <= set(suite.nodes.items())
    assert sp.root == suite.root
    for st, edges in sp.edges.items():
        base = suite.edges[st]
        for a, ts in base.items():
            verdicts = tuple(t for t in ts if isinstance(t, Verdict))
            kept = edges.get(a, ())
            assert set(kept) <= set(ts)
            assert verdicts == tuple(t for t in kept if isinstance(t, Verdict))
        if st in sp.continuations:
            # everything below a new action survives
            for ts in base.values():
                assert all(t in sp.edges for t in ts if isinstance(t, Inner))
    reached, todo = {sp.root}, [sp.root]
    while todo:
        for ts in sp.edges[todo.pop()].values():
            for t in ts:
                if isinstance(t, Inner) and t not in reached:
                    reached.add(t)
                    todo.append(t)
    assert reached == set(sp.edges)


def test_structure_on_fixture(suite5, spinal5):
    _check_structure(suite5, spinal5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 4))
def test_structure_on_random_models(seed, k):
    m, phi, product, _ = random_case(seed, 0)
    suite = build_suite(project(m, phi), k)
    _check_structure(suite, build_spinal(suite, product))


def test_blind_spot_shallow(spec_cc, l1, faulty):
    for k in range(6):
        assert passes(faulty, build_spinal(build_suite(spec_cc, k), l1))
