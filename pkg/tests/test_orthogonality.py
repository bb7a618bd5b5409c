import itertools

from hypothesis import given, settings, strategies as st

from ftskit.feature_logic import evaluate
from ftskit.harness import mutate_impl, random_case
from ftskit.model import is_strace
from ftskit.orthogonality import Witness, check_orthogonal, impl_traces
from ftskit.projection import derive_product, project

from .oracles import alphabet, naive_steps


def T(text=""):
    return tuple(text.split())


def test_faulty_witness(spec_cc, l1, faulty):
    report = check_orthogonal(faulty, spec_cc, l1, 5)
    assert not report.orthogonal
    assert report.witness == Witness(T("on off on"), "det", T("rgl"))
    assert report.witness.trace == T("on off on det rgl")
    assert str(report.witness) == "on off on | det | rgl"


def test_witness_replays(spec_cc, l1, faulty):
    w = check_orthogonal(faulty, spec_cc, l1, 5).witness
    assert naive_steps(faulty, [faulty.initial], w.trace)
    # the spine on cannot continue with det rgl in the faulty implementation
    assert not naive_steps(faulty, [faulty.initial], T("on det rgl"))


def test_correct_product_is_orthogonal(cruise, spec_cc, l1, l2):
    report = check_orthogonal(derive_product(cruise, l2), spec_cc, l1, 6)
    assert report.orthogonal and report.obligations > 0
    # l1 itself never takes a new action, so there is nothing to discharge
    vacuous = check_orthogonal(derive_product(cruise, l1), spec_cc, l1, 6)
    assert vacuous.orthogonal and vacuous.obligations == 0


def test_anti_monotone_in_depth(spec_cc, l1, faulty):
    flags = [check_orthogonal(faulty, spec_cc, l1, k).orthogonal for k in range(8)]
    assert flags == sorted(flags, reverse=True)
    assert flags[4] and not flags[5]


def test_impl_traces(faulty):
    traces = impl_traces(faulty, 3)
    assert traces[T("on off on")] == frozenset({"q3"})
    assert T("off") not in traces


def brute_orthogonal(impl, spec, product, k):
    spec_traces = {}
    for n in range(k + 1):
        for tr in itertools.product(alphabet(spec), repeat=n):
            xs = naive_steps(spec, [spec.initial], tr)
            if xs:
                spec_traces[tr] = xs

    def bt(tr):
        xs = [spec_traces[tr[:i]] for i in range(len(tr) + 1)]
        return len(set(xs)) == len(xs)

    def sub(a, b):
        it = iter(b)
        return all(x in it for x in a)

    lam = derive_product(spec.base, product)
    acts = alphabet(impl)
    itraces = {tr for n in range(k + 1) for tr in itertools.product(acts, repeat=n)
               if naive_steps(impl, [impl.initial], tr)}
    for tr in itraces:
        for i, a in enumerate(tr):
            sp, rest = tr[:i], tr[i + 1:]
            if sp not in spec_traces or not is_strace(lam, sp):
                continue
            new = any(b == a and not evaluate(g, product)
                      for s in spec_traces[sp] for b, g in spec.guards.get(s, ()))
            if not new:
                continue
            spines = [s for s in spec_traces if spec_traces[s] == spec_traces[sp]
                      and sub(s, sp) and bt(s)]
            if not any(s + (a,) + rest in itraces for s in spines):
                return False
    return True


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 3))
def test_matches_brute_force(seed, k):
    m, phi, product, cs = random_case(seed, 0)
    spec = project(m, phi)
    impl = mutate_impl(spec, cs)
    assert check_orthogonal(impl, spec, product, k).orthogonal == brute_orthogonal(impl, spec, product, k)


def test_fixture_matches_brute_force(spec_cc, l1, faulty):
    for k in range(6):
        assert check_orthogonal(faulty, spec_cc, l1, k).orthogonal == brute_orthogonal(faulty, spec_cc, l1, k)
