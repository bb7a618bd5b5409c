"""Independent reference computations used as test oracles."""
from pathlib import Path

from ftskit.model import TAU

MODELS = Path(__file__).resolve().parent.parent / "models"


def naive_steps(sys, start, trace):
    """Worklist over (state, position) pairs following the three reachability
    rules directly; independent of the set-based implementation."""
    succ = sys.succ
    seen = {(s, 0) for s in start}
    todo = list(seen)
    while todo:
        s, i = todo.pop()
        nxt = [(d, i) for d in succ.get(s, {}).get(TAU, ())]
        if i < len(trace):
            nxt += [(d, i + 1) for d in succ.get(s, {}).get(trace[i], ())]
        for pair in nxt:
            if pair not in seen:
                seen.add(pair)
                todo.append(pair)
    return frozenset(s for s, i in seen if i == len(trace))


def alphabet(sys):
    return sorted({a for m in sys.succ.values() for a in m} - {TAU})
