"""Reference adapter: simulates a model file behind the adapter protocol.

    python -m ftskit.simulate MODEL [--formula F] [--seed N]

Reads ``I <input>``, ``?`` and ``R`` lines on stdin; answers every ``?``
with ``O <output>`` or ``Q``.  Nondeterminism is resolved by a seeded RNG.
Inputs the current state cannot take are ignored.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .feature_logic import TRUE, parse_formula
from .model import TAU
from .modelfile import load_model
from .projection import project


def serve(spec, rng: random.Random, stdin=sys.stdin, stdout=sys.stdout) -> None:
    succ = spec.succ
    state = spec.initial
    for line in stdin:
        cmd = line.strip()
        if cmd == "R":
            state = spec.initial
        elif cmd.startswith("I "):
            dsts = succ.get(state, {}).get(cmd[2:].strip())
            if dsts:
                state = rng.choice(dsts)
        elif cmd == "?":
            reply = "Q"
            for _ in range(1000):  # bounded tau walk
                moves = [(a, d) for a, ds in sorted(succ.get(state, {}).items())
                         if a == TAU or a in spec.outputs for d in ds]
                if not moves:
                    break
                a, state = rng.choice(moves)
                if a != TAU:
                    reply = f"O {a}"
                    break
            stdout.write(reply + "\n")
            stdout.flush()
        elif cmd:
            print(f"unknown command {cmd!r}", file=sys.stderr)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="ftskit-simulate")
    p.add_argument("model")
    p.add_argument("--formula")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    m = load_model(Path(args.model).read_text(encoding="utf-8"))
    phi = parse_formula(args.formula, m.features) if args.formula else TRUE
    serve(project(m, phi), random.Random(args.seed))
    return 0


if __name__ == "__main__":
    sys.exit(main())
