"""Line-oriented text format for IOFTS models.

::

    iofts cruise
    features cc cac
    inputs on off det nor
    outputs rgl srgl
    initial s0
    trans s0 ?on  s1 [cc]
    trans s1 !rgl s1 [cc]
    product l1 cc=1 cac=0

``#`` starts a comment.  ``states`` is optional; without it the states are
the initial state followed by transition endpoints in order of appearance.
"""
from __future__ import annotations

from .feature_logic import TRUE, FormulaError, ProductConfig, format_formula, parse_formula
from .model import DELTA, TAU, GuardedTransition, Iofts, ModelError, check

_BOOL = {"1": True, "0": False, "true": True, "false": False}


class ParseError(ModelError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def load_model(text: str, *, validate: bool = True) -> Iofts:
    """Parse model text; the result is validated unless ``validate=False``."""
    name = None
    features: list[str] | None = None
    inputs: list[str] = []
    outputs: list[str] = []
    states: list[str] | None = None
    initial = None
    raw_trans: list[tuple[int, str, str, str, str]] = []
    raw_products: list[tuple[int, str, list[str]]] = []

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        words = rest.split()
        if head == "iofts":
            if len(words) != 1:
                raise ParseError(lineno, "expected 'iofts <name>'")
            name = words[0]
        elif head == "features":
            features = (features or []) + words
        elif head == "inputs":
            inputs += words
        elif head == "outputs":
            outputs += words
        elif head == "states":
            states = (states or []) + words
        elif head == "initial":
            if len(words) != 1:
                raise ParseError(lineno, "expected 'initial <state>'")
            initial = words[0]
        elif head == "trans":
            parts = rest.strip().split(None, 3)
            if len(parts) < 3:
                raise ParseError(lineno, "expected 'trans <src> <action> <dst> [guard]'")
            guard = parts[3].strip() if len(parts) == 4 else "[true]"
            if not (guard.startswith("[") and guard.endswith("]")):
                raise ParseError(lineno, f"guard must be written in brackets, got {guard!r}")
            raw_trans.append((lineno, parts[0], parts[1], parts[2], guard[1:-1]))
        elif head == "product":
            if not words:
                raise ParseError(lineno, "expected 'product <name> f=0|1 ...'")
            raw_products.append((lineno, words[0], words[1:]))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    if name is None:
        raise ParseError(1, "missing 'iofts <name>' header")
    if initial is None:
        raise ParseError(1, "missing 'initial <state>' line")
    features = features or []

    transitions = []
    inferred = [initial]
    for lineno, src, tok, dst, guard_text in raw_trans:
        if tok == DELTA or tok[1:] == DELTA:
            raise ParseError(lineno, "delta is synthesized by projection and may not appear in models")
        if tok == TAU:
            action = TAU
        elif tok[:1] in "?!" and len(tok) > 1:
            action = tok[1:]
            declared = inputs if tok[0] == "?" else outputs
            if action not in declared:
                kind = "input" if tok[0] == "?" else "output"
                raise ParseError(lineno, f"action {action!r} is not a declared {kind}")
        else:
            raise ParseError(lineno, f"action {tok!r} needs a '?' or '!' prefix (or be 'tau')")
        try:
            guard = parse_formula(guard_text, features) if guard_text.strip() else TRUE
        except FormulaError as exc:
            raise ParseError(lineno, f"guard: {exc}") from None
        transitions.append(GuardedTransition(src, action, guard, dst))
        inferred += [src, dst]

    products = []
    for lineno, pname, assigns in raw_products:
        values = {}
        for a in assigns:
            f, eq, v = a.partition("=")
            if not eq or v not in _BOOL:
                raise ParseError(lineno, f"bad assignment {a!r}; expected feature=0|1")
            if f in values:
                raise ParseError(lineno, f"feature {f!r} assigned twice")
            values[f] = _BOOL[v]
        products.append(ProductConfig.of(pname, values))

    if states is None:
        states = list(dict.fromkeys(inferred))
    m = Iofts(
        name=name,
        states=tuple(states),
        initial=initial,
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        features=tuple(features),
        transitions=tuple(transitions),
        products=tuple(products),
    )
    return check(m) if validate else m


def format_action(m: Iofts, action: str) -> str:
    if action in (TAU, DELTA):
        return action
    return ("?" if action in m.inputs else "!") + action


def dump_transition(m: Iofts, t: GuardedTransition) -> str:
    return f"trans {t.src} {format_action(m, t.action)} {t.dst} [{format_formula(t.guard)}]"


def dump_product(m: Iofts, p: ProductConfig) -> str:
    values = p.as_dict()
    order = list(m.features) + sorted(set(values) - set(m.features))
    return " ".join(["product", p.name] + [f"{f}={int(values[f])}" for f in order if f in values])


def dump_model(m: Iofts) -> str:
    lines = [
        f"iofts {m.name}",
        " ".join(["features", *m.features]),
        " ".join(["inputs", *m.inputs]),
        " ".join(["outputs", *m.outputs]),
        " ".join(["states", *m.states]),
        f"initial {m.initial}",
    ]
    lines += [dump_transition(m, t) for t in m.transitions]
    lines += [dump_product(m, p) for p in m.products]
    return "\n".join(lines) + "\n"
