"""Shared diagrams for tests: named surfaces and seeded random composites."""

import random

from toricnet import surface as sm
from toricnet.surface import Circle, Piece, WiringDiagram


def random_composite(rng: random.Random, max_pieces: int = 6, max_inputs: int = 2) -> WiringDiagram:
    """Stack random pieces on top of a row of open circles; leftover circles become outputs."""
    n_in = rng.randint(0, max_inputs)
    inputs = [f"i{k}" for k in range(n_in)]
    row = list(inputs)
    internal, pieces = [], []
    counter = 0

    def new():
        nonlocal counter
        counter += 1
        internal.append(f"c{counter}")
        return f"c{counter}"

    for k in range(rng.randint(1, max_pieces)):
        options = ["cap"]
        if row:
            options += ["cup", "cylinder", "pants"]
        if len(row) >= 2:
            options += ["copants", "copants"]
        kind = rng.choice(options)
        pid = f"X{k}"
        if kind == "cap":
            c = new()
            pieces.append(Piece(pid, "cap", (c,)))
            row.insert(rng.randint(0, len(row)), c)
        elif kind == "cup":
            c = row.pop(rng.randrange(len(row)))
            pieces.append(Piece(pid, "cup", (c,)))
        elif kind == "cylinder":
            j = rng.randrange(len(row))
            c = new()
            pieces.append(Piece(pid, "cylinder", (row[j], c)))
            row[j] = c
        elif kind == "pants":
            j = rng.randrange(len(row))
            l, r = new(), new()
            pieces.append(Piece(pid, "pants", (row[j], l, r)))
            row[j:j + 1] = [l, r]
        else:
            j = rng.randrange(len(row) - 1)
            b = new()
            pieces.append(Piece(pid, "copants", (row[j], row[j + 1], b)))
            row[j:j + 2] = [b]
    outs = set(row)
    circles = [Circle(c, "in", k) for k, c in enumerate(inputs)]
    circles += [Circle(c, "internal") for c in internal if c not in outs]
    circles += [Circle(c, "out", k) for k, c in enumerate(row)]
    # an input passed straight through would be both input and output; avoid it
    if set(inputs) & outs:
        return random_composite(rng, max_pieces, max_inputs)
    return sm.check(WiringDiagram.build(circles, pieces))


def random_composites(count: int, seed: int = 2024, max_pieces: int = 6) -> list[WiringDiagram]:
    rng = random.Random(seed)
    return [random_composite(rng, max_pieces) for _ in range(count)]


def named_corpus() -> dict[str, WiringDiagram]:
    out = {
        "sphere": sm.sphere(),
        "cylinder": sm.cylinder(),
        "pants": sm.pants(),
        "torus": sm.torus(),
        "tube": sm.tube(),
        "theta": sm.theta_genus2(),
    }
    for g, n in [(0, 3), (1, 1), (1, 3), (2, 0), (2, 2)]:
        out[f"surface{g}{n}"] = sm.surface(g, n)
    for k, d in enumerate(random_composites(8, seed=99)):
        out[f"random{k}"] = d
    return out
