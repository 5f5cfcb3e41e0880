"""Surfaces as wiring diagrams of elementary cobordisms, and their mod-2 homology.

A diagram is a set of pieces (cup, cap, cylinder, pants, copants) whose
ports are wired to circles.  Internal circles touch two ports, external
circles one.  Homology classes are stored as a pair: per-circle crossing
parities (which wiring-graph cycle, or which boundary arcs, the class runs
along) and a loop vector over the circles modulo the per-piece relations.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from . import gf2

PORTS = {
    "cup": ("circle",),
    "cap": ("circle",),
    "cylinder": ("top", "bottom"),
    "pants": ("belt", "left", "right"),
    "copants": ("left", "right", "belt"),
}
# ports read as inputs (upper boundary) for each kind
INPUT_PORTS = {
    "cup": (0,),
    "cap": (),
    "cylinder": (0,),
    "pants": (0,),
    "copants": (0, 1),
}
EULER = {"cup": 1, "cap": 1, "cylinder": 0, "pants": -1, "copants": -1}
DISKS = ("cup", "cap")


class DiagramError(ValueError):
    pass


class DiagramParseError(DiagramError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Circle:
    id: str
    role: str  # "in", "out" or "internal"
    index: int = -1

    @property
    def external(self) -> bool:
        return self.role != "internal"


@dataclass(frozen=True)
class Piece:
    id: str
    kind: str
    ports: tuple[str, ...]

    def port(self, name: str) -> str:
        return self.ports[PORTS[self.kind].index(name)]


@dataclass(frozen=True)
class WiringDiagram:
    circles: Mapping[str, Circle]
    pieces: Mapping[str, Piece]

    @classmethod
    def build(cls, circles: Iterable[Circle], pieces: Iterable[Piece]) -> "WiringDiagram":
        return cls({c.id: c for c in circles}, {p.id: p for p in pieces})

    @cached_property
    def order(self) -> tuple[str, ...]:
        return tuple(sorted(self.circles))

    @cached_property
    def position(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.order)}

    @cached_property
    def attachments(self) -> dict[str, list[tuple[str, int]]]:
        att: dict[str, list[tuple[str, int]]] = {c: [] for c in self.circles}
        for pid in sorted(self.pieces):
            for i, c in enumerate(self.pieces[pid].ports):
                att.setdefault(c, []).append((pid, i))
        return att

    @property
    def inputs(self) -> list[str]:
        return [c.id for c in sorted(self.circles.values(), key=lambda c: c.index) if c.role == "in"]

    @property
    def outputs(self) -> list[str]:
        return [c.id for c in sorted(self.circles.values(), key=lambda c: c.index) if c.role == "out"]

    @property
    def externals(self) -> list[str]:
        return self.inputs + self.outputs

    @property
    def internal(self) -> list[str]:
        return [c for c in self.order if not self.circles[c].external]

    def euler(self, pieces: Optional[Iterable[str]] = None) -> int:
        ids = self.pieces if pieces is None else pieces
        return sum(EULER[self.pieces[p].kind] for p in ids)

    def components(self) -> list[tuple[frozenset[str], frozenset[str]]]:
        """Connected components as (piece ids, circle ids), ordered by least piece id."""
        seen: set[str] = set()
        out = []
        for start in sorted(self.pieces):
            if start in seen:
                continue
            ps, cs = set(), set()
            stack = [start]
            while stack:
                p = stack.pop()
                if p in ps:
                    continue
                ps.add(p)
                for c in self.pieces[p].ports:
                    cs.add(c)
                    for q, _ in self.attachments[c]:
                        if q not in ps:
                            stack.append(q)
            seen |= ps
            out.append((frozenset(ps), frozenset(cs)))
        return out

    def genus_table(self) -> list[tuple[int, int]]:
        """(genus, boundary count) per connected component."""
        table = []
        for ps, cs in self.components():
            n = sum(1 for c in cs if self.circles[c].external)
            chi = self.euler(ps)
            table.append(((2 - n - chi) // 2, n))
        return table

    def replace(self, remove_pieces=(), add_pieces=(), remove_circles=(), add_circles=()) -> "WiringDiagram":
        circles = dict(self.circles)
        pieces = dict(self.pieces)
        for p in remove_pieces:
            del pieces[p]
        for c in remove_circles:
            del circles[c]
        for c in add_circles:
            if c.id in circles:
                raise DiagramError(f"circle {c.id} already exists")
            circles[c.id] = c
        for p in add_pieces:
            if p.id in pieces:
                raise DiagramError(f"piece {p.id} already exists")
            pieces[p.id] = p
        return WiringDiagram(circles, pieces)

    def fresh(self, stem: str, taken: Iterable[str] = ()) -> str:
        used = set(self.circles) | set(self.pieces) | set(taken)
        k = 1
        while f"{stem}{k}" in used:
            k += 1
        return f"{stem}{k}"


def validate(d: WiringDiagram) -> list[str]:
    """Every violated diagram invariant, one message per problem (empty when valid)."""
    problems = []
    for pid in sorted(d.pieces):
        p = d.pieces[pid]
        if p.kind not in PORTS:
            problems.append(f"piece {pid}: unknown kind {p.kind!r}")
            continue
        if len(p.ports) != len(PORTS[p.kind]):
            problems.append(f"piece {pid}: {p.kind} needs {len(PORTS[p.kind])} ports, got {len(p.ports)}")
        for name, c in zip(PORTS[p.kind], p.ports):
            if c not in d.circles:
                problems.append(f"piece {pid}: port {name} wired to unknown circle {c}")
    for cid in d.order:
        c = d.circles[cid]
        count = len(d.attachments.get(cid, []))
        want = 1 if c.external else 2
        if count == 0:
            problems.append(f"circle {cid}: port unwired")
        elif count != want:
            problems.append(f"circle {cid}: {c.role} circle attached to {count} ports, expected {want}")
    for role in ("in", "out"):
        idx = sorted(c.index for c in d.circles.values() if c.role == role)
        if idx != list(range(len(idx))):
            problems.append(f"{role} circles have indices {idx}, expected 0..{len(idx) - 1}")
    if not problems:
        for (ps, _), (g, n) in zip(d.components(), d.genus_table()):
            chi = d.euler(ps)
            if g < 0 or 2 - 2 * g - n != chi:
                problems.append(f"component {min(ps)}: euler characteristic {chi} with {n} boundary circles")
    return problems


def check(d: WiringDiagram) -> WiringDiagram:
    problems = validate(d)
    if problems:
        raise DiagramError("; ".join(problems))
    return d


# ---------------------------------------------------------------- text format

_CIRCLE = re.compile(r"circle\s+(\S+)\s+(?:(in|out)\s+(\d+)|(internal))(?:\s+(B0|B1))?\s*$")


def parse_diagram(text: str) -> tuple[WiringDiagram, dict[str, int]]:
    """Parse the line-based diagram format; returns the diagram and any labels given."""
    circles, pieces, labels = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        word = stripped.split()[0]
        toks = stripped.split()
        if word == "circle":
            m = _CIRCLE.match(stripped)
            if not m:
                raise DiagramParseError(lineno, col, f"malformed circle declaration: {stripped!r}")
            cid, role, index, internal, label = m.groups()
            if internal:
                if label:
                    raise DiagramParseError(lineno, col, "internal circles carry no label")
                circles.append(Circle(cid, "internal"))
            else:
                circles.append(Circle(cid, role, int(index)))
                if label:
                    labels[cid] = int(label[1])
        elif word in ("cup", "cap"):
            if len(toks) != 3:
                raise DiagramParseError(lineno, col, f"{word} takes an id and one circle")
            pieces.append(Piece(toks[1], word, (toks[2],)))
        elif word == "cyl":
            if len(toks) != 4:
                raise DiagramParseError(lineno, col, "cyl takes an id, a top and a bottom circle")
            pieces.append(Piece(toks[1], "cylinder", (toks[2], toks[3])))
        elif word in ("pants", "copants"):
            if len(toks) != 4:
                raise DiagramParseError(lineno, col, f"{word} takes an id, belt= and legs=")
            opts = {}
            for t in toks[2:]:
                key, sep, val = t.partition("=")
                if not sep or key not in ("belt", "legs"):
                    raise DiagramParseError(lineno, col + stripped.index(t), f"unexpected token {t!r}")
                opts[key] = val
            legs = opts.get("legs", "").split(",")
            if "belt" not in opts or len(legs) != 2:
                raise DiagramParseError(lineno, col, f"{word} needs belt=<c> and legs=<c>,<c>")
            ports = (opts["belt"], *legs) if word == "pants" else (*legs, opts["belt"])
            pieces.append(Piece(toks[1], word, tuple(ports)))
        else:
            raise DiagramParseError(lineno, col, f"unknown keyword {word!r}")
    d = WiringDiagram.build(circles, pieces)
    return d, labels


def format_diagram(d: WiringDiagram, labels: Optional[Mapping[str, int]] = None) -> str:
    lines = []
    for cid in d.order:
        c = d.circles[cid]
        if c.external:
            tail = f" B{labels[cid]}" if labels and cid in labels else ""
            lines.append(f"circle {cid} {c.role} {c.index}{tail}")
        else:
            lines.append(f"circle {cid} internal")
    for pid in sorted(d.pieces):
        p = d.pieces[pid]
        if p.kind in DISKS:
            lines.append(f"{p.kind} {pid} {p.ports[0]}")
        elif p.kind == "cylinder":
            lines.append(f"cyl {pid} {p.ports[0]} {p.ports[1]}")
        elif p.kind == "pants":
            lines.append(f"pants {pid} belt={p.ports[0]} legs={p.ports[1]},{p.ports[2]}")
        else:
            lines.append(f"copants {pid} legs={p.ports[0]},{p.ports[1]} belt={p.ports[2]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- homology


@dataclass(frozen=True)
class ClassRep:
    """A homology class: canonical loop vector, cycle coordinates and full crossing vector."""

    loop_part: tuple[int, ...]
    cycle_part: tuple[int, ...]
    crossing: tuple[int, ...]

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.crossing, self.loop_part


@dataclass(frozen=True)
class BaseRouting:
    crossing: tuple[int, ...]
    arcs: dict = field(compare=False)  # piece id -> tuple of paired port indices

    @property
    def empty(self) -> bool:
        return not any(self.crossing)


class HomologyModel:
    """Loop generators, per-piece relations and wiring-graph cycles of a valid diagram."""

    def __init__(self, d: WiringDiagram):
        check(d)
        self.diagram = d
        self.order = d.order
        n = len(self.order)
        pos = d.position
        rows = []
        for pid in sorted(d.pieces):
            row = np.zeros(n, dtype=np.uint8)
            for c in d.pieces[pid].ports:
                row[pos[c]] ^= 1
            rows.append(row)
        self.relations = np.array(rows, dtype=np.uint8).reshape(len(rows), n)
        self.loops = gf2.Subspace(rows, n)
        self.internal = d.internal
        self.incidence = self._incidence(self.internal)
        self.cycles = gf2.kernel_basis(self.incidence, len(self.internal))

    def _incidence(self, cols: list[str]) -> np.ndarray:
        d = self.diagram
        m = np.zeros((len(d.pieces), len(cols)), dtype=np.uint8)
        where = {c: j for j, c in enumerate(cols)}
        for i, pid in enumerate(sorted(d.pieces)):
            for c in d.pieces[pid].ports:
                if c in where:
                    m[i, where[c]] ^= 1
        return m

    @property
    def loop_dim(self) -> int:
        return len(self.order) - self.loops.dim

    @property
    def cycle_dim(self) -> int:
        return len(self.cycles)

    @property
    def dim(self) -> int:
        return self.loop_dim + self.cycle_dim

    def expected_dim(self) -> int:
        return sum(2 * g + max(n - 1, 0) for g, n in self.diagram.genus_table())

    def loop_vector(self, circles: Iterable[str]) -> np.ndarray:
        v = np.zeros(len(self.order), dtype=np.uint8)
        for c in circles:
            v[self.diagram.position[c]] ^= 1
        return v

    def canonical_loops(self, circles: Iterable[str]) -> tuple[int, ...]:
        return tuple(int(b) for b in self.loops.canonical(self.loop_vector(circles)))

    def routing(self, labels: Mapping[str, int]) -> Optional[BaseRouting]:
        d = self.diagram
        ext = set(d.externals)
        rhs = np.zeros(len(d.pieces), dtype=np.uint8)
        for i, pid in enumerate(sorted(d.pieces)):
            for c in d.pieces[pid].ports:
                if c in ext:
                    rhs[i] ^= labels.get(c, 0) & 1
        x = gf2.solve(self.incidence, rhs, len(self.internal))
        if x is None:
            return None
        cross = dict(zip(self.internal, (int(b) for b in x)))
        cross.update({c: labels.get(c, 0) & 1 for c in ext})
        crossing = tuple(cross[c] for c in self.order)
        arcs = {}
        for pid, p in d.pieces.items():
            odd = tuple(i for i, c in enumerate(p.ports) if cross[c])
            if odd:
                arcs[pid] = odd
        return BaseRouting(crossing, arcs)

    def crossing_of(self, base: tuple[int, ...], cycle_part: Iterable[int]) -> tuple[int, ...]:
        cross = list(base)
        pos = self.diagram.position
        for coeff, cyc in zip(cycle_part, self.cycles):
            if coeff:
                for c, bit in zip(self.internal, cyc):
                    if bit:
                        cross[pos[c]] ^= 1
        return tuple(cross)

    def cycle_coordinates(self, base: tuple[int, ...], crossing: tuple[int, ...]) -> tuple[int, ...]:
        """Coordinates in the cycle basis of crossing - base (restricted to internal circles)."""
        pos = self.diagram.position
        diff = np.array([base[pos[c]] ^ crossing[pos[c]] for c in self.internal], dtype=np.uint8)
        if not self.cycles:
            if diff.any():
                raise ValueError("crossing vector is not an admissible routing")
            return ()
        basis = np.array(self.cycles, dtype=np.uint8)
        x = gf2.solve(basis.T, diff, len(self.cycles))
        if x is None:
            raise ValueError("crossing vector is not an admissible routing")
        return tuple(int(b) for b in x)

    def enumerate(self, labels: Mapping[str, int]) -> list[ClassRep]:
        """Canonical classes subject to ``labels``; empty when the labels are inadmissible."""
        base = self.routing(labels)
        if base is None:
            return []
        reps = self.loops.representatives()
        cycles = list(product((0, 1), repeat=len(self.cycles)))
        out = []
        for loop in reps:
            lp = tuple(int(b) for b in loop)
            for cyc in cycles:
                out.append(ClassRep(lp, cyc, self.crossing_of(base.crossing, cyc)))
        return out


def homology_model(d: WiringDiagram) -> HomologyModel:
    return HomologyModel(d)


def base_routing(d: WiringDiagram, labels: Mapping[str, int]) -> Optional[BaseRouting]:
    return HomologyModel(d).routing(labels)


def crossing_parity(m: HomologyModel, x: ClassRep, circle: str) -> int:
    if len(x.crossing) != len(m.order):
        raise ValueError("class does not belong to this model")
    return x.crossing[m.diagram.position[circle]]


def class_enumerate(m: HomologyModel, labels: Mapping[str, int]) -> list[ClassRep]:
    return m.enumerate(labels)


# ---------------------------------------------------------------- standard surfaces


def _circ(cid: str, role: str = "internal", index: int = -1) -> Circle:
    return Circle(cid, role, index)


def sphere() -> WiringDiagram:
    return WiringDiagram.build([_circ("s")], [Piece("cap", "cap", ("s",)), Piece("cup", "cup", ("s",))])


def cylinder(top: str = "t", bottom: str = "u") -> WiringDiagram:
    return WiringDiagram.build(
        [_circ(top, "in", 0), _circ(bottom, "out", 0)], [Piece("cyl", "cylinder", (top, bottom))]
    )


def pants(belt: str = "b", left: str = "l", right: str = "r") -> WiringDiagram:
    return WiringDiagram.build(
        [_circ(belt, "in", 0), _circ(left, "out", 0), _circ(right, "out", 1)],
        [Piece("P", "pants", (belt, left, right))],
    )


def surface(g: int, n: int) -> WiringDiagram:
    """Sigma_{g,n} as a chain: disk or input circle, g handles, then n-1 extra legs.

    Handle i is pants(h{i-1}; l{i}, r{i}) over copants(l{i}, r{i}; h{i}).
    """
    circles, pieces = [], []
    if n == 0:
        circles.append(_circ("h0"))
        pieces.append(Piece("D0", "cap", ("h0",)))
    else:
        circles.append(_circ("h0", "in", 0))
    cur = "h0"
    for i in range(1, g + 1):
        l, r, nxt = f"l{i}", f"r{i}", f"h{i}"
        circles += [_circ(l), _circ(r), _circ(nxt)]
        pieces += [Piece(f"P{i}", "pants", (cur, l, r)), Piece(f"K{i}", "copants", (l, r, nxt))]
        cur = nxt
    for k in range(1, n):
        nxt = f"e{k}"
        circles.append(_circ(f"y{k}", "out", k - 1))
        circles.append(_circ(nxt))
        pieces.append(Piece(f"Q{k}", "pants", (cur, nxt, f"y{k}")))
        cur = nxt
    pieces.append(Piece("D1", "cup", (cur,)))
    return check(WiringDiagram.build(circles, pieces))


def torus() -> WiringDiagram:
    return surface(1, 0)


def tube() -> WiringDiagram:
    """Sigma_{1,2}: pants over copants glued along both legs."""
    return check(
        WiringDiagram.build(
            [_circ("t", "in", 0), _circ("l"), _circ("r"), _circ("u", "out", 0)],
            [Piece("P", "pants", ("t", "l", "r")), Piece("K", "copants", ("l", "r", "u"))],
        )
    )


def theta_genus2() -> WiringDiagram:
    """Closed genus-2 surface from two pairs of pants glued along all three circles."""
    return check(
        WiringDiagram.build(
            [_circ("x"), _circ("y"), _circ("z")],
            [Piece("P", "pants", ("x", "y", "z")), Piece("K", "copants", ("y", "z", "x"))],
        )
    )


def labelings(d: WiringDiagram, admissible_only: bool = True) -> Iterator[dict[str, int]]:
    ext = d.externals
    for bits in product((0, 1), repeat=len(ext)):
        labels = dict(zip(ext, bits))
        if not admissible_only or HomologyModel(d).routing(labels) is not None:
            yield labels


def components_label_parity(d: WiringDiagram, labels: Mapping[str, int]) -> list[int]:
    out = []
    for _, cs in d.components():
        out.append(sum(labels.get(c, 0) for c in cs if d.circles[c].external) % 2)
    return out


def find_isomorphism(d1: WiringDiagram, d2: WiringDiagram) -> Optional[dict[str, str]]:
    """A circle bijection d1 -> d2 fixing external circles and respecting piece kinds and ports."""
    if len(d1.circles) != len(d2.circles) or len(d1.pieces) != len(d2.pieces):
        return None
    cmap: dict[str, str] = {}
    for c in d1.externals:
        o = d2.circles.get(c)
        if o is None or (o.role, o.index) != (d1.circles[c].role, d1.circles[c].index):
            return None
        cmap[c] = c
    if sorted(c for c in d2.externals) != sorted(d1.externals):
        return None
    used: set[str] = set()
    todo = sorted(d1.pieces)

    def pick() -> Optional[str]:
        for p in todo:
            if any(c in cmap for c in d1.pieces[p].ports):
                return p
        return todo[0] if todo else None

    def extend() -> bool:
        p = pick()
        if p is None:
            return True
        piece = d1.pieces[p]
        todo.remove(p)
        for q in sorted(d2.pieces):
            other = d2.pieces[q]
            if q in used or other.kind != piece.kind:
                continue
            added = []
            ok = True
            image = set(cmap.values())
            for a, b in zip(piece.ports, other.ports):
                if a in cmap:
                    if cmap[a] != b:
                        ok = False
                        break
                elif b in image or d2.circles[b].external:
                    ok = False
                    break
                else:
                    cmap[a] = b
                    image.add(b)
                    added.append(a)
            if ok:
                used.add(q)
                if extend():
                    return True
                used.discard(q)
            for a in added:
                del cmap[a]
        todo.append(p)
        todo.sort()
        return False

    return dict(cmap) if extend() else None


def rename(d: WiringDiagram, cmap: Mapping[str, str]) -> WiringDiagram:
    circles = [Circle(cmap[c.id], c.role, c.index) for c in d.circles.values()]
    pieces = [Piece(p.id, p.kind, tuple(cmap[c] for c in p.ports)) for p in d.pieces.values()]
    return WiringDiagram.build(circles, pieces)
