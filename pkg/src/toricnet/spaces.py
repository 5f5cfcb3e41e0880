"""String-net spaces, exact linear maps between them, and gluing.

A basis vector of H(Sigma; B) is a canonical homology class.  Maps are
stored column-sparse with ``Fraction`` entries.  Operations on classes are
written against :class:`State`, a non-canonical (crossing, loop-set) pair
that any space can canonicalize into a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from scipy.cluster.hierarchy import DisjointSet

from . import surface as sm
from .surface import Circle, HomologyModel, Piece, WiringDiagram

Scalar = Fraction
HALF = Fraction(1, 2)


def format_scalar(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_scalar(text: str) -> Fraction:
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class State:
    """A class on a diagram given by crossings at every circle and a set of circle loops."""

    crossing: Mapping[str, int]
    loops: frozenset

    def add_loops(self, circles: Iterable[str]) -> "State":
        return State(self.crossing, self.loops.symmetric_difference(_odd(circles)))

    def with_crossing(self, updates: Mapping[str, int], drop: Iterable[str] = ()) -> "State":
        cross = dict(self.crossing)
        for c in drop:
            cross.pop(c, None)
        cross.update(updates)
        return State(cross, self.loops)


def _odd(circles: Iterable[str]) -> frozenset:
    out: set[str] = set()
    for c in circles:
        out ^= {c}
    return frozenset(out)


class Space:
    """Anything with an ordered basis; subclasses supply ``dim`` and ``describe``."""

    dim: int

    def describe(self, i: int) -> str:
        return str(i)

    def same(self, other: "Space") -> bool:
        return self is other


class StringNetSpace(Space):
    def __init__(self, diagram: WiringDiagram, labels: Optional[Mapping[str, int]] = None,
                 model: Optional[HomologyModel] = None):
        self.diagram = diagram
        self.model = model or HomologyModel(diagram)
        ext = diagram.externals
        labels = dict(labels or {})
        unknown = set(labels) - set(ext)
        if unknown:
            raise sm.DiagramError(f"labels on non-external circles: {sorted(unknown)}")
        self.labels = {c: labels.get(c, 0) & 1 for c in ext}
        self.routing = self.model.routing(self.labels)
        self.basis = self.model.enumerate(self.labels)
        self.index = {x.key: i for i, x in enumerate(self.basis)}
        self.dim = len(self.basis)

    def same(self, other: Space) -> bool:
        return other is self or (
            isinstance(other, StringNetSpace) and other.diagram == self.diagram and other.labels == self.labels
        )

    def state(self, i: int) -> State:
        x = self.basis[i]
        order = self.model.order
        return State(dict(zip(order, x.crossing)), frozenset(c for c, b in zip(order, x.loop_part) if b))

    def states(self) -> list[State]:
        return [self.state(i) for i in range(self.dim)]

    def locate(self, s: State) -> int:
        """Basis index of ``s``; raises KeyError when it is not a class of this space."""
        order = self.model.order
        if set(s.crossing) != set(order):
            raise KeyError(f"state circles {sorted(s.crossing)} do not match diagram circles")
        key = (tuple(s.crossing[c] & 1 for c in order), self.model.canonical_loops(s.loops))
        return self.index[key]

    def describe(self, i: int) -> str:
        x = self.basis[i]
        loops = "".join(map(str, x.loop_part)) or "-"
        cyc = "".join(map(str, x.cycle_part)) or "-"
        flag = "A" if self.routing is not None and not self.routing.empty else "0"
        return f"{loops} | {cyc} | {flag}"


class TensorSpace(Space):
    def __init__(self, left: Space, right: Space):
        self.left, self.right = left, right
        self.dim = left.dim * right.dim

    def same(self, other: Space) -> bool:
        return other is self or (
            isinstance(other, TensorSpace) and self.left.same(other.left) and self.right.same(other.right)
        )

    def describe(self, i: int) -> str:
        a, b = divmod(i, self.right.dim)
        return f"({self.left.describe(a)}) x ({self.right.describe(b)})"


class QuotientSpace(Space):
    """Basis = equivalence classes of pure tensors, each kept as one representative."""

    def __init__(self, reps: Sequence, classes: Sequence[Sequence]):
        self.reps = list(reps)
        self.classes = [list(c) for c in classes]
        self.dim = len(self.reps)

    def describe(self, i: int) -> str:
        return repr(self.reps[i])


def space(d: WiringDiagram, labels: Optional[Mapping[str, int]] = None) -> StringNetSpace:
    return StringNetSpace(d, labels)


def dim(s: Space) -> int:
    return s.dim


class SpaceMismatch(ValueError):
    pass


class LinearMap:
    """Exact matrix of shape (codomain.dim, domain.dim) stored as sparse columns."""

    def __init__(self, domain: Space, codomain: Space, columns: Sequence[Mapping[int, Fraction]]):
        if len(columns) != domain.dim:
            raise ValueError(f"{len(columns)} columns for a {domain.dim}-dimensional domain")
        self.domain, self.codomain = domain, codomain
        cols = []
        for col in columns:
            clean = {}
            for i, v in col.items():
                if not 0 <= i < codomain.dim:
                    raise ValueError(f"row index {i} outside codomain of dimension {codomain.dim}")
                v = Fraction(v)
                if v:
                    clean[i] = v
            cols.append(clean)
        self.columns = cols

    @property
    def shape(self) -> tuple[int, int]:
        return self.codomain.dim, self.domain.dim

    def dense(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * self.domain.dim for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                m[i][j] = v
        return m

    def entry(self, i: int, j: int) -> Fraction:
        return self.columns[j].get(i, Fraction(0))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return compose(self, other)

    def scale(self, c) -> "LinearMap":
        c = Fraction(c)
        return LinearMap(self.domain, self.codomain, [{i: c * v for i, v in col.items()} for col in self.columns])

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if self.shape != other.shape:
            raise SpaceMismatch(f"cannot add maps of shapes {self.shape} and {other.shape}")
        cols = []
        for a, b in zip(self.columns, other.columns):
            col = dict(a)
            for i, v in b.items():
                col[i] = col.get(i, Fraction(0)) + v
            cols.append(col)
        return LinearMap(self.domain, self.codomain, cols)

    def matrix_equal(self, other: "LinearMap") -> bool:
        return self.shape == other.shape and self.columns == other.columns

    def first_difference(self, other: "LinearMap") -> Optional[tuple[int, int, Fraction, Fraction]]:
        if self.shape != other.shape:
            return (-1, -1, Fraction(0), Fraction(0))
        for j, (a, b) in enumerate(zip(self.columns, other.columns)):
            for i in sorted(set(a) | set(b)):
                if a.get(i, 0) != b.get(i, 0):
                    return i, j, a.get(i, Fraction(0)), b.get(i, Fraction(0))
        return None

    def is_scalar(self) -> bool:
        return self.shape == (1, 1)

    def scalar(self) -> Fraction:
        if not self.is_scalar():
            raise ValueError(f"map of shape {self.shape} is not a scalar")
        return self.entry(0, 0)

    def is_permutation(self) -> bool:
        if self.shape[0] != self.shape[1]:
            return False
        rows = []
        for col in self.columns:
            if len(col) != 1 or next(iter(col.values())) != 1:
                return False
            rows.append(next(iter(col)))
        return sorted(rows) == list(range(self.shape[0]))

    def serialize(self) -> str:
        lines = [f"dim {self.shape[0]} {self.shape[1]}"]
        entries = sorted((i, j, v) for j, col in enumerate(self.columns) for i, v in col.items())
        lines += [f"{i} {j} {format_scalar(v)}" for i, j, v in entries]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"LinearMap{self.shape}"


def compose(g: LinearMap, f: LinearMap) -> LinearMap:
    """g after f."""
    if not g.domain.same(f.codomain):
        raise SpaceMismatch(f"cannot compose: codomain of f (dim {f.codomain.dim}) is not the domain of g")
    cols = []
    for col in f.columns:
        out: dict[int, Fraction] = {}
        for k, v in col.items():
            for i, w in g.columns[k].items():
                out[i] = out.get(i, Fraction(0)) + v * w
        cols.append(out)
    return LinearMap(f.domain, g.codomain, cols)


def identity(s: Space) -> LinearMap:
    return LinearMap(s, s, [{i: Fraction(1)} for i in range(s.dim)])


def zero(domain: Space, codomain: Space) -> LinearMap:
    return LinearMap(domain, codomain, [{} for _ in range(domain.dim)])


def tensor(f: LinearMap, g: LinearMap) -> LinearMap:
    dom = TensorSpace(f.domain, g.domain)
    cod = TensorSpace(f.codomain, g.codomain)
    m = g.codomain.dim
    cols = []
    for a in f.columns:
        for b in g.columns:
            cols.append({i * m + k: v * w for i, v in a.items() for k, w in b.items()})
    return LinearMap(dom, cod, cols)


def from_dense(domain: Space, codomain: Space, rows: Sequence[Sequence]) -> LinearMap:
    cols = [{i: Fraction(rows[i][j]) for i in range(codomain.dim) if rows[i][j]} for j in range(domain.dim)]
    return LinearMap(domain, codomain, cols)


@dataclass(frozen=True)
class Vector:
    space: Space
    coefficients: Mapping[int, Fraction]

    def __post_init__(self):
        for i in self.coefficients:
            if not 0 <= i < self.space.dim:
                raise ValueError(f"index {i} outside space of dimension {self.space.dim}")

    @classmethod
    def basis(cls, s: Space, i: int) -> "Vector":
        return cls(s, {i: Fraction(1)})

    def support(self) -> dict[int, Fraction]:
        return {i: Fraction(v) for i, v in self.coefficients.items() if v}


def apply(f: LinearMap, v: Vector) -> Vector:
    if not f.domain.same(v.space):
        raise SpaceMismatch("vector does not live in the domain of the map")
    out: dict[int, Fraction] = {}
    for j, c in v.support().items():
        for i, w in f.columns[j].items():
            out[i] = out.get(i, Fraction(0)) + c * w
    return Vector(f.codomain, {i: x for i, x in out.items() if x})


def parse_map(text: str, domain: Space, codomain: Space) -> LinearMap:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    head = lines[0].split() if lines else []
    if len(head) != 3 or head[0] != "dim":
        raise ValueError("expected header 'dim m n'")
    m, n = int(head[1]), int(head[2])
    if (m, n) != (codomain.dim, domain.dim):
        raise SpaceMismatch(f"serialized shape {(m, n)} does not match {(codomain.dim, domain.dim)}")
    cols: list[dict[int, Fraction]] = [{} for _ in range(n)]
    for ln in lines[1:]:
        i, j, v = ln.split()
        cols[int(j)][int(i)] = parse_scalar(v)
    return LinearMap(domain, codomain, cols)


def map_from_states(domain: StringNetSpace, codomain: StringNetSpace, action) -> LinearMap:
    """Matrix of ``action``: State -> iterable of (coefficient, State) on the codomain diagram."""
    cols = []
    for s in domain.states():
        col: dict[int, Fraction] = {}
        for c, t in action(s):
            i = codomain.locate(t)
            col[i] = col.get(i, Fraction(0)) + Fraction(c)
        cols.append(col)
    return LinearMap(domain, codomain, cols)


# ---------------------------------------------------------------- boundary values


def bv_hom(b: int, b2: int) -> StringNetSpace:
    return space(sm.cylinder("t", "u"), {"t": b, "u": b2})


def bv_identity(b: int) -> int:
    """Index of the identity morphism of B in hom(B, B): the routing class without loops."""
    s = bv_hom(b, b)
    return s.locate(State({"t": b, "u": b}, frozenset()))


def bv_compose(f: tuple[StringNetSpace, int], g: tuple[StringNetSpace, int]) -> tuple[StringNetSpace, int]:
    """Vertical gluing of a class on cyl(B, B') with one on cyl(B', B'')."""
    (sf, i), (sg, j) = f, g
    if sf.labels["u"] != sg.labels["t"]:
        raise SpaceMismatch("middle boundary values differ")
    x, y = sf.state(i), sg.state(j)
    # in the glued two-cylinder diagram both loops on the shared circle slide to the top
    loops = _odd([c for c in x.loops] + ["t" for _ in y.loops])
    out = bv_hom(sf.labels["t"], sg.labels["u"])
    k = out.locate(State({"t": sf.labels["t"], "u": sg.labels["u"]}, loops))
    return out, k


def boundary_arc_iso(s0: StringNetSpace, labels: Mapping[str, int]) -> LinearMap:
    """f_A: h -> routing + h from the all-B0 space into the space with ``labels``."""
    if any(s0.labels.values()):
        raise ValueError("domain must carry all-B0 labels")
    target = StringNetSpace(s0.diagram, labels, s0.model)
    if target.routing is None:
        raise ValueError("target labels are inadmissible")
    m = s0.model
    cols = []
    for x in s0.basis:
        cross = m.crossing_of(target.routing.crossing, x.cycle_part)
        cols.append({target.index[(cross, x.loop_part)]: Fraction(1)})
    return LinearMap(s0, target, cols)


# ---------------------------------------------------------------- gluing


def local_diagram(p: Piece) -> WiringDiagram:
    """The piece alone with port-indexed boundary circles ``<piece>.<port>``."""
    ins = sm.INPUT_PORTS[p.kind]
    circles, k_in, k_out = [], 0, 0
    for i in range(len(p.ports)):
        if i in ins:
            circles.append(Circle(f"{p.id}.{i}", "in", k_in))
            k_in += 1
        else:
            circles.append(Circle(f"{p.id}.{i}", "out", k_out))
            k_out += 1
    return WiringDiagram.build(circles, [Piece(p.id, p.kind, tuple(c.id for c in circles))])


@dataclass
class Composite:
    diagram: WiringDiagram
    labels: dict
    quotient: QuotientSpace
    local: dict  # (piece id, internal labeling) -> StringNetSpace


def profunctor_compose(d: WiringDiagram, labels: Mapping[str, int]) -> Composite:
    err = sm.validate(d)
    if err:
        raise sm.DiagramError("; ".join(err))
    pids = sorted(d.pieces)
    internal = d.internal
    diagrams = {p: local_diagram(d.pieces[p]) for p in pids}
    models = {p: HomologyModel(diagrams[p]) for p in pids}
    local: dict = {}
    elements = []
    for bits in product((0, 1), repeat=len(internal)):
        full = dict(labels)
        full.update(zip(internal, bits))
        spaces_here = []
        for p in pids:
            pl = {f"{p}.{i}": full.get(c, 0) for i, c in enumerate(d.pieces[p].ports)}
            sp = StringNetSpace(diagrams[p], pl, models[p])
            local[(p, bits)] = sp
            spaces_here.append(sp)
        for combo in product(*(range(sp.dim) for sp in spaces_here)):
            elements.append((bits, combo))
    ds = DisjointSet(elements)
    for bits, combo in elements:
        for c in internal:
            (p, i), (q, j) = d.attachments[c]
            new = list(combo)
            for piece, port in ((p, i), (q, j)):
                k = pids.index(piece)
                sp = local[(piece, bits)]
                new[k] = sp.locate(sp.state(new[k]).add_loops([f"{piece}.{port}"]))
            ds.merge((bits, combo), (bits, tuple(new)))
    classes = sorted((sorted(s) for s in ds.subsets()), key=lambda s: s[0])
    q = QuotientSpace([c[0] for c in classes], classes)
    return Composite(d, dict(labels), q, local)


def glued_state(comp: Composite, rep) -> State:
    d = comp.diagram
    bits, combo = rep
    full = dict(comp.labels)
    full.update(zip(d.internal, bits))
    loops: list[str] = []
    for p, k in zip(sorted(d.pieces), combo):
        for lc in comp.local[(p, bits)].state(k).loops:
            loops.append(d.pieces[p].ports[int(lc.rsplit(".", 1)[1])])
    return State({c: full.get(c, 0) for c in d.order}, _odd(loops))


def gluing_iso(comp: Composite, target: Optional[StringNetSpace] = None) -> LinearMap:
    """Psi: quotient basis -> basis of the glued space.  Raises if some class has two images."""
    target = target or space(comp.diagram, comp.labels)
    cols = []
    for cls in comp.quotient.classes:
        images = {target.locate(glued_state(comp, rep)) for rep in cls}
        if len(images) != 1:
            raise AssertionError(f"sliding class maps to {len(images)} glued classes")
        cols.append({images.pop(): Fraction(1)})
    return LinearMap(comp.quotient, target, cols)


def orange_loop(s: StringNetSpace, circle: str) -> LinearMap:
    """O_c: v_x -> v_x + v_(x + L_c), the superposition (empty + loop) along ``circle``."""
    if circle not in s.diagram.circles:
        raise KeyError(f"no circle {circle}")
    return map_from_states(s, s, lambda st: [(1, st), (1, st.add_loops([circle]))])
