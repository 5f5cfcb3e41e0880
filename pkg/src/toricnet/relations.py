"""Every relation of the bordism presentation as a pair of programs, checked exactly.

A case runs both programs from the same diagram and labeling, absorbs
leftover cylinders, identifies the two final diagrams by an isomorphism
fixing the external circles, and compares the matrices entry by entry.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from . import spaces as sp
from . import surface as sm
from .generators import BRAID_TABLE, Evaluator, Options
from .spaces import LinearMap, State, StringNetSpace
from .surface import Circle, Piece, WiringDiagram

Program = Callable[[Evaluator], None]


def diagram(ins: Sequence[str], outs: Sequence[str], *pieces: tuple) -> WiringDiagram:
    """Build a diagram from (id, kind, port...) tuples; unlisted circles are internal."""
    ps = [Piece(p[0], p[1], tuple(p[2:])) for p in pieces]
    circles = [Circle(c, "in", i) for i, c in enumerate(ins)] + [Circle(c, "out", i) for i, c in enumerate(outs)]
    seen = set(ins) | set(outs)
    for p in ps:
        for c in p.ports:
            if c not in seen:
                seen.add(c)
                circles.append(Circle(c, "internal"))
    return sm.check(WiringDiagram.build(circles, ps))


EMPTY = WiringDiagram({}, {})
SPHERE = diagram([], [], ("A", "cap", "s"), ("B", "cup", "s"))


@dataclass(frozen=True)
class Relation:
    name: str
    diagram: WiringDiagram
    left: Program
    right: Program


@dataclass(frozen=True)
class RelationCase:
    name: str
    diagram: WiringDiagram
    labels: dict
    left: Program
    right: Program

    @property
    def admissible(self) -> bool:
        return sm.HomologyModel(self.diagram).routing(self.labels) is not None

    def label_text(self) -> str:
        return ",".join(f"{c}=B{v}" for c, v in sorted(self.labels.items())) or "-"


@dataclass
class CaseResult:
    case: RelationCase
    passed: bool
    detail: str = ""
    dim: int = 0

    @property
    def name(self) -> str:
        return self.case.name


def transport(src: StringNetSpace, dst: StringNetSpace, cmap) -> LinearMap:
    cols = []
    for s in src.states():
        t = State({cmap[c]: v for c, v in s.crossing.items()}, frozenset(cmap[c] for c in s.loops))
        cols.append({dst.locate(t): Fraction(1)})
    return LinearMap(src, dst, cols)


def run(program: Program, d: WiringDiagram, labels, options: Optional[Options] = None) -> Evaluator:
    ev = Evaluator(d, labels, options)
    program(ev)
    ev.absorb_all()
    return ev


def verify(case: RelationCase, options: Optional[Options] = None) -> CaseResult:
    try:
        lt = run(case.left, case.diagram, case.labels, options)
        rt = run(case.right, case.diagram, case.labels, options)
    except Exception as exc:  # a program that fails to type-check is a failing case
        return CaseResult(case, False, f"error: {exc}")
    cmap = sm.find_isomorphism(lt.diagram, rt.diagram)
    if cmap is None:
        return CaseResult(case, False, "the two composites end on non-isomorphic diagrams")
    left = sp.compose(transport(lt.space, rt.space, cmap), lt.map)
    diff = left.first_difference(rt.map)
    if diff is None:
        return CaseResult(case, True, "", lt.start.dim)
    i, j, a, b = diff
    return CaseResult(case, False, f"entry ({i},{j}): {sp.format_scalar(a)} != {sp.format_scalar(b)}", lt.start.dim)


# ---------------------------------------------------------------- relations


def _seq(*steps: Callable[[Evaluator], object]) -> Program:
    def program(ev: Evaluator) -> None:
        for step in steps:
            step(ev)
    return program


def _nothing(ev: Evaluator) -> None:
    pass


def _cyl(ev: Evaluator, circle: str) -> str:
    """Id of the cylinder created by splitting ``circle``."""
    before = set(ev.diagram.pieces)
    ev.split(circle)
    return (set(ev.diagram.pieces) - before).pop()


def inverse_relations() -> list[Relation]:
    pa = diagram(["b"], ["x", "y", "z"], ("A", "pants", "b", "m", "z"), ("B", "pants", "m", "x", "y"))
    pa_r = diagram(["b"], ["x", "y", "z"], ("A", "pants", "b", "x", "m"), ("B", "pants", "m", "y", "z"))
    co = diagram(["x", "y", "z"], ["b"], ("C", "copants", "x", "y", "m"), ("D", "copants", "m", "z", "b"))
    co_r = diagram(["x", "y", "z"], ["b"], ("C", "copants", "y", "z", "m"), ("D", "copants", "x", "m", "b"))
    unit_l = diagram(["b"], ["r"], ("A", "pants", "b", "k", "r"), ("D", "cup", "k"))
    unit_r = diagram(["b"], ["l"], ("A", "pants", "b", "l", "k"), ("D", "cup", "k"))
    cyl = diagram(["b"], ["r"], ("A", "cylinder", "b", "r"))
    pants = diagram(["b"], ["l", "r"], ("P", "pants", "b", "l", "r"))
    copants = diagram(["l", "r"], ["b"], ("P", "copants", "l", "r", "b"))
    rels = [
        Relation("inverse-alpha", pa, _seq(lambda e: e.alpha("A"), lambda e: e.alpha_inv("A")), _nothing),
        Relation("inverse-alpha", pa_r, _seq(lambda e: e.alpha_inv("A"), lambda e: e.alpha("A")), _nothing),
        Relation("inverse-alpha", co, _seq(lambda e: e.alpha("D"), lambda e: e.alpha_inv("D")), _nothing),
        Relation("inverse-alpha", co_r, _seq(lambda e: e.alpha_inv("D"), lambda e: e.alpha("D")), _nothing),
        Relation("inverse-lambda", unit_l, _seq(lambda e: e.lam("A"), lambda e: e.lam_inv("A")), _nothing),
        Relation("inverse-lambda", cyl, _seq(lambda e: e.lam_inv("A"), lambda e: e.lam("A")), _nothing),
        Relation("inverse-rho", unit_r, _seq(lambda e: e.rho("A"), lambda e: e.rho_inv("A")), _nothing),
        Relation("inverse-rho", cyl, _seq(lambda e: e.rho_inv("A"), lambda e: e.rho("A")), _nothing),
    ]
    for d in (pants, copants):
        rels.append(Relation("inverse-beta", d, _seq(lambda e: e.braid("P", 1), lambda e: e.braid("P", -1)), _nothing))
        rels.append(Relation("inverse-beta", d, _seq(lambda e: e.braid("P", -1), lambda e: e.braid("P", 1)), _nothing))
        for c in ("b", "l"):
            rels.append(Relation("inverse-theta", d, _seq(lambda e, c=c: e.twist(c, 1), lambda e, c=c: e.twist(c, -1)),
                                 _nothing))
    return rels


def pentagon_relations() -> list[Relation]:
    pa = diagram(["b"], ["w", "x", "y", "z"], ("A", "pants", "b", "m1", "z"), ("B", "pants", "m1", "m2", "y"),
                 ("D", "pants", "m2", "w", "x"))
    co = diagram(["w", "x", "y", "z"], ["b"], ("D", "copants", "w", "x", "m2"), ("B", "copants", "m2", "y", "m1"),
                 ("A", "copants", "m1", "z", "b"))
    return [
        Relation("pentagon", pa, _seq(lambda e: e.alpha("A"), lambda e: e.alpha("A")),
                 _seq(lambda e: e.alpha("B"), lambda e: e.alpha("A"), lambda e: e.alpha("B"))),
        Relation("pentagon", co, _seq(lambda e: e.alpha("A"), lambda e: e.alpha("A")),
                 _seq(lambda e: e.alpha("B"), lambda e: e.alpha("A"), lambda e: e.alpha("B"))),
    ]


def triangle_relations() -> list[Relation]:
    pa = diagram(["b"], ["x", "y"], ("B", "pants", "b", "s", "y"), ("A", "pants", "s", "x", "k"), ("D", "cup", "k"))
    co = diagram(["x", "y"], ["b"], ("D", "cap", "k"), ("A", "copants", "x", "k", "s"), ("B", "copants", "s", "y", "b"))
    return [
        Relation("triangle", pa, _seq(lambda e: e.alpha("B"), lambda e: e.lam("A")), lambda e: e.rho("A")),
        Relation("triangle", co, _seq(lambda e: e.alpha("B"), lambda e: e.lam("A")), lambda e: e.rho("A")),
    ]


def hexagon_relations() -> list[Relation]:
    h1 = diagram(["b"], ["x", "y", "z"], ("A", "pants", "b", "m", "z"), ("B", "pants", "m", "x", "y"))
    h2 = diagram(["b"], ["x", "y", "z"], ("A", "pants", "b", "x", "m"), ("B", "pants", "m", "y", "z"))
    c1 = diagram(["x", "y", "z"], ["b"], ("B", "copants", "x", "y", "m"), ("A", "copants", "m", "z", "b"))
    c2 = diagram(["x", "y", "z"], ["b"], ("B", "copants", "y", "z", "m"), ("A", "copants", "x", "m", "b"))
    rels = []
    for d1, d2 in ((h1, h2), (c1, c2)):
        rels.append(Relation(
            "hexagon", d1,
            _seq(lambda e: e.alpha("A"), lambda e: e.braid("A"), lambda e: e.alpha("A")),
            _seq(lambda e: e.braid("B"), lambda e: e.alpha("A"), lambda e: e.braid("B"))))
        rels.append(Relation(
            "hexagon-mirror", d2,
            _seq(lambda e: e.alpha_inv("A"), lambda e: e.braid("A"), lambda e: e.alpha_inv("A")),
            _seq(lambda e: e.braid("B"), lambda e: e.alpha_inv("A"), lambda e: e.braid("B"))))
    return rels


def balanced_relations() -> list[Relation]:
    pants = diagram(["b"], ["l", "r"], ("P", "pants", "b", "l", "r"))
    copants = diagram(["l", "r"], ["b"], ("P", "copants", "l", "r", "b"))
    rels = []
    for d in (pants, copants):
        rels.append(Relation(
            "balanced", d, lambda e: e.twist("b"),
            _seq(lambda e: e.braid("P"), lambda e: e.braid("P"), lambda e: e.twist("l"), lambda e: e.twist("r"))))
    rels.append(Relation("balanced-unit", diagram(["c"], [], ("D", "cup", "c")), lambda e: e.twist("c"), _nothing))
    rels.append(Relation("balanced-unit", diagram([], ["c"], ("D", "cap", "c")), lambda e: e.twist("c"), _nothing))
    return rels


def ribbon_relations() -> list[Relation]:
    coev = diagram([], ["l", "r"], ("D", "cap", "b"), ("P", "pants", "b", "l", "r"))
    ev = diagram(["l", "r"], [], ("P", "copants", "l", "r", "b"), ("D", "cup", "b"))
    return [Relation("ribbon", d, lambda e: e.twist("l"), lambda e: e.twist("r")) for d in (coev, ev)]


def _only(e: Evaluator, kind: str) -> str:
    ids = [p for p, q in e.diagram.pieces.items() if q.kind == kind]
    if len(ids) != 1:
        raise ValueError(f"expected one {kind}, found {len(ids)}")
    return ids[0]


def rigidity_relations() -> list[Relation]:
    src_l = diagram(["a", "x"], ["p", "c"], ("A", "pants", "a", "p", "q"), ("C", "copants", "q", "x", "c"))
    tgt_l = diagram(["a", "x"], ["p", "c"], ("F", "copants", "a", "x", "m"), ("P", "pants", "m", "p", "c"))
    src_r = diagram(["x", "a"], ["c", "p"], ("A", "pants", "a", "q", "p"), ("C", "copants", "x", "q", "c"))
    tgt_r = diagram(["x", "a"], ["c", "p"], ("F", "copants", "x", "a", "m"), ("P", "pants", "m", "c", "p"))

    def there_and_back(first: str, second: str) -> Program:
        # the forward map starts at a pants, the inverse at a copants
        def program(e: Evaluator) -> None:
            getattr(e, first)(_only(e, "pants" if not first.endswith("inv") else "copants"))
            getattr(e, second)(_only(e, "pants" if not second.endswith("inv") else "copants"))
        return program

    return [
        Relation("rigidity-left", src_l, there_and_back("phi_left", "phi_left_inv"), _nothing),
        Relation("rigidity-left", tgt_l, there_and_back("phi_left_inv", "phi_left"), _nothing),
        Relation("rigidity-right", src_r, there_and_back("phi_right", "phi_right_inv"), _nothing),
        Relation("rigidity-right", tgt_r, there_and_back("phi_right_inv", "phi_right"), _nothing),
    ]


def biadjunction_relations() -> list[Relation]:
    cup = diagram(["t"], [], ("D", "cup", "t"))
    cap = diagram([], ["u"], ("D", "cap", "u"))
    pants = diagram(["b"], ["l2", "r2"], ("P", "pants", "b", "l", "r"), ("Y1", "cylinder", "l", "l2"),
                    ("Y2", "cylinder", "r", "r2"))
    copants = diagram(["l2", "r2"], ["b"], ("Y1", "cylinder", "l2", "l"), ("Y2", "cylinder", "r2", "r"),
                      ("K", "copants", "l", "r", "b"))
    bare_pants = diagram(["b"], ["l", "r"], ("P", "pants", "b", "l", "r"))
    bare_copants = diagram(["l", "r"], ["b"], ("K", "copants", "l", "r", "b"))

    def nu_mu_cup(e: Evaluator) -> None:
        e.birth(new="s")
        cap_id = next(p for p, q in e.diagram.pieces.items() if q.kind == "cap")
        e.mu("D", cap_id)

    def nu_mu_cap(e: Evaluator) -> None:
        e.birth(new="s")
        cup_id = next(p for p, q in e.diagram.pieces.items() if q.kind == "cup")
        e.mu(cup_id, "D")

    def mu_nu_dag(circle: str) -> Program:
        def program(e: Evaluator) -> None:
            e.mu_dag(_cyl(e, circle))
            e.death()
        return program

    def eta_eps_pants(e: Evaluator) -> None:
        e.eta("Y1", "Y2")
        e.epsilon("P")

    def eta_eps_copants(e: Evaluator) -> None:
        e.eta("Y1", "Y2")
        e.epsilon("Y2")

    def eps_eta_dag_pants(e: Evaluator) -> None:
        y = _cyl(e, "b")
        e.epsilon_dag(y)
        e.eta_dag(next(p for p, q in e.diagram.pieces.items() if q.kind == "copants"))

    def eps_eta_dag_copants(e: Evaluator) -> None:
        y = _cyl(e, "b")
        e.epsilon_dag(y)
        e.eta_dag("K")

    return [
        Relation("biadjunction-nu-mu", cup, nu_mu_cup, _nothing),
        Relation("biadjunction-nu-mu-dagger", cup, mu_nu_dag("t"), _nothing),
        Relation("biadjunction-nu-mu-x", cap, nu_mu_cap, _nothing),
        Relation("biadjunction-nu-mu-dagger-x", cap, mu_nu_dag("u"), _nothing),
        Relation("biadjunction-eta-epsilon", pants, eta_eps_pants, _nothing),
        Relation("biadjunction-eta-epsilon-dagger", bare_pants, eps_eta_dag_pants, _nothing),
        Relation("biadjunction-eta-epsilon-x", copants, eta_eps_copants, _nothing),
        Relation("biadjunction-eta-epsilon-dagger-x", bare_copants, eps_eta_dag_copants, _nothing),
    ]


def pivotality_relations() -> list[Relation]:
    def piv(leg: int) -> Program:
        def program(e: Evaluator) -> None:
            y = _cyl(e, "s")
            legs = e.epsilon_dag(y)
            z = _cyl(e, legs[leg])
            cap_id = e.mu_dag(z)
            e.mu(z, cap_id)
            e.absorb(z)
            e.epsilon(y)
        return program

    return [Relation("pivotality", SPHERE, piv(1), _nothing), Relation("pivotality-z", SPHERE, piv(0), _nothing)]


def modularity_relations() -> list[Relation]:
    cyl = diagram(["t"], ["u"], ("Y", "cylinder", "t", "u"))

    def top(first: int) -> Program:
        def program(e: Evaluator) -> None:
            l, r = e.epsilon_dag("Y")
            e.twist(l, first)
            e.twist(r, -first)
            e.epsilon("Y")
        return program

    def bottom(e: Evaluator) -> None:
        cap_id = e.mu_dag("Y")
        e.mu("Y", cap_id)

    return [Relation("modularity", cyl, top(1), bottom), Relation("modularity-z", cyl, top(-1), bottom)]


def anomaly_relations() -> list[Relation]:
    def program(e: Evaluator) -> None:
        y = _cyl(e, "s")
        l, _ = e.epsilon_dag(y)
        e.twist(l)
        e.epsilon(y)

    return [Relation("anomaly-freeness", SPHERE, program, _nothing)]


FAMILIES = OrderedDict([
    ("inverses", inverse_relations),
    ("pentagon", pentagon_relations),
    ("triangle", triangle_relations),
    ("hexagon", hexagon_relations),
    ("balanced", balanced_relations),
    ("rigidity", rigidity_relations),
    ("ribbon", ribbon_relations),
    ("biadjunction", biadjunction_relations),
    ("pivotality", pivotality_relations),
    ("modularity", modularity_relations),
    ("anomaly-freeness", anomaly_relations),
])


def relation_catalog(families: Optional[Iterable[str]] = None) -> list[RelationCase]:
    """Every relation instance crossed with every labeling of its external circles."""
    out = []
    for fam in families or FAMILIES:
        for rel in FAMILIES[fam]():
            ext = rel.diagram.externals
            for bits in product((0, 1), repeat=len(ext)):
                out.append(RelationCase(rel.name, rel.diagram, dict(zip(ext, bits)), rel.left, rel.right))
    return out


@dataclass
class Report:
    results: list[CaseResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CaseResult]:
        return [r for r in self.results if not r.passed]

    def by_name(self) -> "OrderedDict[str, tuple[int, int]]":
        out: OrderedDict[str, tuple[int, int]] = OrderedDict()
        for r in self.results:
            ok, total = out.get(r.name, (0, 0))
            out[r.name] = (ok + r.passed, total + 1)
        return out


def verify_all(options: Optional[Options] = None, names: Optional[Iterable[str]] = None,
               cases: Optional[Sequence[RelationCase]] = None) -> Report:
    cases = relation_catalog() if cases is None else cases
    wanted = set(names) if names else None
    return Report([verify(c, options) for c in cases if wanted is None or c.name in wanted])


# ---------------------------------------------------------------- braid table search

BRAID_KEYS = ((0, 1, 1), (1, 1, 0), (1, 0, 1))
TRANSLATIONS = ((0, 0), (0, 1), (1, 0), (1, 1))


def braid_table_search() -> list[dict]:
    """All correction tables passing the balanced and hexagon cases, in lexicographic order."""
    cases = [c for c in relation_catalog(["balanced", "hexagon"])]
    good = []
    for choice in product(TRANSLATIONS, repeat=len(BRAID_KEYS)):
        table = {(0, 0, 0): (0, 0), **dict(zip(BRAID_KEYS, choice))}
        opts = Options(braid_table=table)
        if all(verify(c, opts).passed for c in cases):
            good.append(table)
    return good
