"""Linear maps of the generating 2-morphisms and a small program evaluator.

Every operation rewrites the ambient diagram locally and acts on classes
through :class:`~toricnet.spaces.State`: crossings on new circles are forced
by parity, loops on removed circles are re-expressed through the remaining
boundary, and surgeries either kill a state, keep it, or add an orange loop
(empty plus loop) along the new curve.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import spaces as sp
from . import surface as sm
from .spaces import HALF, LinearMap, State, StringNetSpace
from .surface import Circle, Piece, WiringDiagram

# translation added by the leg swap, keyed by local crossings (belt, left, right);
# a value (a, b) adds a*L(left) + b*L(right), read at the source positions.
# Lexicographically least of the two tables passing the hexagon and balanced
# relations; the other one is its mirror image.
BRAID_TABLE: dict[tuple[int, int, int], tuple[int, int]] = {
    (0, 0, 0): (0, 0),
    (0, 1, 1): (0, 1),
    (1, 1, 0): (0, 1),
    (1, 0, 1): (0, 0),
}
ZERO_BRAID_TABLE = {k: (0, 0) for k in BRAID_TABLE}


class ProgramError(ValueError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class Options:
    nu_scalar: Fraction = HALF
    braid_table: Optional[Mapping] = None
    epsilon_curve: str = "hole"  # "leg" is the mismatched variant kept as a negative control

    @property
    def table(self) -> Mapping:
        return BRAID_TABLE if self.braid_table is None else self.braid_table


def _rewire(p: Piece, old: str, new: str, port: Optional[int] = None) -> Piece:
    ports = list(p.ports)
    if port is None:
        port = ports.index(old)
    ports[port] = new
    return Piece(p.id, p.kind, tuple(ports))


class Evaluator:
    """Applies elementary operations in order, accumulating the composite matrix.

    Methods return the ids they create so callers can address later sites.
    """

    def __init__(self, diagram: WiringDiagram, labels: Optional[Mapping[str, int]] = None,
                 options: Optional[Options] = None, **kw):
        self.options = options or Options(**kw)
        self.start = StringNetSpace(sm.check(diagram), labels)
        self.space = self.start
        self.map = sp.identity(self.start)
        self.log: list[str] = []

    @property
    def diagram(self) -> WiringDiagram:
        return self.space.diagram

    @property
    def labels(self) -> dict:
        return self.space.labels

    def fresh(self, stem: str) -> str:
        return self.diagram.fresh(stem)

    def _push(self, name: str, new: WiringDiagram, action) -> None:
        problems = sm.validate(new)
        if problems:
            raise ProgramError(len(self.log), f"{name} produced an invalid diagram: {'; '.join(problems)}")
        labels = {c: l for c, l in self.labels.items() if c in new.circles}
        target = StringNetSpace(new, labels)
        step = sp.map_from_states(self.space, target, action)
        self.map = sp.compose(step, self.map)
        self.space = target
        self.log.append(name)

    def _piece(self, pid: str, *kinds: str) -> Piece:
        p = self.diagram.pieces.get(pid)
        if p is None:
            raise ProgramError(len(self.log), f"no piece {pid}")
        if kinds and p.kind not in kinds:
            raise ProgramError(len(self.log), f"piece {pid} is a {p.kind}, expected {' or '.join(kinds)}")
        return p

    def _circle(self, cid: str) -> Circle:
        c = self.diagram.circles.get(cid)
        if c is None:
            raise ProgramError(len(self.log), f"no circle {cid}")
        return c

    def _fail(self, msg: str):
        raise ProgramError(len(self.log), msg)

    def _other(self, cid: str, pid: str) -> tuple[str, int]:
        """The attachment of ``cid`` that is not on piece ``pid``."""
        att = [a for a in self.diagram.attachments[cid] if a[0] != pid]
        if len(att) != 1:
            self._fail(f"circle {cid} is not an internal circle leaving {pid}")
        return att[0]

    def _attached(self, cid: str, pid: str, kinds: Sequence[str]) -> Piece:
        q, _ = self._other(cid, pid)
        return self._piece(q, *kinds)

    # ------------------------------------------------------------ regrouping

    def _regroup(self, name: str, remove: Sequence[str], add: Sequence[Piece],
                 dropped: Mapping[str, Sequence[str]], created: Mapping[str, Sequence[str]]) -> None:
        """Replace a genus-0 tree of pieces by another with the same boundary.

        ``dropped`` gives, for each removed circle, the boundary circles on
        one side of it (its loop is their sum); ``created`` does the same for
        new circles (its crossing is the sum of their crossings).
        """
        d = self.diagram
        new = d.replace(remove_pieces=remove, add_pieces=add, remove_circles=list(dropped),
                        add_circles=[Circle(c, "internal") for c in created])

        def action(s: State):
            loops = set(s.loops)
            for m, side in dropped.items():
                if m in loops:
                    loops.discard(m)
                    loops ^= set(side)
            cross = {c: v for c, v in s.crossing.items() if c not in dropped}
            for m, side in created.items():
                cross[m] = sum(s.crossing[c] for c in side) % 2
            return [(1, State(cross, frozenset(loops)))]

        self._push(name, new, action)

    def alpha(self, site: str, new: Optional[str] = None) -> str:
        """Reassociate the tree rooted at ``site`` whose left leg feeds a piece of the same kind."""
        a = self._piece(site, "pants", "copants")
        n = new or self.fresh("n")
        if a.kind == "pants":
            b, m, z = a.ports
            bp = self._attached(m, a.id, ["pants"])
            if bp.ports[0] != m:
                self._fail(f"left leg of {site} does not feed a belt")
            _, x, y = bp.ports
            add = [Piece(a.id, "pants", (b, x, n)), Piece(bp.id, "pants", (n, y, z))]
            self._regroup(f"alpha {site}", [a.id, bp.id], add, {m: (x, y)}, {n: (y, z)})
        else:
            # site is the lower copants D(m, z; b) whose left leg comes from C(x, y; m)
            m, z, b = a.ports
            c = self._attached(m, a.id, ["copants"])
            if c.ports[2] != m:
                self._fail(f"left leg of {site} is not fed by a belt")
            x, y, _ = c.ports
            add = [Piece(c.id, "copants", (y, z, n)), Piece(a.id, "copants", (x, n, b))]
            self._regroup(f"alpha {site}", [a.id, c.id], add, {m: (x, y)}, {n: (y, z)})
        return n

    def alpha_inv(self, site: str, new: Optional[str] = None) -> str:
        a = self._piece(site, "pants", "copants")
        n = new or self.fresh("n")
        if a.kind == "pants":
            b, x, m = a.ports
            bp = self._attached(m, a.id, ["pants"])
            if bp.ports[0] != m:
                self._fail(f"right leg of {site} does not feed a belt")
            _, y, z = bp.ports
            add = [Piece(a.id, "pants", (b, n, z)), Piece(bp.id, "pants", (n, x, y))]
            self._regroup(f"alpha-inv {site}", [a.id, bp.id], add, {m: (y, z)}, {n: (x, y)})
        else:
            x, m, b = a.ports
            c = self._attached(m, a.id, ["copants"])
            if c.ports[2] != m:
                self._fail(f"right leg of {site} is not fed by a belt")
            y, z, _ = c.ports
            add = [Piece(c.id, "copants", (x, y, n)), Piece(a.id, "copants", (n, z, b))]
            self._regroup(f"alpha-inv {site}", [a.id, c.id], add, {m: (y, z)}, {n: (x, y)})
        return n

    def _unitor(self, name: str, site: str, leg: int) -> str:
        a = self._piece(site, "pants", "copants")
        disk = "cup" if a.kind == "pants" else "cap"
        legs = (1, 2) if a.kind == "pants" else (0, 1)
        k = a.ports[legs[leg]]
        other = a.ports[legs[1 - leg]]
        dp = self._attached(k, a.id, [disk])
        belt = a.ports[0] if a.kind == "pants" else a.ports[2]
        cyl = (belt, other) if a.kind == "pants" else (other, belt)
        self._regroup(f"{name} {site}", [a.id, dp.id], [Piece(a.id, "cylinder", cyl)], {k: ()}, {})
        return a.id

    def _unitor_inv(self, name: str, site: str, leg: int, kind: str, new: Optional[str]) -> str:
        y = self._piece(site, "cylinder")
        k = new or self.fresh("k")
        top, bottom = y.ports
        if kind == "pants":
            legs = [bottom, k] if leg == 1 else [k, bottom]
            piece = Piece(y.id, "pants", (top, *legs))
            disk = Piece(self.fresh("D"), "cup", (k,))
        else:
            legs = [top, k] if leg == 1 else [k, top]
            piece = Piece(y.id, "copants", (*legs, bottom))
            disk = Piece(self.fresh("D"), "cap", (k,))
        self._regroup(f"{name} {site}", [y.id], [piece, disk], {}, {k: ()})
        return k

    def lam(self, site: str) -> str:
        return self._unitor("lambda", site, 0)

    def rho(self, site: str) -> str:
        return self._unitor("rho", site, 1)

    def lam_inv(self, site: str, kind: str = "pants", new: Optional[str] = None) -> str:
        return self._unitor_inv("lambda-inv", site, 0, kind, new)

    def rho_inv(self, site: str, kind: str = "pants", new: Optional[str] = None) -> str:
        return self._unitor_inv("rho-inv", site, 1, kind, new)

    def split(self, cid: str, new: Optional[str] = None) -> str:
        """Insert a cylinder at ``cid``; the second attachment moves to the new circle."""
        self._circle(cid)
        d = self.diagram
        att = d.attachments[cid]
        n = new or self.fresh(cid + "_")
        pid, port = att[-1]
        p = d.pieces[pid]
        is_input = port in sm.INPUT_PORTS[p.kind]
        cyl = Piece(self.fresh("Y"), "cylinder", (cid, n) if is_input else (n, cid))
        moved = _rewire(p, cid, n, port)
        new_d = d.replace(remove_pieces=[pid], add_pieces=[moved, cyl], add_circles=[Circle(n, "internal")])
        self._regroup_push(f"split {cid}", new_d, {n: (cid,)})
        return n

    def _regroup_push(self, name: str, new: WiringDiagram, created: Mapping[str, Sequence[str]]) -> None:
        def action(s: State):
            cross = dict(s.crossing)
            for m, side in created.items():
                cross[m] = sum(s.crossing[c] for c in side) % 2
            return [(1, State(cross, s.loops))]

        self._push(name, new, action)

    def absorb(self, site: str) -> None:
        """Remove a cylinder, merging its two circles."""
        y = self._piece(site, "cylinder")
        top, bottom = y.ports
        d = self.diagram
        if top == bottom:
            self._fail(f"cylinder {site} is glued to itself")
        keep, gone = (bottom, top) if not d.circles[top].external else (top, bottom)
        if d.circles[gone].external:
            self._fail(f"cylinder {site} has two external circles")
        q, port = self._other(gone, y.id)
        qp = d.pieces[q]
        new = d.replace(remove_pieces=[y.id, q], add_pieces=[_rewire(qp, gone, keep, port)], remove_circles=[gone])

        def action(s: State):
            loops = set(s.loops)
            if gone in loops:
                loops.discard(gone)
                loops ^= {keep}
            cross = {c: v for c, v in s.crossing.items() if c != gone}
            return [(1, State(cross, frozenset(loops)))]

        self._push(f"absorb {site}", new, action)

    def absorb_all(self) -> None:
        while True:
            d = self.diagram
            for pid in sorted(d.pieces):
                p = d.pieces[pid]
                if p.kind == "cylinder" and p.ports[0] != p.ports[1] and not all(
                        d.circles[c].external for c in p.ports):
                    self.absorb(pid)
                    break
            else:
                return

    def swap(self, c1: str, c2: str) -> None:
        """Exchange the positions of two external circles of the same role."""
        a, b = self._circle(c1), self._circle(c2)
        if a.role != b.role or not a.external:
            self._fail(f"swap needs two external circles on the same side, got {c1}, {c2}")
        d = self.diagram
        circles = dict(d.circles)
        circles[c1] = Circle(c1, a.role, b.index)
        circles[c2] = Circle(c2, b.role, a.index)
        self._push(f"swap {c1} {c2}", WiringDiagram(circles, d.pieces), lambda s: [(1, s)])

    # ------------------------------------------------------------ diffeomorphisms

    def twist(self, cid: str, exponent: int = 1) -> None:
        self._circle(cid)
        if exponent not in (1, -1):
            self._fail("twist exponent must be +1 or -1")
        self._push(f"twist {cid}", self.diagram, lambda s: [(1, s.add_loops([cid]) if s.crossing[cid] else s)])

    def braid(self, site: str, handedness: int = 1) -> None:
        p = self._piece(site, "pants", "copants")
        if handedness not in (1, -1):
            self._fail("braid handedness must be +1 or -1")
        if p.kind == "pants":
            b, l, r = p.ports
            swapped = Piece(p.id, "pants", (b, r, l))
        else:
            l, r, b = p.ports
            swapped = Piece(p.id, "copants", (r, l, b))
        table = self.options.table
        new = self.diagram.replace(remove_pieces=[p.id], add_pieces=[swapped])

        def action(s: State):
            key = (s.crossing[b], s.crossing[l], s.crossing[r])
            x, y = table.get(key, (0, 0))
            t = s.add_loops([l] * x + [r] * y)
            if handedness == -1:
                t = t.add_loops([c for c in (b, l, r) if s.crossing[c]])
            return [(1, t)]

        self._push(f"braid {site} {handedness:+d}", new, action)

    # ------------------------------------------------------------ surgeries

    def mu(self, cup: str, cap: str) -> None:
        """Tube a cup and a cap into a cylinder, with an orange loop along it."""
        cu = self._piece(cup, "cup")
        ca = self._piece(cap, "cap")
        t, u = cu.ports[0], ca.ports[0]
        if t == u:
            self._fail("mu needs a cup and a cap on different circles")
        new = self.diagram.replace(remove_pieces=[cup, cap], add_pieces=[Piece(cup, "cylinder", (t, u))])
        self._push(f"mu {cup} {cap}", new, lambda s: [(1, s), (1, s.add_loops([t]))])

    def mu_dag(self, site: str) -> str:
        """Cut a cylinder across its core; the upper side gets a cup, the lower a cap."""
        y = self._piece(site, "cylinder")
        t, u = y.ports
        if t == u:
            self._fail(f"cylinder {site} is glued to itself")
        cap_id = self.fresh("D")
        new = self.diagram.replace(remove_pieces=[site], add_pieces=[Piece(site, "cup", (t,)), Piece(cap_id, "cap", (u,))])
        self._push(f"mu-dag {site}", new, lambda s: [] if s.crossing[t] else [(1, s)])
        return cap_id

    def cut(self, cid: str, new: Optional[str] = None) -> str:
        """Remove the annulus around internal circle ``cid`` and cap both sides."""
        c = self._circle(cid)
        if c.external:
            self._fail(f"cannot cut external circle {cid}")
        d = self.diagram
        (p, i), (q, j) = d.attachments[cid]
        if i in sm.INPUT_PORTS[d.pieces[p].kind] and j not in sm.INPUT_PORTS[d.pieces[q].kind]:
            (p, i), (q, j) = (q, j), (p, i)
        n = new or self.fresh(cid + "_")
        lower = _rewire(d.pieces[q], cid, n, j) if p != q else _rewire(d.pieces[p], cid, n, j)
        remove = [q] if p != q else [p]
        upper_disk = "cup" if i not in sm.INPUT_PORTS[d.pieces[p].kind] else "cap"
        lower_disk = "cap" if upper_disk == "cup" else "cup"
        add = [lower, Piece(self.fresh("D"), upper_disk, (cid,)), Piece(self.fresh("E"), lower_disk, (n,))]
        new_d = d.replace(remove_pieces=remove, add_pieces=add, add_circles=[Circle(n, "internal")])

        def action(s: State):
            if s.crossing[cid]:
                return []
            return [(1, State({**s.crossing, n: 0}, s.loops - {cid}))]

        self._push(f"cut {cid}", new_d, action)
        return n

    def eta(self, y1: str, y2: str, new: Optional[str] = None) -> str:
        """Join two cylinders into copants over pants through a new middle circle."""
        a, b = self._piece(y1, "cylinder"), self._piece(y2, "cylinder")
        if y1 == y2:
            self._fail("eta needs two different cylinders")
        (x1, z1), (x2, z2) = a.ports, b.ports
        m = new or self.fresh("m")
        add = [Piece(y1, "copants", (x1, x2, m)), Piece(y2, "pants", (m, z1, z2))]
        new_d = self.diagram.replace(remove_pieces=[y1, y2], add_pieces=add, add_circles=[Circle(m, "internal")])

        def action(s: State):
            t = s.with_crossing({m: (s.crossing[x1] + s.crossing[x2]) % 2})
            return [(1, t), (1, t.add_loops([x1, z1]))]

        self._push(f"eta {y1} {y2}", new_d, action)
        return m

    def eta_dag(self, site: str) -> tuple[str, str]:
        """Cut copants ``site`` and the pants below it back into two cylinders."""
        k = self._piece(site, "copants")
        x1, x2, m = k.ports
        p = self._attached(m, site, ["pants"])
        if p.ports[0] != m:
            self._fail(f"belt of {site} does not feed a pants belt")
        _, z1, z2 = p.ports
        add = [Piece(site, "cylinder", (x1, z1)), Piece(p.id, "cylinder", (x2, z2))]
        new_d = self.diagram.replace(remove_pieces=[site, p.id], add_pieces=add, remove_circles=[m])

        def action(s: State):
            if (s.crossing[x1] + s.crossing[z1]) % 2:
                return []
            loops = set(s.loops)
            if m in loops:
                loops.discard(m)
                loops ^= {x1, x2}
            cross = {c: v for c, v in s.crossing.items() if c != m}
            return [(1, State(cross, frozenset(loops)))]

        self._push(f"eta-dag {site}", new_d, action)
        return site, p.id

    def epsilon_dag(self, site: str, new: Optional[tuple[str, str]] = None) -> tuple[str, str]:
        """Replace a cylinder by pants over copants, with an orange loop through the hole."""
        y = self._piece(site, "cylinder")
        t, u = y.ports
        if t == u:
            self._fail(f"cylinder {site} is glued to itself")
        l, r = new or (self.fresh("l"), self.fresh("r"))
        kid = self.fresh("K")
        add = [Piece(site, "pants", (t, l, r)), Piece(kid, "copants", (l, r, u))]
        new_d = self.diagram.replace(remove_pieces=[site], add_pieces=add,
                                     add_circles=[Circle(l, "internal"), Circle(r, "internal")])

        def action(s: State):
            e = s.crossing[t]
            first = s.with_crossing({l: e, r: 0})
            return [(1, first), (1, s.with_crossing({l: 1 - e, r: 1}))]

        self._push(f"epsilon-dag {site}", new_d, action)
        return l, r

    def epsilon(self, site: str) -> None:
        """Collapse pants ``site`` and the copants on both its legs into a cylinder."""
        p = self._piece(site, "pants")
        t, l, r = p.ports
        k = self._attached(l, site, ["copants"])
        if k.ports[:2] != (l, r):
            self._fail(f"legs of {site} do not both feed the legs of {k.id}")
        u = k.ports[2]
        new_d = self.diagram.replace(remove_pieces=[site, k.id], add_pieces=[Piece(site, "cylinder", (t, u))],
                                     remove_circles=[l, r])
        leg = self.options.epsilon_curve == "leg"

        def action(s: State):
            hl, hr = l in s.loops, r in s.loops
            if leg:
                if s.crossing[l]:
                    return []
                add = [t] if hr else []
            else:
                if hl != hr:
                    return []
                add = [t] if hl else []
            cross = {c: v for c, v in s.crossing.items() if c not in (l, r)}
            return [(1, State(cross, (s.loops - {l, r}).symmetric_difference(add)))]

        self._push(f"epsilon {site}", new_d, action)

    def birth(self, new: Optional[str] = None) -> str:
        s = new or self.fresh("s")
        add = [Piece(self.fresh("cap"), "cap", (s,)), Piece(self.fresh("cup"), "cup", (s,))]
        new_d = self.diagram.replace(add_pieces=add, add_circles=[Circle(s, "internal")])
        c = self.options.nu_scalar
        self._push("birth", new_d, lambda st: [(c, st.with_crossing({s: 0}))])
        return s

    def death(self, site: Optional[str] = None) -> None:
        """Remove a closed genus-0 component (the one containing piece ``site``)."""
        d = self.diagram
        comps = list(zip(d.components(), d.genus_table()))
        choice = None
        for (ps, cs), (g, n) in comps:
            if (site is None or site in ps or site in cs) and g == 0 and n == 0:
                choice = (ps, cs)
                break
        if choice is None:
            self._fail(f"no sphere component at {site}")
        ps, cs = choice
        new_d = d.replace(remove_pieces=ps, remove_circles=cs)
        self._push(f"death {site or ''}".strip(), new_d,
                   lambda st: [(1, State({c: v for c, v in st.crossing.items() if c not in cs}, st.loops - cs))])

    def split_cylinder(self, cid: str) -> str:
        """Split ``cid`` and return the id of the new cylinder."""
        before = set(self.diagram.pieces)
        self.split(cid)
        return (set(self.diagram.pieces) - before).pop()

    # ------------------------------------------------------------ Frobeniusators

    def phi_left(self, site: str) -> None:
        """Pants A(a; p, q) over copants C(q, x; c) to copants(a, x; m) over pants(m; p, c)."""
        a = self._piece(site, "pants")
        c = self._attached(a.ports[2], site, ["copants"])
        if c.ports[0] != a.ports[2]:
            self._fail(f"right leg of {site} does not feed the left leg of a copants")
        ya = self.split_cylinder(a.ports[0])
        yx = self.split_cylinder(self._piece(c.id).ports[1])
        self.eta(ya, yx)
        self.alpha(yx)
        self.epsilon(site)
        self.absorb_all()

    def phi_left_inv(self, site: str) -> None:
        f = self._piece(site, "copants")
        p = self._attached(f.ports[2], site, ["pants"])
        y = self.split_cylinder(p.ports[2])
        self.epsilon_dag(y)
        self.alpha_inv(p.id)
        self.eta_dag(site)
        self.absorb_all()

    def phi_right(self, site: str) -> None:
        """Pants A(a; q, p) over copants C(x, q; c) to copants(x, a; m) over pants(m; c, p)."""
        a = self._piece(site, "pants")
        c = self._attached(a.ports[1], site, ["copants"])
        if c.ports[1] != a.ports[1]:
            self._fail(f"left leg of {site} does not feed the right leg of a copants")
        ya = self.split_cylinder(a.ports[0])
        yx = self.split_cylinder(self._piece(c.id).ports[0])
        self.eta(yx, ya)
        self.alpha_inv(ya)
        self.epsilon(site)
        self.absorb_all()

    def phi_right_inv(self, site: str) -> None:
        f = self._piece(site, "copants")
        p = self._attached(f.ports[2], site, ["pants"])
        y = self.split_cylinder(p.ports[1])
        self.epsilon_dag(y)
        self.alpha(p.id)
        self.eta_dag(site)
        self.absorb_all()

    def result(self) -> LinearMap:
        return self.map

    def scalar(self) -> Fraction:
        return self.map.scalar()



# ---------------------------------------------------------------- named generators

NAMED = {
    "alpha": lambda ev, site, **kw: ev.alpha(site, **kw),
    "alpha-inv": lambda ev, site, **kw: ev.alpha_inv(site, **kw),
    "lambda": lambda ev, site: ev.lam(site),
    "lambda-inv": lambda ev, site, **kw: ev.lam_inv(site, **kw),
    "rho": lambda ev, site: ev.rho(site),
    "rho-inv": lambda ev, site, **kw: ev.rho_inv(site, **kw),
    "beta": lambda ev, site: ev.braid(site, 1),
    "beta-inv": lambda ev, site: ev.braid(site, -1),
    "theta": lambda ev, circle: ev.twist(circle, 1),
    "theta-inv": lambda ev, circle: ev.twist(circle, -1),
    "eta": lambda ev, a, b, **kw: ev.eta(a, b, **kw),
    "eta-dag": lambda ev, site: ev.eta_dag(site),
    "epsilon": lambda ev, site: ev.epsilon(site),
    "epsilon-dag": lambda ev, site, **kw: ev.epsilon_dag(site, **kw),
    "mu": lambda ev, cup, cap: ev.mu(cup, cap),
    "mu-dag": lambda ev, site: ev.mu_dag(site),
    "nu": lambda ev, **kw: ev.birth(**kw),
    "nu-dag": lambda ev, site=None: ev.death(site),
}


def named_generator(name: str, *sites: str, **kw):
    """A one-step program applying generator ``name`` at the given sites."""
    if name not in NAMED:
        raise KeyError(f"unknown generator {name!r}")
    fn = NAMED[name]
    return lambda ev: fn(ev, *sites, **kw)


# ---------------------------------------------------------------- program text


def parse_labels(text: str, d: WiringDiagram) -> dict[str, int]:
    """``t=B1,u=B0`` by name, ``B1,B0`` in external order, or ``-`` for all B0."""
    text = text.strip()
    if text in ("", "-"):
        return {}
    out = {}
    parts = [p for p in text.split(",") if p]
    ext = d.externals
    for k, part in enumerate(parts):
        name, sep, val = part.partition("=")
        if not sep:
            name, val = (ext[k] if k < len(ext) else None), part
        if name not in d.circles or not d.circles[name].external:
            raise ValueError(f"label on unknown external circle: {part!r}")
        if val not in ("B0", "B1"):
            raise ValueError(f"labels are B0 or B1, got {val!r}")
        out[name] = int(val[1])
    return out


@dataclass
class Program:
    diagram: WiringDiagram
    labels: dict
    lines: list  # (line number, tokens)

    def run(self, options: Optional[Options] = None) -> Evaluator:
        ev = Evaluator(self.diagram, self.labels, options)
        for step, (lineno, toks) in enumerate(self.lines):
            try:
                _dispatch(ev, toks)
            except ProgramError as exc:
                raise ProgramError(step, f"line {lineno}: {exc}") from None
            except (KeyError, ValueError, sm.DiagramError) as exc:
                raise ProgramError(step, f"line {lineno}: {exc}") from None
        return ev


class ProgramParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


KEYWORDS = ("relabel", "twist", "braid", "tube", "cut", "birth", "death", "split", "absorb")


def parse_program(text: str, load_diagram=None) -> Program:
    """Parse a program; ``load_diagram(path)`` returns (diagram, labels) for the header."""
    lines = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        try:
            toks = shlex.split(line)
        except ValueError as exc:
            raise ProgramParseError(lineno, col, str(exc)) from None
        if header is None:
            if toks[0] != "space" or len(toks) not in (2, 3):
                raise ProgramParseError(lineno, col, "expected header 'space <diagram-file> <labels>'")
            if toks[1] == "empty":
                d, file_labels = WiringDiagram({}, {}), {}
            else:
                if load_diagram is None:
                    raise ProgramParseError(lineno, col, "no diagram loader available")
                try:
                    d, file_labels = load_diagram(toks[1])
                except sm.DiagramParseError as exc:
                    raise ProgramParseError(exc.line, exc.column, f"in {toks[1]}: {exc}") from None
                except OSError as exc:
                    raise ProgramParseError(lineno, col, f"cannot read {toks[1]}: {exc}") from None
            labels = dict(file_labels)
            try:
                labels.update(parse_labels(toks[2] if len(toks) == 3 else "", d))
            except ValueError as exc:
                raise ProgramParseError(lineno, col, str(exc)) from None
            header = (d, labels)
            continue
        if toks[0] not in KEYWORDS:
            raise ProgramParseError(lineno, col, f"unknown operation {toks[0]!r}")
        lines.append((lineno, toks))
    if header is None:
        raise ProgramParseError(1, 1, "missing 'space' header")
    return Program(header[0], header[1], lines)


def _split_opts(toks: Sequence[str]) -> tuple[list[str], dict[str, str]]:
    args, opts = [], {}
    for t in toks:
        k, sep, v = t.partition("=")
        if sep:
            opts[k] = v
        else:
            args.append(t)
    return args, opts


def _sign(args: Sequence[str], k: int) -> int:
    if len(args) <= k:
        return 1
    if args[k] not in ("+1", "-1", "1"):
        raise ValueError(f"expected +1 or -1, got {args[k]!r}")
    return -1 if args[k] == "-1" else 1


def _dispatch(ev: Evaluator, toks: Sequence[str]) -> None:
    op = toks[0]
    args, opts = _split_opts(toks[1:])
    d = ev.diagram
    if op == "relabel":
        kind = args[0]
        if kind == "swap":
            ev.swap(args[1], args[2])
        elif kind in ("alpha", "alpha-inv"):
            NAMED[kind](ev, args[1], new=opts.get("new"))
        elif kind in ("lambda", "rho"):
            NAMED[kind](ev, args[1])
        elif kind in ("lambda-inv", "rho-inv"):
            NAMED[kind](ev, args[1], kind=opts.get("kind", "pants"), new=opts.get("new"))
        else:
            raise ValueError(f"unknown relabel kind {kind!r}")
    elif op == "twist":
        ev.twist(args[0], _sign(args, 1))
    elif op == "braid":
        ev.braid(args[0], _sign(args, 1))
    elif op == "split":
        ev.split(args[0], new=opts.get("new"))
    elif op == "absorb":
        ev.absorb(args[0]) if args else ev.absorb_all()
    elif op == "birth":
        ev.birth(new=opts.get("new"))
    elif op == "death":
        ev.death(args[0] if args else None)
    elif op == "tube":
        a, b = args
        pa, pb = ev._piece(a), ev._piece(b)
        if pa.kind == "cup" and pb.kind == "cap":
            ev.mu(a, b)
        elif a == b and pa.kind == "cylinder":
            new = opts.get("new")
            ev.epsilon_dag(a, tuple(new.split(",")) if new else None)
        elif pa.kind == pb.kind == "cylinder":
            ev.eta(a, b, new=opts.get("new"))
        else:
            raise ValueError(f"cannot tube a {pa.kind} with a {pb.kind}")
    elif op == "cut":
        _cut(ev, args[0], opts.get("kind"))
    else:
        raise ValueError(f"unknown operation {op!r}")


def _cut(ev: Evaluator, target: str, kind: Optional[str]) -> None:
    d = ev.diagram
    if target in d.pieces:
        p = d.pieces[target]
        if p.kind == "cylinder":
            ev.mu_dag(target)
        elif p.kind == "copants":
            ev.eta_dag(target)
        elif p.kind == "pants":
            ev.epsilon(target)
        else:
            raise ValueError(f"cannot cut a {p.kind}")
        return
    c = ev._circle(target)
    if kind in (None, "auto"):
        kind = "annulus"
        if not c.external:
            (p, i), (q, j) = d.attachments[target]
            kp, kq = d.pieces[p].kind, d.pieces[q].kind
            if {kp, kq} == {"pants", "copants"}:
                pants = d.pieces[p] if kp == "pants" else d.pieces[q]
                copants = d.pieces[q] if kp == "pants" else d.pieces[p]
                if pants.ports[0] == target and copants.ports[2] == target:
                    kind = "eta"
                elif pants.ports[1:] == copants.ports[:2]:
                    kind = "epsilon"
    if kind == "eta":
        copants = next(d.pieces[p] for p, _ in d.attachments[target] if d.pieces[p].kind == "copants")
        ev.eta_dag(copants.id)
    elif kind == "epsilon":
        pants = next(d.pieces[p] for p, _ in d.attachments[target] if d.pieces[p].kind == "pants")
        ev.epsilon(pants.id)
    elif kind == "annulus":
        ev.cut(target)
    else:
        raise ValueError(f"unknown cut kind {kind!r}")


def evaluate(program: Program, options: Optional[Options] = None) -> LinearMap:
    return program.run(options).map
