"""Mapping class group actions on closed-surface string-net spaces.

Twists act on H(Sigma_g) by permuting basis classes through the mod-2
transvection of the twist curve.  Symplectic coordinates are ordered
(a1, b1, ..., ag, bg); on the chain diagram ``surface(g, 0)`` the curve a_i
is the loop around leg l_i of handle i and b_i is the cycle running through
both legs of handle i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from . import gf2
from . import spaces as sp
from . import surface as sm
from .generators import Evaluator
from .spaces import LinearMap, State, StringNetSpace

Coords = Callable[[State], tuple[int, ...]]


class GenusMismatch(ValueError):
    pass


class ClosureOverflow(RuntimeError):
    pass


def pairing(x, y) -> int:
    x, y = gf2.as_bits(x), gf2.as_bits(y)
    if x.shape != y.shape or x.shape[0] % 2:
        raise GenusMismatch("vectors must share an even length")
    return int((x[0::2] & y[1::2]).sum() + (x[1::2] & y[0::2]).sum()) % 2


def basis_vector(g: int, name: str) -> np.ndarray:
    """``a3`` or ``b1`` as a vector of GF(2)^(2g)."""
    kind, i = name[0], int(name[1:])
    if kind not in "ab" or not 1 <= i <= g:
        raise ValueError(f"no curve {name} in genus {g}")
    v = np.zeros(2 * g, dtype=np.uint8)
    v[2 * (i - 1) + (kind == "b")] = 1
    return v


def curve(g: int, expr: str) -> np.ndarray:
    """A class such as ``a1+a2`` or a raw bit string in (a1, b1, ...) order."""
    if set(expr) <= {"0", "1"}:
        if len(expr) != 2 * g:
            raise GenusMismatch(f"bitvector {expr} has length {len(expr)}, expected {2 * g}")
        return gf2.as_bits([int(ch) for ch in expr])
    v = np.zeros(2 * g, dtype=np.uint8)
    for term in expr.split("+"):
        v ^= basis_vector(g, term.strip())
    return v


def dehn_transvection(c) -> np.ndarray:
    """Matrix of x -> x + <x, c> c."""
    c = gf2.as_bits(c)
    if not c.any():
        raise ValueError("zero curve class")
    n = c.shape[0]
    m = np.eye(n, dtype=np.uint8)
    for j in range(n):
        e = np.zeros(n, dtype=np.uint8)
        e[j] = 1
        if pairing(e, c):
            m[:, j] ^= c
    return m


def humphries_defaults(g: int) -> list[np.ndarray]:
    if g == 1:
        return [curve(1, "a1"), curve(1, "b1")]
    if g == 2:
        return [curve(2, e) for e in ("a1", "b1", "a1+a2", "b2", "a2")]
    raise ValueError(f"no built-in generators for genus {g}; supply a curve table")


@dataclass(frozen=True)
class Letter:
    name: str
    vector: tuple[int, ...]
    exponent: int = 1


def parse_curve_table(text: str, g: int) -> dict[str, np.ndarray]:
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3 or toks[0] != "curve":
            raise ValueError(f"line {lineno}: expected 'curve <name> <bitvector>'")
        table[toks[1]] = curve(g, toks[2])
    return table


def default_table(g: int) -> dict[str, np.ndarray]:
    return {f"t{i}": v for i, v in enumerate(humphries_defaults(g))}


def parse_word(text: str, g: int, table: Optional[Mapping[str, np.ndarray]] = None) -> list[Letter]:
    """``t0 t1 t0^-1``; names come from ``table`` or are curve expressions like ``a1+b2``."""
    table = default_table(g) if table is None and g in (1, 2) else (table or {})
    word = []
    for tok in text.split():
        name, _, exp = tok.partition("^")
        e = int(exp) if exp else 1
        if e not in (1, -1):
            raise ValueError(f"exponent must be 1 or -1 in {tok!r}")
        v = table[name] if name in table else curve(g, name)
        if v.shape[0] != 2 * g:
            raise GenusMismatch(f"curve {name} does not live in genus {g}")
        word.append(Letter(name, tuple(int(b) for b in v), e))
    return word


def word_matrix(g: int, word: Sequence[Letter]) -> np.ndarray:
    """GF(2) action of the word; the leftmost letter acts first.  Exponents drop out mod 2."""
    m = np.eye(2 * g, dtype=np.uint8)
    for letter in word:
        if len(letter.vector) != 2 * g:
            raise GenusMismatch(f"curve {letter.name} does not live in genus {g}")
        m = gf2.matvec_mat(dehn_transvection(letter.vector), m)
    return m


def chain_coordinates(g: int) -> Coords:
    def coords(s: State) -> tuple[int, ...]:
        out = []
        for i in range(1, g + 1):
            l, r = f"l{i}", f"r{i}"
            out += [int(l in s.loops) ^ int(r in s.loops), s.crossing[l]]
        return tuple(out)
    return coords


def lift(g: int, m: np.ndarray, s: Optional[StringNetSpace] = None, coords: Optional[Coords] = None) -> LinearMap:
    """Permutation of basis classes induced by the symplectic map ``m``."""
    s = s or sp.space(sm.surface(g, 0))
    coords = coords or chain_coordinates(g)
    where = {}
    for i, st in enumerate(s.states()):
        where[coords(st)] = i
    if len(where) != s.dim or s.dim != 1 << (2 * g):
        raise GenusMismatch("coordinates are not a bijection on this space")
    cols = []
    for st in s.states():
        v = gf2.matvec(m, coords(st))
        cols.append({where[tuple(int(b) for b in v)]: Fraction(1)})
    return LinearMap(s, s, cols)


def rep_matrix(g: int, word: Sequence[Letter], s: Optional[StringNetSpace] = None) -> LinearMap:
    return lift(g, word_matrix(g, word), s)


def group_order(gens: Iterable[np.ndarray], cap: int = 10**6) -> int:
    """Order of the matrix group generated by ``gens`` (brute-force closure)."""
    gens = [gf2.as_matrix(x) for x in gens]
    if not gens:
        return 1
    n = gens[0].shape[0]
    start = np.eye(n, dtype=np.uint8)
    seen = {start.tobytes()}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for gm in gens:
                p = gf2.matvec_mat(gm, m)
                key = p.tobytes()
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        raise ClosureOverflow(f"group has more than {cap} elements")
                    nxt.append(p)
        frontier = nxt
    return len(seen)


def rep_group_order(g: int, word_table: Optional[Mapping[str, np.ndarray]] = None, cap: int = 10**6) -> int:
    """Order of the image of the twist representation, computed on the lifted permutation matrices."""
    curves = list((word_table or default_table(g)).values())
    s = sp.space(sm.surface(g, 0))
    perms = []
    for c in curves:
        lm = lift(g, dehn_transvection(c), s)
        perms.append(tuple(next(iter(col)) for col in lm.columns))
    ident = tuple(range(s.dim))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in perms:
                r = tuple(q[i] for i in p)
                if r not in seen:
                    seen.add(r)
                    if len(seen) > cap:
                        raise ClosureOverflow(f"group has more than {cap} elements")
                    nxt.append(r)
        frontier = nxt
    return len(seen)


# ---------------------------------------------------------------- consistency


@dataclass
class Check:
    name: str
    passed: bool


def _twist_program(d: sm.WiringDiagram, circle: str) -> LinearMap:
    ev = Evaluator(d)
    ev.twist(circle)
    return ev.map


def _chain_pair_twist(d: sm.WiringDiagram, i: int, s: StringNetSpace) -> LinearMap:
    """Regroup handles i and i+1 with an inverse Frobeniusator so that a curve around legs
    l_i and l_{i+1} becomes a circle, twist it, regroup back, and read off on the chain basis."""
    from .relations import transport

    ev = Evaluator(d)
    ev.phi_left_inv(f"K{i}")
    pants = next(p for p in ev.diagram.pieces.values() if p.kind == "pants" and p.ports[1] == f"l{i + 1}")
    ev.twist(pants.ports[2])
    ev.phi_left(pants.id)
    ev.absorb_all()
    cmap = sm.find_isomorphism(ev.diagram, d)
    return sp.compose(transport(ev.space, s, cmap), ev.map)


def theta_coordinates(s: State) -> tuple[int, ...]:
    """Genus-2 coordinates on pants P(x; y, z) over copants K(y, z; x): a1 = L_y, a2 = L_z."""
    lx, ly, lz = (int(c in s.loops) for c in "xyz")
    return (lx ^ ly, s.crossing["y"], lx ^ lz, s.crossing["z"])


def consistency_check(g: int) -> list[Check]:
    """Single-circle twist programs against the lifted transvection of the same curve."""
    out = []
    d = sm.surface(g, 0)
    s = sp.space(d)
    for i in range(1, g + 1):
        t = lift(g, dehn_transvection(basis_vector(g, f"a{i}")), s)
        for leg in (f"l{i}", f"r{i}"):
            out.append(Check(f"theta({leg}) = t(a{i})", _twist_program(d, leg).matrix_equal(t)))
    if g == 1:
        # the same chain with the roles of a and b exchanged presents the longitude as a circle
        swapped = lambda st: chain_coordinates(1)(st)[::-1]
        t = lift(1, dehn_transvection(basis_vector(1, "b1")), s, swapped)
        out.append(Check("theta(l1) = t(b1) in the exchanged basis", _twist_program(d, "l1").matrix_equal(t)))
    for i in range(1, g):
        t = lift(g, dehn_transvection(curve(g, f"a{i}+a{i + 1}")), s)
        out.append(Check(f"phi-conjugated theta = t(a{i}+a{i + 1})", _chain_pair_twist(d, i, s).matrix_equal(t)))
    if g == 2:
        th = sm.theta_genus2()
        ts = sp.space(th)
        for circle, expr in (("y", "a1"), ("z", "a2"), ("x", "a1+a2")):
            t = lift(2, dehn_transvection(curve(2, expr)), ts, theta_coordinates)
            out.append(Check(f"theta({circle}) on the theta graph = t({expr})", _twist_program(th, circle).matrix_equal(t)))
    return out
