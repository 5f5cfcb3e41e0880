"""Closed 3-manifold invariants: lens spaces, mapping tori, and a bundle-counting oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Optional, Sequence

import numpy as np

from . import gf2
from . import mcg
from .generators import Evaluator, Options
from .spaces import State
from .surface import WiringDiagram

EMPTY = WiringDiagram({}, {})


class NotCoprime(ValueError):
    pass


@dataclass(frozen=True)
class GluingMatrix:
    """[[q, r], [p, s]] reduced mod 2, remembering the integer completion."""

    p: int
    q: int
    r: int
    s: int

    @property
    def matrix(self) -> np.ndarray:
        return gf2.as_matrix([[self.q, self.r], [self.p, self.s]])

    @property
    def determinant(self) -> int:
        return self.q * self.s - self.p * self.r


def sl2_completion(p: int, q: int) -> GluingMatrix:
    """Integers r, s with q*s - p*r = 1, taking the least nonnegative r.

    When q = 0 (so p = 1 or -1) the equation forces r = -p, which is
    negative for p = 1; we then take r = 1, s = 0, whose determinant -p is
    still 1 mod 2.
    """
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {gcd(p, q)}")
    if q == 0:
        return GluingMatrix(p, q, 1, 0)
    r = 0
    while (1 + p * r) % q:
        r += 1
    return GluingMatrix(p, q, r, (1 + p * r) // q)


def torus_pushforward(ev: Evaluator, pants: str, matrix: np.ndarray) -> None:
    """Act on the handle pants(s; l, r) over copants(l, r; s') of a torus by a GF(2) matrix.

    The class is c_a * (cycle through l and r) + c_b * (loop around l);
    the column vector (c_a, c_b) is multiplied by ``matrix``.
    """
    p = ev.diagram.pieces[pants]
    _, l, r = p.ports
    m = gf2.as_matrix(matrix)

    def action(st: State):
        ca = st.crossing[l]
        cb = int(l in st.loops) ^ int(r in st.loops)
        na, nb = (int(x) for x in gf2.matvec(m, [ca, cb]))
        loops = st.loops - {l, r}
        if nb:
            loops = loops | {l}
        return [(1, State({**st.crossing, l: na, r: na}, frozenset(loops)))]

    ev._push(f"pushforward {pants}", ev.diagram, action)


def lens_evaluator(p: int, q: int, completion: Optional[GluingMatrix] = None,
                   options: Optional[Options] = None) -> Evaluator:
    g = completion or sl2_completion(p, q)
    if (g.p, g.q) != (p, q):
        raise ValueError("completion does not match (p, q)")
    if abs(g.determinant) != 1:
        raise ValueError(f"completion has determinant {g.determinant}")
    ev = Evaluator(EMPTY, options=options)
    s = ev.birth()
    y = ev.split_cylinder(s)
    ev.epsilon_dag(y)
    torus_pushforward(ev, y, g.matrix)
    ev.epsilon(y)
    ev.absorb_all()
    ev.death()
    return ev


def lens_invariant(p: int, q: int, completion: Optional[GluingMatrix] = None) -> Fraction:
    return lens_evaluator(p, q, completion).scalar()


def closed_invariant(program) -> Fraction:
    """Run ``program(ev)`` from the empty surface; the result must end on the empty surface."""
    ev = Evaluator(EMPTY)
    program(ev)
    if ev.diagram.circles or ev.diagram.pieces:
        raise ValueError("program does not end on the empty surface")
    return ev.scalar()


def mapping_torus_trace(g: int, word: Sequence[mcg.Letter]) -> Fraction:
    m = mcg.rep_matrix(g, word)
    return sum((m.entry(i, i) for i in range(m.shape[0])), Fraction(0))


# ---------------------------------------------------------------- oracle


def count_homs_to_z2(generators: int, relations: Sequence[Sequence[int]]) -> int:
    """|Hom(G, Z/2)| for G abelianized as generators modulo integer relations, by brute force."""
    count = 0
    for x in product((0, 1), repeat=generators):
        if all(sum(a * b for a, b in zip(rel, x)) % 2 == 0 for rel in relations):
            count += 1
    return count


def bundle_count(generators: int, relations: Sequence[Sequence[int]]) -> Fraction:
    return Fraction(count_homs_to_z2(generators, relations), 2)


def lens_oracle(p: int) -> Fraction:
    """pi_1 L(p, q) = Z/p (Z when p = 0)."""
    return bundle_count(1, [[p]])


def torus_power_oracle(k: int) -> Fraction:
    return bundle_count(k, [])


def mapping_torus_oracle(g: int, word: Sequence[mcg.Letter]) -> Fraction:
    """pi_1 of the mapping torus abelianizes to Z^(2g)/(phi - 1) + Z."""
    m = mcg.word_matrix(g, word).astype(int)
    rels = [list(col) + [0] for col in (m - np.eye(2 * g, dtype=int)).T]
    return bundle_count(2 * g + 1, rels)
