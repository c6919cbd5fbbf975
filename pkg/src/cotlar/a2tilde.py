"""The affine group of type Ã₂ as a lattice extended by a finite group.

With generators ``s, t, u`` (all pairwise braid relations of length 3) the
elements ``alpha = usts`` and ``beta = sust`` commute and generate a rank-two
free abelian normal subgroup ``W0`` of index 6. This module discovers coset
representatives ``w_0 = e, ..., w_5`` by scanning a ball, and from a handful
of short word computations builds an exact model in which every element is a
triple ``(i, a, b)`` standing for ``w_i · alpha^a · beta^b``. The model makes
long elements (far beyond the word-length cap) cheap: lengths come from a BFS
of its Cayley graph, which is small because the group grows quadratically.

Every table entry of the model is an identity checked at word level, and the
model is cross-validated against the word-level reducer in the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, Word
from .errors import DecompositionFailed, RepDiscoveryFailed, WordTooLong, WrongSystem
from .multipliers import Symbol

# (i, a, b): coset index and lattice coordinates
ModelElement = tuple[int, int, int]

WORD_TABLE_BOUND = 3


def _stu(system: CoxeterSystem) -> tuple[int, int, int]:
    if {"s", "t", "u"} <= set(system.generators):
        return system.index("s"), system.index("t"), system.index("u")
    return 0, 1, 2


def _check_a2tilde(system: CoxeterSystem):
    if system.n != 3 or any(
        system.m(i, j) != 3 for i in range(3) for j in range(3) if i != j
    ):
        raise WrongSystem("expected three generators with every off-diagonal entry equal to 3")


def _power(system: CoxeterSystem, x: Word, k: int) -> Word:
    step = x if k >= 0 else system.invert(x)
    out = ()
    for _ in range(abs(k)):
        out = system._mul_unchecked(out, step)
    return out


class LatticeModel:
    """Exact right action of Ã₂ on triples ``(i, a, b)``.

    ``steps[i][x] = (j, (c, d))`` records ``w_i·x = w_j·alpha^c·beta^d`` and
    ``conj[x]`` is the integer matrix of ``v -> x·v·x`` on lattice
    coordinates, so ``(i, v)·x = (j, tau + conj[x]·v)``.
    """

    def __init__(self, system: CoxeterSystem, reps: Sequence[Word], steps, conj):
        self.system = system
        self.reps = list(reps)
        self.steps = steps
        self.conj = conj
        self._dist: dict[ModelElement, int] = {(0, 0, 0): 0}
        self._word: dict[ModelElement, Word] = {(0, 0, 0): ()}
        self._frontier: list[ModelElement] = [(0, 0, 0)]
        self._radius = 0

    def times_gen(self, e: ModelElement, x: int) -> ModelElement:
        i, a, b = e
        j, (c, d) = self.steps[i][x]
        (p, q), (r, t) = self.conj[x]
        return (j, c + p * a + q * b, d + r * a + t * b)

    def from_word(self, word: Iterable[int], start: ModelElement = (0, 0, 0)) -> ModelElement:
        e = start
        for x in word:
            e = self.times_gen(e, x)
        return e

    def left_times_gen(self, x: int, e: ModelElement) -> ModelElement:
        i, a, b = e
        j, c, d = self.from_word(self.reps[i], self.from_word((x,)))
        return (j, c + a, d + b)

    def _grow(self):
        nxt = []
        for e in self._frontier:
            w = self._word[e]
            for x in range(self.system.n):
                f = self.times_gen(e, x)
                if f not in self._dist:
                    self._dist[f] = self._radius + 1
                    self._word[f] = w + (x,)
                    nxt.append(f)
        self._frontier = nxt
        self._radius += 1

    def grow_to(self, radius: int):
        while self._radius < radius:
            self._grow()

    def length(self, e: ModelElement) -> int:
        while e not in self._dist:
            self._grow()
        return self._dist[e]

    def word(self, e: ModelElement) -> Word:
        """ShortLex-least word: BFS visits parents in ShortLex order and
        generators in index order."""
        self.length(e)
        return self._word[e]

    def sphere_sizes(self, radius: int) -> list[int]:
        self.grow_to(radius)
        sizes = [0] * (radius + 1)
        for d in self._dist.values():
            if d <= radius:
                sizes[d] += 1
        return sizes

    def positive_side(self, s: int, e: ModelElement) -> bool:
        return self.length(e) < self.length(self.left_times_gen(s, e))


@dataclass
class A2TildeSubgroup:
    system: CoxeterSystem
    alpha: Word
    beta: Word
    coset_reps: list[Word]
    ab_bound: int | None = None
    generators: tuple[int, int, int] = (0, 1, 2)
    word_table: dict[Word, tuple[int, int]] = field(default_factory=dict, repr=False)
    model: LatticeModel | None = field(default=None, repr=False)

    def coordinates(self, g: Word) -> ModelElement:
        """``(i, a, b)`` with ``g = w_i·alpha^a·beta^b``."""
        return self.model.from_word(g)

    def lattice_word(self, a: int, b: int) -> Word:
        """Canonical word of ``alpha^a·beta^b`` (no length cap applies)."""
        return self.model.word((0, a, b))


def _word_table(system, alpha, beta, bound) -> dict[Word, tuple[int, int]]:
    table = {}
    for a in range(-bound, bound + 1):
        row = _power(system, alpha, a)
        for b in range(-bound, bound + 1):
            table.setdefault(system._mul_unchecked(row, _power(system, beta, b)), (a, b))
    return table


def a2tilde_subgroup(
    system: CoxeterSystem,
    scan_radius: int = 5,
    ab_bound: int | None = None,
    scan_order: Sequence[Word] | None = None,
    coset_reps: Sequence[Word] | None = None,
) -> A2TildeSubgroup:
    """Build ``alpha``, ``beta``, the six coset representatives and the model.

    The scanned elements (``ball(scan_radius)``, or ``scan_order``) are
    grouped by coset and each coset is represented by its ShortLex-least
    member, so the result does not depend on the scan order. Explicit
    ``coset_reps`` (identity first, one per coset) replace the discovered
    ones in the factorization ``g = w_i·h``; the internal model always uses
    the ShortLex-least representatives.
    """
    _check_a2tilde(system)
    s, t, u = _stu(system)
    alpha = system.reduce((u, s, t, s))
    beta = system.reduce((s, u, s, t))
    if system._mul_unchecked(alpha, beta) != system._mul_unchecked(beta, alpha):
        raise WrongSystem("alpha and beta do not commute")
    table = _word_table(system, alpha, beta, WORD_TABLE_BOUND)
    limit = max(len(w) for w in table)

    def lookup(x: Word):
        if len(x) > limit:
            raise RepDiscoveryFailed(f"lattice lookup of length {len(x)} beyond table")
        return table.get(x)

    elements = list(scan_order) if scan_order is not None else system.ball(scan_radius)
    if () not in elements:
        elements.insert(0, ())
    leaders: list[Word] = []
    groups: list[list[Word]] = []
    for g in elements:
        for leader, members in zip(leaders, groups):
            if lookup(system._mul_unchecked(system.invert(leader), g)) is not None:
                members.append(g)
                break
        else:
            leaders.append(g)
            groups.append([g])
    reps = sorted((min(m, key=system.sort_key) for m in groups), key=system.sort_key)
    if len(reps) != 6 or reps[0] != ():
        raise RepDiscoveryFailed(f"found {len(reps)} cosets of the lattice subgroup, expected 6")

    def locate(y: Word):
        hits = []
        for j, r in enumerate(reps):
            v = lookup(system._mul_unchecked(system.invert(r), y))
            if v is not None:
                hits.append((j, v))
        if len(hits) != 1:
            raise RepDiscoveryFailed(f"element {system.format(y)} lies in {len(hits)} cosets")
        return hits[0]

    steps = [[locate(system._mul_unchecked(r, (x,))) for x in range(3)] for r in reps]
    conj = []
    for x in range(3):
        cols = []
        for gen in (alpha, beta):
            v = lookup(system._mul_unchecked(system._mul_unchecked((x,), gen), (x,)))
            if v is None:
                raise RepDiscoveryFailed("conjugate of a lattice generator left the lattice")
            cols.append(v)
        conj.append(((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1])))
    model = LatticeModel(system, reps, steps, conj)
    _check_relations(system, model)
    sub = A2TildeSubgroup(system, alpha, beta, reps, ab_bound, (s, t, u), table, model)
    if coset_reps is not None:
        custom = [tuple(r) for r in coset_reps]
        if len(custom) != 6 or custom[0] != () or len({sub.coordinates(r)[0] for r in custom}) != 6:
            raise RepDiscoveryFailed("explicit representatives must be e followed by one per coset")
        sub.coset_reps = custom
    if sub.coordinates(alpha) != (0, 1, 0) or sub.coordinates(beta) != (0, 0, 1):
        raise RepDiscoveryFailed("model does not send alpha, beta to the lattice basis")
    return sub


def _check_relations(system: CoxeterSystem, model: LatticeModel):
    # The generator maps are affine in the lattice part, so testing each
    # relation on three affinely independent points per coset proves it.
    points = [(i, a, b) for i in range(6) for a, b in ((0, 0), (1, 0), (0, 1))]
    for x, y in product(range(3), repeat=2):
        rel = (x, x) if x == y else (x, y) * system.m(x, y)
        for p in points:
            if model.from_word(rel, p) != p:
                raise RepDiscoveryFailed("lattice model violates a Coxeter relation")


def z2_membership(sub: A2TildeSubgroup, g: Word) -> tuple[int, int] | None:
    """``(a, b)`` with ``g = alpha^a·beta^b``, or None when ``g`` is not in the
    lattice subgroup.

    The search bound ``|a|, |b| <= l(g)`` (or ``ab_bound``) is asserted on
    the answer.
    """
    if len(g) > sub.system.max_word_len:
        raise WordTooLong(f"l(g)={len(g)} exceeds max_word_len={sub.system.max_word_len}")
    if len(g) % 2:
        return None
    i, a, b = sub.coordinates(g)
    if i != 0:
        return None
    bound = len(g) if sub.ab_bound is None else sub.ab_bound
    if abs(a) > bound or abs(b) > bound:
        raise DecompositionFailed(f"coordinates ({a},{b}) exceed the search bound {bound}")
    return (a, b)


def word_table_membership(sub: A2TildeSubgroup, g: Word) -> tuple[int, int] | None:
    """Independent route: look ``g`` up among the words of ``alpha^a·beta^b``,
    ``|a|, |b| <= 3``, computed by word-level multiplication."""
    return sub.word_table.get(g)


def factor(sub: A2TildeSubgroup, g: Word) -> tuple[int, tuple[int, int]]:
    """``(i, (a, b))`` with ``g = w_i·alpha^a·beta^b`` by testing ``w_i⁻¹g``
    against each representative."""
    system = sub.system
    hits = []
    for i, r in enumerate(sub.coset_reps):
        try:
            v = z2_membership(sub, system.multiply(system.invert(r), g))
        except WordTooLong as exc:
            raise DecompositionFailed(str(exc)) from exc
        if v is not None:
            hits.append((i, v))
    if len(hits) != 1:
        raise DecompositionFailed(f"{system.format(g)} factors through {len(hits)} representatives")
    return hits[0]


def lattice_symbol(sub: A2TildeSubgroup, s: int | None = None) -> Symbol:
    """Half-space symbol of ``s`` restricted to the lattice, on pairs ``(a, b)``."""
    s = sub.generators[0] if s is None else s
    model = sub.model

    def rule(v):
        return 1 if model.positive_side(s, (0, v[0], v[1])) else -1

    return Symbol(rule, {"kind": "lattice_halfspace", "generator": sub.system.generators[s]})


def extension_symbol(sub: A2TildeSubgroup, s: int | None = None) -> Symbol:
    """Extend the lattice symbol to all of Ã₂ by ``m(w_i·h) = m(h)``."""
    inner = lattice_symbol(sub, s)

    def rule(g):
        _, v = factor(sub, g)
        return inner(v)

    desc = dict(inner.descriptor)
    desc.update(kind="extension", coset_reps=[sub.system.format(r) for r in sub.coset_reps])
    return Symbol(rule, desc)


class Lattice:
    """The lattice subgroup as a group of integer pairs under addition.

    ``ball(R)`` is the box ``|a|, |b| <= R``.
    """

    identity = (0, 0)

    def multiply(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def invert(self, x):
        return (-x[0], -x[1])

    def ball(self, radius: int):
        pts = [(a, b) for a in range(-radius, radius + 1) for b in range(-radius, radius + 1)]
        return sorted(pts, key=self.sort_key)

    @staticmethod
    def sort_key(x):
        return (max(abs(x[0]), abs(x[1])), x)

    def format(self, x) -> str:
        return f"α^{x[0]}β^{x[1]}"

    def to_json(self, x):
        return list(x)


def on_diagonal(v) -> bool:
    """Membership in the cyclic subgroup generated by ``alpha·beta``."""
    return v[0] == v[1]
