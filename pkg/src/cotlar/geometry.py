"""Walls, half-spaces and the six ways an element can move a root.

A chamber ``hK`` of the Coxeter complex is identified with the element ``h``.
The wall of a generator ``s`` splits the chambers into the side containing the
fundamental chamber (``H+``) and the other side (``H-``); ``hK`` lies in
``H+`` exactly when ``l(h) < l(sh)``. Everything here is decided by that
length comparison, so no complex is ever built.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .coxeter import INF, CoxeterSystem, Word
from .errors import NestedConditionViolated, WordTooLong

log = logging.getLogger(__name__)

PLUS, MINUS = "+", "-"


class HalfSpaceSide(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    @property
    def sign(self) -> int:
        return 1 if self is HalfSpaceSide.POSITIVE else -1


def flip(sign: str) -> str:
    return MINUS if sign == PLUS else PLUS


class SixClass(Enum):
    """How ``g`` moves the root ``H+`` of a fixed generator.

    Each member records one defining relation ``g·H^a (= or ⊊) H^b``.
    """

    InWT = ("+", "+", False)
    InWTs = ("+", "-", False)
    NsTimesS = ("+", "+", True)
    SNsS = ("+", "-", True)
    InNs = ("-", "+", True)
    SNs = ("-", "-", True)

    def __init__(self, source, target, strict):
        self.source = source
        self.target = target
        self.strict = strict

    @property
    def relation(self) -> str:
        op = "⊊" if self.strict else "="
        return f"g·H{self.source} {op} H{self.target}"

    @property
    def side(self) -> HalfSpaceSide:
        """Side of the chamber ``gK`` for elements of this class."""
        if self in (SixClass.InWT, SixClass.NsTimesS, SixClass.InNs):
            return HalfSpaceSide.POSITIVE
        return HalfSpaceSide.NEGATIVE

    def maps_onto(self, a: str, b: str) -> bool:
        """``g·H^a = H^b``."""
        if self.strict:
            return False
        if self is SixClass.InWT:
            return a == b
        return a != b

    def strictly_inside(self, a: str, b: str) -> bool:
        """``g·H^a ⊊ H^b``."""
        return self.strict and (self.source, self.target) == (a, b)

    def strictly_contains(self, b: str, a: str) -> bool:
        """``H^b ⊊ g·H^a``, the complement of ``g·H^-a ⊊ H^-b``."""
        return self.strictly_inside(flip(a), flip(b))

    def inverse(self) -> "SixClass":
        """Class of ``g⁻¹`` given the class of ``g``."""
        if not self.strict:
            return self
        # g·H^a ⊊ H^b  <=>  H^a ⊊ g⁻¹·H^b  <=>  g⁻¹·H^-b ⊊ H^-a
        for cls in SixClass:
            if cls.strict and (cls.source, cls.target) == (flip(self.target), flip(self.source)):
                return cls
        raise AssertionError("unreachable")


def halfspace_side(system: CoxeterSystem, s: int, g: Word) -> HalfSpaceSide:
    """Side of the wall of ``s`` holding the chamber ``gK``."""
    if system.is_left_descent(s, g):
        return HalfSpaceSide.NEGATIVE
    return HalfSpaceSide.POSITIVE


def nested_offenders(system: CoxeterSystem, s: int) -> list[tuple[int, int]]:
    """Generators ``u`` with ``m(s, u)`` finite and different from 2."""
    return [
        (u, system.m(s, u))
        for u in range(system.n)
        if u != s and system.m(s, u) not in (2, INF)
    ]


def nested_condition(system: CoxeterSystem, s: int) -> bool:
    return not nested_offenders(system, s)


def _require_nested(system, s):
    bad = nested_offenders(system, s)
    if bad:
        detail = ", ".join(f"m({system.generators[s]},{system.generators[u]})={m}" for u, m in bad)
        raise NestedConditionViolated(
            f"generator {system.generators[s]!r} fails the nested condition: {detail}"
        )


def classify(system: CoxeterSystem, s: int, g: Word) -> SixClass:
    """Exact class of ``g`` relative to ``s`` from parabolic support and
    descents; needs the nested condition."""
    _require_nested(system, s)
    T = system.commuting(s)
    if system.in_parabolic(T, g):
        return SixClass.InWT
    if system.in_parabolic(T, system._mul_unchecked(g, (s,))):
        return SixClass.InWTs
    left = s in system.left_descents(g)
    right = s in system.right_descents(g)
    if left and right:
        return SixClass.SNsS
    if right:
        return SixClass.NsTimesS
    if left:
        return SixClass.SNs
    return SixClass.InNs


# which of the four intersections g·H^a ∩ H^b must be empty (and which must
# be nonempty, for strictness) for each relation
_PATTERNS = {
    SixClass.InWT: ({("+", "-"), ("-", "+")}, set()),
    SixClass.InWTs: ({("+", "+"), ("-", "-")}, set()),
    SixClass.NsTimesS: ({("+", "-")}, {("-", "+")}),
    SixClass.SNsS: ({("+", "+")}, {("-", "-")}),
    SixClass.InNs: ({("-", "-")}, {("+", "+")}),
    SixClass.SNs: ({("-", "+")}, {("+", "-")}),
}

INTERSECTIONS = (("+", "+"), ("+", "-"), ("-", "+"), ("-", "-"))


@dataclass
class InclusionWitness:
    """Finite evidence about how ``g`` moves ``H+``.

    ``relation`` is the unique relation consistent with every chamber of the
    scanned ball, certified only up to ``verified_radius``. ``witnesses`` maps
    each nonempty intersection ``g·H^a ∩ H^b`` (keyed ``"a/b"``) to its first
    chamber in ShortLex order; when ``relation`` is None and all four are
    present, every one of the six relations is refuted outright.
    """

    relation: SixClass | None
    verified_radius: int
    witnesses: dict[str, Word] = field(default_factory=dict)
    candidates: list[SixClass] = field(default_factory=list)

    @property
    def refuted_all(self) -> bool:
        return self.relation is None and len(self.witnesses) == 4

    @property
    def counterexample(self) -> dict[str, Word] | None:
        return dict(self.witnesses) if self.refuted_all else None

    def to_json(self, system: CoxeterSystem) -> dict:
        return {
            "relation": None if self.relation is None else self.relation.name,
            "relation_text": None if self.relation is None else self.relation.relation,
            "verified_radius": self.verified_radius,
            "refuted_all": self.refuted_all,
            "witnesses": {k: system.to_json(v) for k, v in sorted(self.witnesses.items())},
        }


def root_relation_check(system: CoxeterSystem, s: int, g: Word, radius: int) -> InclusionWitness:
    """Brute-force the relation between ``g·H±`` and ``H±``.

    The scanned chambers are those within ``radius`` of ``K`` or of ``gK``,
    i.e. ``ball(radius) ∪ g·ball(radius)``, so both roots and both of their
    images are sampled near their walls. The chamber ``hK`` lies in ``g·H+``
    iff ``g⁻¹hK`` lies in ``H+``.
    """
    if radius + len(g) + 1 > system.max_word_len:
        raise WordTooLong(
            f"radius {radius} with l(g)={len(g)} exceeds max_word_len={system.max_word_len}"
        )
    ball = system.ball(radius)
    pulled = system.left_translates(system.invert(g), ball)
    pushed = system.left_translates(g, ball)
    side = {True: MINUS, False: PLUS}
    negative = system.is_left_descent
    witnesses: dict[str, Word] = {}
    # ball is ShortLex-sorted, so the first hit per key is the least one there
    for h in ball:
        key = f"{side[negative(s, pulled[h])]}/{side[negative(s, h)]}"
        if key not in witnesses:
            witnesses[key] = h
            if len(witnesses) == 4:
                break
    if len(witnesses) < 4:
        # translates outside the ball are all longer than anything in it
        inball = set(ball)
        extra = {}
        for x in ball:
            h = pushed[x]
            if h not in inball:
                key = f"{side[negative(s, x)]}/{side[negative(s, h)]}"
                if key not in witnesses and (key not in extra or system.sort_key(h) < system.sort_key(extra[key])):
                    extra[key] = h
        witnesses.update(extra)
    seen = {tuple(k.split("/")) for k in witnesses}
    candidates = [
        cls
        for cls, (empty, nonempty) in _PATTERNS.items()
        if not (empty & seen) and nonempty <= seen
    ]
    relation = candidates[0] if len(candidates) == 1 else None
    return InclusionWitness(relation, radius, witnesses, candidates)


def stabilizer_test(system: CoxeterSystem, s: int, g: Word, radius: int | None = None) -> bool:
    """Whether ``g·H+ = H+``.

    Exact when ``s`` satisfies the nested condition. Otherwise the answer
    comes from :func:`root_relation_check` and a ``True`` only certifies the
    equality up to the scanned radius (logged at INFO level).
    """
    if nested_condition(system, s):
        return classify(system, s, g) is SixClass.InWT
    if radius is None:
        radius = max(0, system.max_word_len - len(g) - 1)
    witness = root_relation_check(system, s, g, radius)
    if witness.relation is SixClass.InWT:
        log.info("stabilizer membership of %s certified only to radius %d", system.format(g), radius)
        return True
    return False
