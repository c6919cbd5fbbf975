"""Multiplier symbols and brute-force checks of the Cotlar identity.

A symbol is a total function on group elements. The Cotlar identity relative
to a subgroup ``G0`` asks that

    (m(g) - m(h)) * (m(g⁻¹h) - m(g⁻¹)) == 0

for every ``g`` outside ``G0`` and every ``h``; together with left
``G0``-invariance of ``m`` it is the combinatorial input for boundedness of
the associated Fourier multiplier. :func:`verify_cotlar` checks both on a
ball of any group handle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping

from .coxeter import CoxeterSystem
from .group import left_translates


@dataclass(frozen=True, eq=False)
class Symbol:
    """A multiplier symbol: a rule plus a JSON-friendly description of it."""

    rule: Callable[[Any], Any]
    descriptor: Mapping[str, Any] = field(default_factory=dict)

    def __call__(self, g):
        return self.rule(g)

    evaluate = __call__


def mw_symbol(system: CoxeterSystem, s: int) -> Symbol:
    """+1 on chambers in the positive root of ``s``, -1 on the others."""

    def rule(g):
        return -1 if system.is_left_descent(s, g) else 1

    return Symbol(rule, {"kind": "halfspace", "generator": system.generators[s]})


def constant_symbol(value=1) -> Symbol:
    return Symbol(lambda g: value, {"kind": "constant", "value": str(value)})


def table_symbol(table: Mapping[Hashable, Any], default=0) -> Symbol:
    table = dict(table)
    return Symbol(lambda g: table.get(g, default), {"kind": "table", "entries": len(table), "default": str(default)})


@dataclass
class CotlarReport:
    radius: int
    subgroup_descriptor: str
    pairs_checked: int
    violations: list[tuple[Any, Any, Any]]
    invariance_violations: list[tuple[Any, Any]]
    subgroup_size_in_ball: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.invariance_violations

    def to_json(self, group) -> dict:
        return {
            "radius": self.radius,
            "subgroup": self.subgroup_descriptor,
            "subgroup_elements_in_ball": self.subgroup_size_in_ball,
            "pairs_checked": self.pairs_checked,
            "violation_count": len(self.violations),
            "invariance_violation_count": len(self.invariance_violations),
            "violations": [
                {"g": group.to_json(g), "h": group.to_json(h), "product": _scalar_json(v)}
                for g, h, v in self.violations
            ],
            "invariance_violations": [
                {"h_prime": group.to_json(a), "h": group.to_json(b)}
                for a, b in self.invariance_violations
            ],
        }


def _scalar_json(value):
    if isinstance(value, complex):
        return [value.real, value.imag] if value.imag else value.real
    if isinstance(value, int):
        return value
    try:
        return float(value)
    except TypeError:
        return str(value)


def verify_cotlar(
    group,
    symbol: Callable[[Any], Any],
    g0_membership: Callable[[Any], bool],
    radius: int,
    subgroup_descriptor: str = "",
    max_violations: int | None = None,
) -> CotlarReport:
    """Scan ``ball(radius)`` for Cotlar violations and invariance failures.

    Violations come out sorted by the ShortLex order of ``g`` and then ``h``.
    ``max_violations`` stops recording (not counting pairs) once reached.
    """
    ball = group.ball(radius)
    values: dict = {}

    def m(x):
        v = values.get(x)
        if v is None:
            v = symbol(x)
            values[x] = v
        return v

    in_g0 = [h for h in ball if g0_membership(h)]
    invariance = []
    identity = group.identity
    for hp in in_g0:
        if hp == identity:
            continue
        moved = left_translates(group, hp, ball)
        for h in ball:
            if m(moved[h]) != m(h):
                invariance.append((hp, h))

    violations = []
    pairs = 0
    g0_set = set(in_g0)
    for g in ball:
        if g in g0_set:
            continue
        pairs += len(ball)
        mg = m(g)
        ginv = group.invert(g)
        mginv = m(ginv)
        need = [h for h in ball if m(h) != mg]
        if not need:
            continue
        moved = left_translates(group, ginv, ball) if len(need) > len(ball) // 4 else {
            h: group.multiply(ginv, h) for h in need
        }
        for h in need:
            value = (mg - m(h)) * (m(moved[h]) - mginv)
            if value != 0:
                if max_violations is None or len(violations) < max_violations:
                    violations.append((g, h, value))
    return CotlarReport(radius, subgroup_descriptor, pairs, violations, invariance, len(in_g0))
