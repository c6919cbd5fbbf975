"""Buildings with a W-valued distance, handled purely algebraically.

Two kinds of building are supported. The thin building of a Coxeter system
has chambers ``W`` and distance ``g⁻¹h``. The building of a graph product of
cyclic groups has chambers ``G`` and distance the vertex word of the normal
form of ``g⁻¹h``, read in the right-angled Coxeter group of the same graph.
The fundamental chamber is always the identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .coxeter import CoxeterSystem, Word
from .errors import ConfigError, ConstraintViolated, NestedConditionViolated
from .geometry import MINUS, PLUS, SixClass, classify, nested_condition, nested_offenders
from .graph_product import GraphProduct, shuffle_class
from .multipliers import CotlarReport, Symbol, verify_cotlar


class BuildingHandle:
    """Chambers, the Weyl distance and panels of one building.

    ``overrides`` replaces individual distance values; it exists to build
    corrupted fixtures for negative tests.
    """

    def __init__(self, group, kind: str, overrides: dict | None = None):
        if kind not in ("thin", "graph_product"):
            raise ConfigError(f"unknown building kind {kind!r}")
        self.group = group
        self.kind = kind
        self.type_system: CoxeterSystem = group if kind == "thin" else group.type_system()
        self.overrides = dict(overrides or {})

    @classmethod
    def thin(cls, system: CoxeterSystem) -> "BuildingHandle":
        return cls(system, "thin")

    @classmethod
    def graph_product(cls, gp: GraphProduct) -> "BuildingHandle":
        return cls(gp, "graph_product")

    @property
    def base_chamber(self):
        return self.group.identity

    def chambers(self, radius: int) -> list:
        return self.group.ball(radius)

    def generator(self, name) -> int:
        return self.type_system.index(name)

    def weyl_distance(self, c, d) -> Word:
        hit = self.overrides.get((c, d))
        if hit is not None:
            return hit
        x = self.group.multiply(self.group.invert(c), d)
        if self.kind == "thin":
            return x
        return self.type_system.reduce(self.group.vertex_word(x))

    def panel(self, c, s: int) -> list:
        """Chambers ``E != c`` with ``δ(c, E) = s`` (all of them for finite
        vertex groups; exponents up to the ball bound for infinite ones)."""
        if self.kind == "thin":
            return [self.group.multiply(c, (s,))]
        return [self.group.multiply(c, ((s, e),)) for e in self.group.syllable_values(s)]

    def b3_candidates(self, c, s: int, d) -> list:
        """The panel of ``c`` plus the chamber reached by fronting the
        ``s``-syllable of ``c⁻¹d`` (needed when the vertex group is infinite
        and the panel is truncated)."""
        out = self.panel(c, s)
        if self.kind == "graph_product":
            x = self.group.multiply(self.group.invert(c), d)
            for v, e in x:
                if v == s:
                    y = self.group.multiply(c, ((s, e),))
                    if y not in out:
                        out.append(y)
                    break
                if not self.group.adj[v][s]:
                    break
        return out

    def with_corrupted_distance(self, c, d, value: Word) -> "BuildingHandle":
        overrides = dict(self.overrides)
        overrides[(c, d)] = value
        return BuildingHandle(self.group, self.kind, overrides)

    def format(self, c) -> str:
        return self.group.format(c)

    def to_json(self, c):
        return self.group.to_json(c)


def weyl_distance(handle: BuildingHandle, c, d) -> Word:
    return handle.weyl_distance(c, d)


@dataclass
class AxiomReport:
    radius: int
    triple_radius: int
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed_axioms(self) -> set[str]:
        return {f["axiom"] for f in self.failures}

    def to_json(self, handle: BuildingHandle) -> dict:
        t = handle.type_system
        out = []
        for f in self.failures:
            row = {"axiom": f["axiom"]}
            for key in ("E", "C", "D"):
                if key in f:
                    row[key] = handle.to_json(f[key])
            for key in ("delta_CD", "delta_EC", "delta_ED", "expected"):
                if key in f:
                    row[key] = t.to_json(f[key])
            if "generator" in f:
                row["generator"] = t.generators[f["generator"]]
            out.append(row)
        return {
            "radius": self.radius,
            "triple_radius": self.triple_radius,
            "checked": dict(sorted(self.checked.items())),
            "failure_count": len(self.failures),
            "failures": out,
        }


def check_axioms(handle: BuildingHandle, radius: int, triple_radius: int | None = None,
                 max_failures: int = 50) -> AxiomReport:
    """Check B1 and the inverse rule on pairs of ``ball(radius)`` and B2, B3
    on triples built from ``ball(triple_radius)``.

    B2: whenever ``δ(E, C) = s`` is a generator and ``w = δ(C, D)``, the
    distance ``δ(E, D)`` is ``sw`` or ``w``, and is ``sw`` if ``sw`` is
    longer. B3: for each ``C, D`` and generator ``s`` some chamber ``E`` of
    the ``s``-panel of ``C`` has ``δ(E, C) = s`` and ``δ(E, D) = sw``.
    """
    if triple_radius is None:
        triple_radius = radius
    t = handle.type_system
    report = AxiomReport(radius, triple_radius)
    checked = {"B1": 0, "inverse": 0, "B2": 0, "B3": 0}

    def fail(**row):
        if len(report.failures) < max_failures:
            report.failures.append(row)

    ball = handle.chambers(radius)
    for c in ball:
        for d in ball:
            w = handle.weyl_distance(c, d)
            checked["B1"] += 1
            if (w == ()) != (c == d):
                fail(axiom="B1", C=c, D=d, delta_CD=w)
            checked["inverse"] += 1
            back = handle.weyl_distance(d, c)
            if t.invert(back) != w:
                fail(axiom="inverse", C=c, D=d, delta_CD=w, expected=t.invert(back))

    small = handle.chambers(triple_radius)
    for c in small:
        panels = [(s, handle.panel(c, s)) for s in range(t.n)]
        for d in small:
            w = handle.weyl_distance(c, d)
            for s, panel in panels:
                sw = t.multiply((s,), w)
                longer = len(sw) > len(w)
                found = False
                for e in panel:
                    if handle.weyl_distance(e, c) != (s,):
                        fail(axiom="B2", E=e, C=c, D=d, generator=s, delta_EC=handle.weyl_distance(e, c))
                        continue
                    checked["B2"] += 1
                    ed = handle.weyl_distance(e, d)
                    if ed not in (sw, w) or (longer and ed != sw):
                        fail(axiom="B2", E=e, C=c, D=d, generator=s, delta_CD=w, delta_ED=ed, expected=sw)
                    if ed == sw:
                        found = True
                if not found:
                    found = any(
                        handle.weyl_distance(e, c) == (s,) and handle.weyl_distance(e, d) == sw
                        for e in handle.b3_candidates(c, s, d)
                    )
                checked["B3"] += 1
                if not found:
                    fail(axiom="B3", C=c, D=d, generator=s, delta_CD=w, expected=sw)
    report.checked = checked
    return report


# -- the two-valued symbol ----------------------------------------------

def _require_nested(handle: BuildingHandle, u: int):
    if not nested_condition(handle.type_system, u):
        t = handle.type_system
        detail = ", ".join(f"m({t.generators[u]},{t.generators[x]})={m}" for x, m in nested_offenders(t, u))
        raise NestedConditionViolated(f"type system is not nested relative to {t.generators[u]!r}: {detail}")


def building_symbol(handle: BuildingHandle, u) -> Symbol:
    """``-1`` when ``u`` is a left descent of ``δ(C0, gC0)``, else ``+1``."""
    u = handle.generator(u)
    _require_nested(handle, u)
    t = handle.type_system
    base = handle.base_chamber

    def rule(g):
        return -1 if t.is_left_descent(u, handle.weyl_distance(base, g)) else 1

    return Symbol(rule, {"kind": "building", "vertex": t.generators[u]})


def amalgam_symbol(gp: GraphProduct, u) -> Symbol:
    """``-1`` iff some shuffle of the syllables of ``g`` starts at ``u``.

    Exhaustive over the shuffle class, so it is only meant as an oracle.
    """
    u = gp.index(u)

    def rule(g):
        return -1 if any(x and x[0][0] == u for x in shuffle_class(gp, g)) else 1

    return Symbol(rule, {"kind": "amalgam", "vertex": gp.names[u]})


def theorem_c_subgroup(handle: BuildingHandle, u: int, include_u: bool = False):
    """Membership in ``{g : δ(C0, gC0) ∈ W_T}`` with ``T`` the generators
    commuting with ``u`` (plus ``u`` itself when ``include_u``)."""
    t = handle.type_system
    T = set(t.commuting(u))
    if include_u:
        T.add(u)
    base = handle.base_chamber

    def member(g) -> bool:
        return t.in_parabolic(T, handle.weyl_distance(base, g))

    names = ",".join(t.generators[x] for x in sorted(T))
    return member, f"W_{{{names}}}"


def verify_theorem_c(handle: BuildingHandle, u, radius: int, max_violations: int | None = None) -> CotlarReport:
    u = handle.generator(u)
    symbol = building_symbol(handle, u)
    member, desc = theorem_c_subgroup(handle, u)
    return verify_cotlar(handle.group, symbol, member, radius, desc, max_violations)


# -- composition of root relations along chamber triples -----------------

SIGNS = (PLUS, MINUS)

# Each row: (name, premise on class of w, premise on class of w1, conclusion
# on class of w2), for w = δ(D,C), w1 = δ(D,E), w2 = δ(C,E).
def _rows():
    rows = []
    for mid, tag in ((PLUS, "i"), (MINUS, "ii")):
        for a in SIGNS:
            for b in SIGNS:
                rows.append((
                    f"{tag}[{a}{b}]",
                    lambda c, a=a, mid=mid: c.strictly_inside(a, mid),
                    lambda c, b=b, mid=mid: c.strictly_contains(mid, b),
                    lambda c, a=a, b=b: c.strictly_contains(a, b),
                ))
    for b in SIGNS:
        rows.append((
            f"iii[{b}]",
            lambda c: c.maps_onto(PLUS, MINUS),
            lambda c, b=b: c.strictly_contains(MINUS, b),
            lambda c, b=b: c.strictly_contains(PLUS, b),
        ))
    for a in SIGNS:
        rows.append((
            f"iv[{a}]",
            lambda c, a=a: c.strictly_inside(a, PLUS),
            lambda c: c.maps_onto(MINUS, PLUS),
            lambda c, a=a: c.strictly_contains(a, MINUS),
        ))
    return rows


TRANSITIVITY_ROWS = _rows()


@dataclass
class TransitivityReport:
    radius: int
    triples_checked: int
    fired: dict[str, int]
    failures: list[tuple[str, Any, Any, Any]]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, handle: BuildingHandle) -> dict:
        return {
            "radius": self.radius,
            "triples_checked": self.triples_checked,
            "rows_fired": dict(self.fired),
            "failure_count": len(self.failures),
            "failures": [
                {"row": r, "C": handle.to_json(c), "D": handle.to_json(d), "E": handle.to_json(e)}
                for r, c, d, e in self.failures
            ],
        }


def transitivity_table_check(handle: BuildingHandle, u, radius: int, max_failures: int = 50) -> TransitivityReport:
    """Check the composition rules for root relations over every chamber
    triple ``(C, D, E)`` of ``ball(radius)``."""
    u = handle.generator(u)
    _require_nested(handle, u)
    t = handle.type_system
    ball = handle.chambers(radius)
    cache: dict[Word, SixClass] = {}

    def cls_of(w):
        c = cache.get(w)
        if c is None:
            c = cache[w] = classify(t, u, w)
        return c

    dist = {(x, y): cls_of(handle.weyl_distance(x, y)) for x in ball for y in ball}
    fired = {name: 0 for name, *_ in TRANSITIVITY_ROWS}
    failures = []
    count = 0
    for c in ball:
        for d in ball:
            cw = dist[(d, c)]
            live = [row for row in TRANSITIVITY_ROWS if row[1](cw)]
            for e in ball:
                count += 1
                if not live:
                    continue
                c1 = dist[(d, e)]
                c2 = dist[(c, e)]
                for name, _, second, conclusion in live:
                    if second(c1):
                        fired[name] += 1
                        if not conclusion(c2) and len(failures) < max_failures:
                            failures.append((name, c, d, e))
    return TransitivityReport(radius, count, fired, failures)


# -- the finer model with one value per component ------------------------

@dataclass
class FinerModel:
    """A symbol constant on the components of the complement of the wall of
    ``u``, with the audit of the orbit constraint."""

    vertex: str
    values: tuple
    g0_mode: str
    radius: int
    orbits: list[list[int]]
    permutations: int
    violations: list[tuple[Any, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self, gp: GraphProduct) -> dict:
        return {
            "vertex": self.vertex,
            "values": [str(v) for v in self.values],
            "g0_mode": self.g0_mode,
            "radius": self.radius,
            "distinct_permutations": self.permutations,
            "orbits": self.orbits,
            "violation_count": len(self.violations),
            "violations": [
                {"g": gp.to_json(g), "component": i, "image": j} for g, i, j in self.violations
            ],
        }


def component(gp: GraphProduct, u: int, g) -> int:
    """Exponent of the ``u``-syllable that can be shuffled to the front of
    ``g``, or 0 when there is none."""
    for v, e in g:
        if v == u:
            return e
        if not gp.adj[v][u]:
            return 0
    return 0


def finer_symbol(gp: GraphProduct, u, values: Sequence, radius: int, g0_mode: str = "root",
                 strict: bool = True) -> tuple[Symbol, FinerModel]:
    """Symbol taking ``values[j]`` on the component of chambers whose leading
    ``u``-syllable is ``u^j``.

    The audit runs over ``g`` in ``ball(radius) ∩ G0`` and records how
    ``g`` permutes the representatives ``u^i``; values must be constant on
    the resulting orbits. ``g0_mode="root"`` takes ``G0`` from the
    generators commuting with ``u``; ``"wall"`` adds ``u`` itself, giving
    the full stabiliser of the wall. With ``strict`` a failed audit raises
    :class:`ConstraintViolated` carrying the model.
    """
    u = gp.index(u)
    n = gp.orders[u]
    if n is None:
        raise ConfigError(f"vertex {gp.names[u]!r} has infinite order; the finer model needs a finite vertex group")
    values = tuple(values)
    if len(values) != n:
        raise ConfigError(f"vertex {gp.names[u]!r} has order {n}, got {len(values)} values")
    if g0_mode not in ("root", "wall"):
        raise ConfigError(f"g0_mode must be 'root' or 'wall', got {g0_mode!r}")
    handle = BuildingHandle.graph_product(gp)
    member, _ = theorem_c_subgroup(handle, u, include_u=(g0_mode == "wall"))

    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    reps = [gp.normalize([(u, i)]) for i in range(n)]
    perms = set()
    violations = []
    for g in gp.ball(radius):
        if not member(g):
            continue
        perm = tuple(component(gp, u, gp.multiply(g, r)) for r in reps)
        perms.add(perm)
        for i, j in enumerate(perm):
            if values[i] != values[j]:
                violations.append((g, i, j))
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    model = FinerModel(gp.names[u], values, g0_mode, radius, sorted(groups.values()), len(perms), violations)
    if strict and violations:
        raise ConstraintViolated(
            f"values are not constant on the orbits {model.orbits} of G0 on the components", model
        )

    def rule(g):
        return values[component(gp, u, g)]

    symbol = Symbol(rule, {"kind": "finer", "vertex": gp.names[u], "values": [str(v) for v in values]})
    return symbol, model
