"""Graph products of cyclic groups with a syllable normal form.

An element is a tuple of syllables ``(vertex, exponent)``. In normal form no
two syllables of the same vertex can be brought together by swapping
syllables of adjacent (commuting) vertices, no syllable is trivial, and the
order is the lexicographically least one: repeatedly emit, among the
syllables that can be shuffled to the front, the one with the smallest
vertex index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .coxeter import INF, CoxeterSystem, default_max_word_len, validate_system
from .errors import ConfigError

Syllable = tuple[int, int]
GPElement = tuple[Syllable, ...]


@dataclass(frozen=True)
class GraphProductDescriptor:
    names: tuple[str, ...]
    orders: tuple[int | None, ...]  # None for an infinite cyclic vertex group
    edges: frozenset[frozenset[int]]

    def to_json(self) -> dict:
        return {
            "type": "graph_product",
            "vertices": [
                {"name": n, "order": "Z" if o is None else o} for n, o in zip(self.names, self.orders)
            ],
            "edges": sorted(
                [self.names[i] for i in sorted(e)] for e in self.edges
            ),
        }


def graph_product_descriptor(vertices: Sequence, edges: Iterable[Sequence[str]] = ()) -> GraphProductDescriptor:
    """Validate vertices ``[(name, order), ...]`` (or dicts with those keys;
    order an integer >= 2 or ``"Z"``) and an undirected edge list."""
    names, orders = [], []
    for v in vertices:
        if isinstance(v, dict):
            name, order = v.get("name"), v.get("order")
        else:
            name, order = v
        if not isinstance(name, str) or not name:
            raise ConfigError(f"vertex name {name!r} must be a nonempty string")
        if name in names:
            raise ConfigError(f"vertex {name!r} listed twice")
        if isinstance(order, str) and order.strip().upper() in ("Z", "INF", "INFINITY"):
            order = None
        elif isinstance(order, bool) or not isinstance(order, int) or order < 2:
            raise ConfigError(f"vertex {name!r}: order must be an integer >= 2 or 'Z', got {order!r}")
        names.append(name)
        orders.append(order)
    if not names:
        raise ConfigError("a graph product needs at least one vertex")
    index = {n: i for i, n in enumerate(names)}
    edge_set = set()
    for e in edges:
        e = list(e)
        if len(e) != 2:
            raise ConfigError(f"edge {e!r} must have two endpoints")
        a, b = e
        if a not in index or b not in index:
            raise ConfigError(f"edge {e!r} mentions an unknown vertex")
        if a == b:
            raise ConfigError(f"loop at {a!r} is not allowed")
        edge_set.add(frozenset((index[a], index[b])))
    return GraphProductDescriptor(tuple(names), tuple(orders), frozenset(edge_set))


class GraphProduct:
    """Group operations on a graph product of cyclic groups.

    ``ball(R)`` collects elements with at most ``R`` syllables; for infinite
    cyclic vertices only exponents with ``|e| <= int_exponent_bound`` are used
    as building blocks.
    """

    def __init__(self, descriptor: GraphProductDescriptor, int_exponent_bound: int = 1,
                 max_word_len: int | None = None):
        self.descriptor = descriptor
        self.names = descriptor.names
        self.orders = descriptor.orders
        self.n = len(self.names)
        self.adj = [[frozenset((i, j)) in descriptor.edges for j in range(self.n)] for i in range(self.n)]
        self.int_exponent_bound = int_exponent_bound
        self.max_word_len = default_max_word_len() if max_word_len is None else max_word_len
        self._index = {n: i for i, n in enumerate(self.names)}
        self._balls: dict[int, list[GPElement]] = {}
        self._type_system = None

    identity: GPElement = ()

    # -- names ----------------------------------------------------------
    def index(self, name) -> int:
        if isinstance(name, int) and not isinstance(name, bool) and 0 <= name < self.n:
            return name
        try:
            return self._index[name]
        except KeyError:
            raise ConfigError(f"unknown vertex {name!r}; known: {list(self.names)}")

    def commutes(self, v: int, w: int) -> bool:
        return self.adj[v][w]

    def syllable_values(self, v: int) -> list[int]:
        """Nontrivial elements of the vertex group used to grow balls."""
        n = self.orders[v]
        if n is None:
            k = self.int_exponent_bound
            return [e for e in range(-k, k + 1) if e]
        return list(range(1, n))

    def _reduce_exp(self, v: int, e: int) -> int:
        n = self.orders[v]
        return e if n is None else e % n

    # -- normal form ----------------------------------------------------
    def normalize(self, raw: Iterable[Sequence[int]]) -> GPElement:
        """Normal form of a product of syllables ``(vertex, exponent)``."""
        out: list[list[int]] = []
        for v, e in raw:
            if not (isinstance(v, int) and 0 <= v < self.n):
                raise ConfigError(f"vertex index {v!r} out of range")
            e = self._reduce_exp(v, e)
            if e == 0:
                continue
            # find a same-vertex syllable that v can shuffle back to
            for j in range(len(out) - 1, -1, -1):
                w = out[j][0]
                if w == v:
                    merged = self._reduce_exp(v, out[j][1] + e)
                    if merged:
                        out[j][1] = merged
                    else:
                        del out[j]
                    break
                if not self.adj[w][v]:
                    out.append([v, e])
                    break
            else:
                out.append([v, e])
        return self._lex_order([tuple(x) for x in out])

    def _lex_order(self, syllables: list[Syllable]) -> GPElement:
        rest = list(syllables)
        result = []
        while rest:
            best = None
            for i, (v, _) in enumerate(rest):
                if best is not None and v >= rest[best][0]:
                    continue
                if all(self.adj[w][v] for w, _ in rest[:i]):
                    best = i
            result.append(rest.pop(best))
        return tuple(result)

    def multiply(self, a: GPElement, b: GPElement) -> GPElement:
        return self.normalize(a + b)

    def invert(self, a: GPElement) -> GPElement:
        return self.normalize((v, -e) for v, e in reversed(a))

    def ball(self, radius: int) -> list[GPElement]:
        cached = self._balls.get(radius)
        if cached is None:
            seen = {()}
            frontier = [()]
            for _ in range(radius):
                nxt = []
                for g in frontier:
                    for v in range(self.n):
                        for e in self.syllable_values(v):
                            x = self.multiply(g, ((v, e),))
                            if x not in seen:
                                seen.add(x)
                                nxt.append(x)
                frontier = nxt
            cached = sorted((g for g in seen if len(g) <= radius), key=self.sort_key)
            self._balls[radius] = cached
        return list(cached)

    @staticmethod
    def sort_key(a: GPElement):
        return (len(a), a)

    # -- presentation ---------------------------------------------------
    def format(self, a: GPElement) -> str:
        if not a:
            return "e"
        return " ".join(self.names[v] if e == 1 else f"{self.names[v]}^{e}" for v, e in a)

    def to_json(self, a: GPElement):
        return [[self.names[v], e] for v, e in a]

    def from_json(self, data) -> GPElement:
        return self.normalize((self.index(v), int(e)) for v, e in data)

    def element(self, data) -> GPElement:
        """Normal form from ``[(name, exponent), ...]``."""
        return self.from_json(data)

    # -- the right-angled Coxeter group of the graph --------------------
    def type_system(self) -> CoxeterSystem:
        """Coxeter system with m = 2 across edges and m = inf otherwise."""
        if self._type_system is None:
            rows = [
                [1 if i == j else (2 if self.adj[i][j] else INF) for j in range(self.n)]
                for i in range(self.n)
            ]
            self._type_system = validate_system(rows, self.names, self.max_word_len)
        return self._type_system

    def vertex_word(self, a: GPElement) -> tuple[int, ...]:
        return tuple(v for v, _ in a)


def gp_normalize(gp: GraphProduct, raw) -> GPElement:
    return gp.normalize(raw)


def gp_multiply(gp: GraphProduct, a: GPElement, b: GPElement) -> GPElement:
    return gp.multiply(a, b)


def gp_invert(gp: GraphProduct, a: GPElement) -> GPElement:
    return gp.invert(a)


def gp_ball(gp: GraphProduct, radius: int) -> list[GPElement]:
    return gp.ball(radius)


def shuffle_class(gp: GraphProduct, a: Sequence[Syllable]) -> set[GPElement]:
    """Every rearrangement of ``a`` reachable by swapping adjacent syllables
    at adjacent vertices (brute force)."""
    start = tuple(a)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for i in range(len(x) - 1):
            if gp.adj[x[i][0]][x[i + 1][0]]:
                y = x[:i] + (x[i + 1], x[i]) + x[i + 2:]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return seen
