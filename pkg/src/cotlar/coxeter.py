"""Coxeter systems: validation, word problem, lengths, descents and balls.

Elements are represented by their canonical word, the ShortLex-least reduced
expression, stored as a tuple of generator indices. Two elements are equal
exactly when their canonical tuples are equal, so tuples serve directly as
dictionary keys.

The word problem is solved by braid-move rewriting. The production path
multiplies a canonical word by one generator at a time: the full set of
reduced expressions of ``w`` (its braid class) tells whether ``s`` is a right
descent, and the braid class of ``ws`` is derived from it. A literal
exhaustive closure under deletions and braid moves, :func:`m_closure_reduce`,
is kept as an independent reference implementation. Right-angled systems use
a polynomial shuffle algorithm instead.
"""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BadDiagonal,
    BadEntry,
    ConfigError,
    DuplicateName,
    NonSymmetric,
    OffDiagonalOne,
    WordTooLong,
)

INF = math.inf
DEFAULT_MAX_WORD_LEN = 16
MAX_WORD_LEN_ENV = "COTLAR_MAX_WORD_LEN"

Word = tuple[int, ...]


def default_max_word_len() -> int:
    """Cap from the environment, falling back to 16."""
    raw = os.environ.get(MAX_WORD_LEN_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_WORD_LEN
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{MAX_WORD_LEN_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{MAX_WORD_LEN_ENV} must be positive, got {value}")
    return value


def _parse_entry(entry, i, j):
    if isinstance(entry, str):
        if entry.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        raise BadEntry(f"matrix entry ({i},{j}) = {entry!r} is not an integer or 'inf'")
    if isinstance(entry, bool):
        raise BadEntry(f"matrix entry ({i},{j}) is a boolean")
    if isinstance(entry, float):
        if math.isinf(entry) and entry > 0:
            return INF
        if entry.is_integer():
            entry = int(entry)
        else:
            raise BadEntry(f"matrix entry ({i},{j}) = {entry} is not an integer")
    if not isinstance(entry, int):
        raise BadEntry(f"matrix entry ({i},{j}) = {entry!r} has unsupported type")
    if entry < 1:
        raise BadEntry(f"matrix entry ({i},{j}) = {entry} must be positive")
    return entry


def validate_system(matrix, names: Sequence[str] | None = None, max_word_len: int | None = None):
    """Check the Coxeter-matrix axioms and build a :class:`CoxeterSystem`.

    Entries are positive integers or ``inf`` (the float, or the string "inf").

    >>> validate_system([[1, 3], [3, 1]], ["s", "t"]).m(0, 1)
    3
    """
    rows = [list(row) for row in matrix]
    n = len(rows)
    if n == 0:
        raise ConfigError("a Coxeter system needs at least one generator")
    if any(len(row) != n for row in rows):
        raise ConfigError("Coxeter matrix must be square")
    if names is None:
        names = [f"s{i}" for i in range(n)]
    names = [str(x) for x in names]
    if len(names) != n:
        raise ConfigError(f"{len(names)} generator names for a {n}x{n} matrix")
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateName(f"generator name {name!r} appears twice")
        seen.add(name)
    parsed = [[_parse_entry(rows[i][j], i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        if parsed[i][i] != 1:
            raise BadDiagonal(f"diagonal entry ({i},{i}) must be 1, got {parsed[i][i]}")
        for j in range(i + 1, n):
            if parsed[i][j] != parsed[j][i]:
                raise NonSymmetric(
                    f"entries ({i},{j}) and ({j},{i}) differ: {parsed[i][j]} vs {parsed[j][i]}"
                )
            if parsed[i][j] == 1:
                raise OffDiagonalOne(f"off-diagonal entry ({i},{j}) equals 1")
    if max_word_len is None:
        max_word_len = default_max_word_len()
    return CoxeterSystem(tuple(names), tuple(tuple(r) for r in parsed), max_word_len)


@dataclass(frozen=True)
class DescentInfo:
    left: frozenset[int]
    right: frozenset[int]


class CoxeterSystem:
    """A finitely generated Coxeter system with memoized word arithmetic.

    Construct through :func:`validate_system`. The memo tables only ever gain
    entries that are pure functions of their keys, so concurrent readers and
    writers racing on the same key store identical values.
    """

    def __init__(self, generators: tuple[str, ...], matrix: tuple[tuple, ...], max_word_len: int):
        self.generators = generators
        self.matrix = matrix
        self.max_word_len = max_word_len
        self.n = len(generators)
        self._index = {name: i for i, name in enumerate(generators)}
        self.right_angled = all(
            matrix[i][j] in (2, INF) for i in range(self.n) for j in range(self.n) if i != j
        )
        # alternating words of length m(a, b) starting with a, for finite m
        self._alternating = {}
        for a in range(self.n):
            for b in range(self.n):
                m = matrix[a][b]
                if a != b and m != INF:
                    self._alternating[a, b] = tuple(a if k % 2 == 0 else b for k in range(m))
        self._classes: dict[Word, frozenset[Word]] = {(): frozenset({()})}
        self._step: dict[tuple[Word, int], Word] = {}
        self._balls: dict[int, list[Word]] = {}

    # -- identity and presentation -------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, CoxeterSystem)
            and self.generators == other.generators
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.generators, self.matrix))

    def __repr__(self):
        return f"CoxeterSystem({list(self.generators)}, {self.matrix_json()})"

    def with_max_word_len(self, max_word_len: int) -> "CoxeterSystem":
        return CoxeterSystem(self.generators, self.matrix, max_word_len)

    def m(self, a: int, b: int):
        return self.matrix[a][b]

    def index(self, name) -> int:
        if isinstance(name, int) and not isinstance(name, bool):
            if 0 <= name < self.n:
                return name
            raise ConfigError(f"generator index {name} out of range")
        try:
            return self._index[name]
        except KeyError:
            raise ConfigError(f"unknown generator {name!r}; known: {list(self.generators)}")

    def word(self, letters: Iterable) -> Word:
        """Turn names (or indices) into a raw word; a plain string of
        one-character names is split into letters."""
        if isinstance(letters, str):
            letters = list(letters)
        return tuple(self.index(x) for x in letters)

    def element(self, letters: Iterable) -> Word:
        """Canonical element for a word given by names."""
        return self.reduce(self.word(letters))

    def names(self, w: Word) -> list[str]:
        return [self.generators[i] for i in w]

    def format(self, w: Word) -> str:
        if not w:
            return "e"
        sep = "" if all(len(g) == 1 for g in self.generators) else " "
        return sep.join(self.generators[i] for i in w)

    def to_json(self, w: Word):
        return self.names(w)

    def from_json(self, data) -> Word:
        return self.element(data)

    def matrix_json(self):
        return [["inf" if x == INF else x for x in row] for row in self.matrix]

    def descriptor(self) -> dict:
        return {"type": "coxeter", "generators": list(self.generators), "matrix": self.matrix_json()}

    @property
    def identity(self) -> Word:
        return ()

    @staticmethod
    def sort_key(w: Word):
        return (len(w), w)

    # -- word problem ---------------------------------------------------
    def _check_len(self, length: int):
        if length > self.max_word_len:
            raise WordTooLong(
                f"word length {length} exceeds max_word_len={self.max_word_len}"
            )

    def braid_moves(self, x: Word):
        """All words one braid move (type b) away from ``x``."""
        out = []
        for i in range(len(x) - 1):
            a, b = x[i], x[i + 1]
            alt = self._alternating.get((a, b))
            if alt is None or i + len(alt) > len(x):
                continue
            if x[i:i + len(alt)] == alt:
                out.append(x[:i] + self._alternating[b, a] + x[i + len(alt):])
        return out

    def _braid_closure(self, start: Word) -> frozenset[Word]:
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self.braid_moves(x):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def braid_class(self, w: Word) -> frozenset[Word]:
        """Every reduced expression of the canonical element ``w``."""
        cls = self._classes.get(w)
        if cls is None:
            cls = self._braid_closure(w)
            self._classes[w] = cls
        return cls

    def _times_gen(self, w: Word, s: int) -> Word:
        if self.right_angled:
            return self._ra_times_gen(w, s)
        key = (w, s)
        hit = self._step.get(key)
        if hit is not None:
            return hit
        # reduced expressions of w ending in s, minus that s, are exactly the
        # reduced expressions of ws
        cls = self.braid_class(w)
        shorter = frozenset(x[:-1] for x in cls if x and x[-1] == s)
        new_cls = shorter if shorter else self._braid_closure(w + (s,))
        result = min(new_cls)
        self._classes.setdefault(result, new_cls)
        self._step[key] = result
        return result

    def _ra_times_gen(self, w: Word, s: int) -> Word:
        # Letters after position j that all commute with s form the region s
        # can slide into. Meeting s there cancels it (deleting a letter keeps
        # the word lexicographically least); otherwise s is inserted before
        # the first larger letter of that region.
        row = self.matrix[s]
        j = len(w) - 1
        while j >= 0:
            x = w[j]
            if x == s:
                return w[:j] + w[j + 1:]
            if row[x] != 2:
                break
            j -= 1
        for p in range(j + 1, len(w)):
            if w[p] > s:
                return w[:p] + (s,) + w[p:]
        return w + (s,)

    def lex_normal(self, letters: Sequence[int]) -> Word:
        """Lexicographically least rearrangement of a reduced right-angled
        word by commuting swaps (greedy heap extraction)."""
        rest = list(letters)
        out = []
        while rest:
            best = None
            for i, x in enumerate(rest):
                if best is not None and x >= rest[best]:
                    continue
                if all(self.matrix[y][x] == 2 for y in rest[:i]):
                    best = i
            out.append(rest.pop(best))
        return tuple(out)

    def _fold(self, start: Word, letters: Iterable[int]) -> Word:
        w = start
        for s in letters:
            w = self._times_gen(w, s)
        return w

    def reduce(self, word: Iterable[int]) -> Word:
        """Canonical form of an arbitrary word of generator indices.

        >>> A2 = validate_system([[1, 3], [3, 1]], ["s", "t"])
        >>> A2.format(A2.reduce(A2.word("stst")))
        'ts'
        """
        word = tuple(word)
        self._check_len(len(word))
        for s in word:
            if not (isinstance(s, int) and 0 <= s < self.n):
                raise ConfigError(f"letter {s!r} is not a generator index")
        return self._fold((), word)

    def multiply(self, a: Word, b: Word) -> Word:
        self._check_len(len(a) + len(b))
        return self._fold(a, b)

    def _mul_unchecked(self, a: Word, b: Word) -> Word:
        return self._fold(a, b)

    def left_translates(self, a: Word, elements: Sequence[Word]) -> dict[Word, Word]:
        """Map each h in a prefix-closed ShortLex-ordered list to a·h, one
        generator step per element."""
        out = {(): a}
        for h in elements:
            if h not in out:
                out[h] = self._times_gen(out[h[:-1]], h[-1])
        return out

    def invert(self, a: Word) -> Word:
        return self._fold((), reversed(a))

    def length(self, a: Word) -> int:
        return len(a)

    # -- descents and parabolics --------------------------------------
    def left_descents(self, a: Word) -> frozenset[int]:
        if self.right_angled:
            return frozenset(
                x for i, x in enumerate(a) if all(self.matrix[y][x] == 2 for y in a[:i])
            )
        return frozenset(x[0] for x in self.braid_class(a) if x)

    def right_descents(self, a: Word) -> frozenset[int]:
        if self.right_angled:
            return frozenset(
                x for i, x in enumerate(a) if all(self.matrix[y][x] == 2 for y in a[i + 1:])
            )
        return frozenset(x[-1] for x in self.braid_class(a) if x)

    def descents(self, a: Word) -> DescentInfo:
        return DescentInfo(self.left_descents(a), self.right_descents(a))

    def is_left_descent(self, s: int, a: Word) -> bool:
        if self.right_angled:
            row = self.matrix[s]
            for x in a:
                if x == s:
                    return True
                if row[x] != 2:
                    return False
            return False
        return s in self.left_descents(a)

    def in_parabolic(self, T: Iterable[int], a: Word) -> bool:
        """Membership in the parabolic subgroup generated by ``T``.

        Every reduced expression of an element uses the same generators, so
        the support of the canonical word decides it.
        """
        allowed = set(T)
        return all(x in allowed for x in a)

    def commuting(self, s: int) -> frozenset[int]:
        """Generators t != s with m(s, t) = 2."""
        return frozenset(t for t in range(self.n) if t != s and self.matrix[s][t] == 2)

    # -- balls ----------------------------------------------------------
    def sphere_layers(self, radius: int) -> list[list[Word]]:
        self._check_len(radius)
        layers = [[()]]
        seen = {()}
        for r in range(1, radius + 1):
            nxt = set()
            for w in layers[-1]:
                for s in range(self.n):
                    x = self._times_gen(w, s)
                    if len(x) == r and x not in seen:
                        nxt.add(x)
            seen |= nxt
            layers.append(sorted(nxt))
        return layers

    def ball(self, radius: int) -> list[Word]:
        """All elements of length at most ``radius``, in ShortLex order."""
        cached = self._balls.get(radius)
        if cached is None:
            cached = [w for layer in self.sphere_layers(radius) for w in layer]
            self._balls[radius] = cached
        return list(cached)

    def subsystem(self, T: Iterable[int]) -> "CoxeterSystem":
        """The Coxeter system of the parabolic subgroup on ``T`` (sorted)."""
        idx = sorted(set(T))
        return CoxeterSystem(
            tuple(self.generators[i] for i in idx),
            tuple(tuple(self.matrix[i][j] for j in idx) for i in idx),
            self.max_word_len,
        )


def m_closure_reduce(system: CoxeterSystem, word: Sequence[int]) -> Word:
    """Reference word problem: exhaustive closure under M-operations.

    Explores every word reachable by deleting a repeated letter pair or by a
    braid move, keeps the shortest reachable words and returns the ShortLex
    least. Exponential; meant for short words in tests.
    """
    start = tuple(word)
    system._check_len(len(start))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        nxt = system.braid_moves(x)
        for i in range(len(x) - 1):
            if x[i] == x[i + 1]:
                nxt.append(x[:i] + x[i + 2:])
        for y in nxt:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return min(seen, key=CoxeterSystem.sort_key)


def parabolic_ball_oracle(system: CoxeterSystem, T: Iterable[int], radius: int) -> set[Word]:
    """Elements of W_T up to ``radius``, found by BFS over products of
    generators in ``T`` only."""
    T = sorted(set(T))
    seen = {()}
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for s in T:
                x = system._times_gen(w, s)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return {w for w in seen if len(w) <= radius}


def named_system(kind: str, max_word_len: int | None = None) -> CoxeterSystem:
    """A few small systems used throughout the examples and tests."""
    kind = kind.lower()
    if kind == "a2":
        return validate_system([[1, 3], [3, 1]], ["s", "t"], max_word_len)
    if kind in ("dinf", "d_inf", "infinite_dihedral"):
        return validate_system([[1, INF], [INF, 1]], ["s", "t"], max_word_len)
    if kind in ("pgl2z", "pgl2"):
        # m(u,t) = 3, m(s,u) = 2, m(t,s) = inf
        return validate_system(
            [[1, INF, 2], [INF, 1, 3], [2, 3, 1]], ["s", "t", "u"], max_word_len
        )
    if kind in ("a2tilde", "affine_a2"):
        return validate_system(
            [[1, 3, 3], [3, 1, 3], [3, 3, 1]], ["s", "t", "u"], max_word_len
        )
    if kind == "pentagon":
        n = 5
        rows = [
            [1 if i == j else (2 if (i - j) % n in (1, n - 1) else INF) for j in range(n)]
            for i in range(n)
        ]
        return validate_system(rows, [f"s{i}" for i in range(n)], max_word_len)
    raise ConfigError(f"unknown named system {kind!r}")
