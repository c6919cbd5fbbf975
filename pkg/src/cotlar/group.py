"""The minimal interface shared by every group handle in the package.

Coxeter systems, graph products and the rank-two lattice all provide it, so
symbol checks and group-algebra arithmetic are written once.
"""
from __future__ import annotations

from typing import Any, Hashable, Protocol, Sequence, runtime_checkable


@runtime_checkable
class Group(Protocol):
    identity: Hashable

    def multiply(self, a, b): ...

    def invert(self, a): ...

    def ball(self, radius: int) -> list: ...

    def sort_key(self, a) -> Any: ...

    def format(self, a) -> str: ...

    def to_json(self, a) -> Any: ...


def left_translates(group, a, elements: Sequence) -> dict:
    """``{h: a*h}`` for every ``h`` in ``elements``.

    Uses the group's incremental version when it has one (prefix-closed
    balls make this one generator step per element).
    """
    fast = getattr(group, "left_translates", None)
    if fast is not None:
        return fast(a, elements)
    return {h: group.multiply(a, h) for h in elements}
