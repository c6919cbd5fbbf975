"""Finitely supported elements of a group algebra.

Coefficients are exact Gaussian rationals by default (``sympy``'s ``QQ_I``),
or Python complex numbers when an element is built with ``exact=False``.
The trace is the unnormalised Plancherel trace: the coefficient at the
identity. For a finite group it therefore differs from the normalised matrix
trace by a factor ``|G|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Iterable, Mapping

import numpy as np
from sympy.polys.domains import QQ, QQ_I

_ZERO_EXACT = QQ_I(0, 0)


def _rational(x):
    if isinstance(x, float):
        return QQ.convert(Fraction(x))
    if isinstance(x, Rational):
        return QQ(x.numerator, x.denominator)
    return QQ.convert(x)


def to_exact(x):
    """Convert an int, Fraction, float or complex to a Gaussian rational.

    Floats convert to the exact binary fraction they hold.
    """
    if isinstance(x, type(_ZERO_EXACT)):
        return x
    if isinstance(x, complex):
        return QQ_I(_rational(x.real), _rational(x.imag))
    return QQ_I(_rational(x), 0)


def to_float(x) -> complex:
    if isinstance(x, type(_ZERO_EXACT)):
        return complex(float(x.x), float(x.y))
    return complex(x)


def conj(x):
    if isinstance(x, type(_ZERO_EXACT)):
        return QQ_I(x.x, -x.y)
    return x.conjugate()


def abs2(x):
    """Squared modulus: an exact rational in exact mode."""
    if isinstance(x, type(_ZERO_EXACT)):
        return x.x * x.x + x.y * x.y
    return abs(x) ** 2


class GroupAlgebraElement:
    """A finite linear combination of group elements.

    Zero coefficients are never stored. Elements are immutable; arithmetic
    returns new elements over the same group.
    """

    __slots__ = ("group", "exact", "_coeffs")

    def __init__(self, group, coefficients: Mapping | Iterable = (), exact: bool = True):
        self.group = group
        self.exact = exact
        convert = to_exact if exact else complex
        data: dict = {}
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        for g, c in items:
            c = convert(c)
            if c:
                data[g] = c
        self._coeffs = data

    @classmethod
    def _raw(cls, group, data: dict, exact: bool) -> "GroupAlgebraElement":
        out = cls.__new__(cls)
        out.group = group
        out.exact = exact
        out._coeffs = {g: c for g, c in data.items() if c}
        return out

    @classmethod
    def delta(cls, group, g, coefficient=1, exact: bool = True) -> "GroupAlgebraElement":
        return cls(group, {g: coefficient}, exact)

    @property
    def coefficients(self) -> dict:
        return dict(self._coeffs)

    @property
    def support(self) -> list:
        return sorted(self._coeffs, key=self.group.sort_key)

    def __getitem__(self, g):
        return self._coeffs.get(g, _ZERO_EXACT if self.exact else 0j)

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def _like(self, data):
        return GroupAlgebraElement._raw(self.group, data, self.exact)

    def _scalar(self, c):
        return to_exact(c) if self.exact else complex(c)

    def __add__(self, other):
        data = dict(self._coeffs)
        for g, c in other._coeffs.items():
            data[g] = data[g] + c if g in data else c
        return self._like(data)

    def __neg__(self):
        return self._like({g: -c for g, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self._scalar(c)
        return self._like({g: c * x for g, x in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return ga_mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def adjoint(self):
        return ga_adjoint(self)

    def trace(self):
        return plancherel_trace(self)

    def to_float(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement._raw(self.group, {g: to_float(c) for g, c in self._coeffs.items()}, False)

    def to_json(self) -> list:
        return [[self.group.to_json(g), _coeff_json(self._coeffs[g])] for g in self.support]

    def __repr__(self):
        terms = " + ".join(f"({self._coeffs[g]})·{self.group.format(g)}" for g in self.support)
        return f"GroupAlgebraElement({terms or '0'})"


def _coeff_json(c):
    if isinstance(c, type(_ZERO_EXACT)):
        return [str(c.x), str(c.y)]
    return [c.real, c.imag]


def ga_mul(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """Convolution: ``(a·b)(k) = Σ_{gh=k} a(g) b(h)``."""
    group = a.group
    out: dict = {}
    for g, x in a._coeffs.items():
        for h, y in b._coeffs.items():
            k = group.multiply(g, h)
            v = x * y
            out[k] = out[k] + v if k in out else v
    return a._like(out)


def ga_adjoint(a: GroupAlgebraElement) -> GroupAlgebraElement:
    """``a*(g) = conj(a(g⁻¹))``."""
    return a._like({a.group.invert(g): conj(c) for g, c in a._coeffs.items()})


def plancherel_trace(a: GroupAlgebraElement):
    return a[a.group.identity]


def apply_multiplier(symbol: Callable[[Any], Any], a: GroupAlgebraElement) -> GroupAlgebraElement:
    return a._like({g: a._scalar(symbol(g)) * c for g, c in a._coeffs.items()})


def conditional_expectation(g0_membership: Callable[[Any], bool], a: GroupAlgebraElement) -> GroupAlgebraElement:
    """Keep the coefficients on the subgroup, drop the rest."""
    return a._like({g: c for g, c in a._coeffs.items() if g0_membership(g)})


def complement_expectation(g0_membership, a: GroupAlgebraElement) -> GroupAlgebraElement:
    return a._like({g: c for g, c in a._coeffs.items() if not g0_membership(g)})


@dataclass
class ResidualReport:
    residual_sup: float
    residual_sup_squared: Any  # exact rational in exact mode
    defect_support_size: int
    numeric_mode: str
    defect: GroupAlgebraElement | None = None

    @property
    def is_zero(self) -> bool:
        return self.defect_support_size == 0

    def to_json(self) -> dict:
        return {
            "residual_sup": "0 (exact)" if self.numeric_mode == "exact" and self.is_zero else self.residual_sup,
            "residual_sup_squared": str(self.residual_sup_squared),
            "defect_support_size": self.defect_support_size,
            "numeric_mode": self.numeric_mode,
        }


def cotlar_defect(symbol, g0_membership, f: GroupAlgebraElement) -> GroupAlgebraElement:
    """``E⊥`` of ``T(f)T(f)* - T(fT(f)*) - T(fT(f)*)* + T(T(ff*)*)``."""
    T = lambda x: apply_multiplier(symbol, x)
    tf = T(f)
    tf_star = ga_adjoint(tf)
    cross = T(ga_mul(f, tf_star))
    inner = T(ga_adjoint(T(ga_mul(f, ga_adjoint(f)))))
    total = ga_mul(tf, tf_star) - cross - ga_adjoint(cross) + inner
    return complement_expectation(g0_membership, total)


def cotlar_residual(symbol, g0_membership, f: GroupAlgebraElement, tolerance: float = 0.0) -> ResidualReport:
    """Largest coefficient of the operator Cotlar defect of ``f``.

    In exact mode the defect is exactly zero or not; ``tolerance`` only
    applies to floating mode and drops coefficients at most that large.
    """
    defect = cotlar_defect(symbol, g0_membership, f)
    if not f.exact and tolerance:
        defect = defect._like({g: c for g, c in defect._coeffs.items() if abs(c) > tolerance})
    sq = max((abs2(c) for c in defect._coeffs.values()), default=0 if not f.exact else QQ(0))
    return ResidualReport(
        residual_sup=math.sqrt(float(sq)),
        residual_sup_squared=sq,
        defect_support_size=len(defect),
        numeric_mode="exact" if f.exact else "float",
        defect=defect,
    )


def violation_witness(group, g, h, exact: bool = True) -> GroupAlgebraElement:
    """``δ_h + δ_{g⁻¹h}``: the pair ``(x, y) = (h, g⁻¹h)`` has ``xy⁻¹ = g`` and
    contributes ``(m(h) - m(g))(m(g⁻¹h) - m(g⁻¹))`` to the defect at ``g``."""
    y = group.multiply(group.invert(g), h)
    return GroupAlgebraElement(group, {h: 1, y: 1} if y != h else {h: 1}, exact)


def trace_power(f: GroupAlgebraElement, k: int):
    """``τ((f*·f)^k)``; exact in exact mode."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    base = ga_mul(ga_adjoint(f), f)
    acc = base
    for _ in range(k - 1):
        acc = ga_mul(acc, base)
    return plancherel_trace(acc)


def lp_norm_even(f: GroupAlgebraElement, k: int) -> float:
    """``‖λ(f)‖_{2k} = τ((f*f)^k)^{1/(2k)}``."""
    t = trace_power(f, k)
    value = float(t.x) if f.exact else t.real
    return max(value, 0.0) ** (1.0 / (2 * k))


ALPHA = math.log2(1 + math.sqrt(2))


def reference_bound(p: float) -> float:
    """Shape ``(p²/(p-1))^α`` of the growth bound; the constant is unknown."""
    return (p * p / (p - 1)) ** ALPHA


@dataclass
class RatioReport:
    k: int
    p: int
    samples: int
    radius: int
    seed: int
    max_ratio: float
    mean_ratio: float
    min_ratio: float
    reference_shape: float
    argmax_support: list

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "p": self.p,
            "samples": self.samples,
            "support_radius": self.radius,
            "seed": self.seed,
            "max_ratio": self.max_ratio,
            "mean_ratio": self.mean_ratio,
            "min_ratio": self.min_ratio,
            "reference_shape": self.reference_shape,
            "argmax_support": self.argmax_support,
        }


def random_element(group, radius: int, rng: np.random.Generator, support_size: int | None = None,
                   exact: bool = False, denominator: int = 4) -> GroupAlgebraElement:
    """Random element supported in ``ball(radius)``.

    Floating mode draws complex Gaussian coefficients; exact mode draws
    Gaussian rationals with the given denominator and numerators in
    ``[-2·denominator, 2·denominator]``.
    """
    ball = group.ball(radius)
    size = len(ball) if support_size is None else min(support_size, len(ball))
    picks = rng.choice(len(ball), size=size, replace=False)
    picks.sort()
    if exact:
        lim = 2 * denominator
        nums = rng.integers(-lim, lim + 1, size=(size, 2))
        coeffs = {ball[i]: QQ_I(QQ(int(x), denominator), QQ(int(y), denominator)) for i, (x, y) in zip(picks, nums)}
        return GroupAlgebraElement(group, coeffs, exact=True)
    vals = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return GroupAlgebraElement(group, {ball[i]: complex(v) for i, v in zip(picks, vals)}, exact=False)


def ratio_report(group, symbol, k: int, radius: int, samples: int, seed: int = 0,
                 support_size: int | None = None) -> RatioReport:
    """Empirical ``‖T_m f‖_{2k} / ‖f‖_{2k}`` over seeded random ``f``.

    Each sample gets its own child stream of one ``SeedSequence``, so a run
    split across workers reproduces the serial result.
    """
    children = np.random.SeedSequence(seed).spawn(samples)
    ratios = []
    best = (-1.0, [])
    for child in children:
        rng = np.random.default_rng(child)
        f = random_element(group, radius, rng, support_size)
        denom = lp_norm_even(f, k)
        if denom == 0:
            continue
        r = lp_norm_even(apply_multiplier(symbol, f), k) / denom
        ratios.append(r)
        if r > best[0]:
            best = (r, [group.to_json(g) for g in f.support])
    p = 2 * k
    return RatioReport(
        k=k, p=p, samples=len(ratios), radius=radius, seed=seed,
        max_ratio=max(ratios) if ratios else float("nan"),
        mean_ratio=float(np.mean(ratios)) if ratios else float("nan"),
        min_ratio=min(ratios) if ratios else float("nan"),
        reference_shape=reference_bound(p),
        argmax_support=best[1],
    )
