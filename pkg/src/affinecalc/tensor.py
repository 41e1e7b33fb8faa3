"""Tensor fields with polynomial components over a fixed coordinate chart.

A ``TensorField`` of valence ``(p, q)`` in dimension ``dim`` holds a dense
array of ``dim**(p+q)`` :class:`~affinecalc.poly.Poly` components, addressed
by a multi-index ``(i_1..i_p, j_1..j_q)`` with upper indices first, row-major
lexicographic, 0-based.  All reporting helpers print indices 1-based.

The comma derivative and connection contraction below are raw index-level
operations; nothing here claims tensorial transformation behaviour for their
outputs.  Components are immutable and every operation is pure.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .poly import Poly, Scalar


class Valence(NamedTuple):
    """Number of upper (p) and lower (q) index slots."""
    p: int
    q: int


def _check_valence(p: int, q: int) -> None:
    if p < 0 or q < 0:
        raise ValueError(f"valence must be non-negative, got ({p}, {q})")


class TensorField:
    """Dense valence-(p,q) field of exact polynomial components."""

    __slots__ = ("dim", "valence", "comps")

    def __init__(self, dim: int, valence: Valence | tuple[int, int], comps: Sequence[Poly]):
        p, q = valence
        _check_valence(p, q)
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        size = dim ** (p + q)
        comps = list(comps)
        if len(comps) != size:
            raise ValueError(f"expected {size} components for dim {dim} valence ({p},{q}), "
                             f"got {len(comps)}")
        for c in comps:
            if c.num_vars != dim:
                raise ValueError(f"component has {c.num_vars} variables, expected {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "valence", Valence(p, q))
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("TensorField is immutable")

    # ---- construction ----------------------------------------------------

    @classmethod
    def zeros(cls, dim: int, valence: Valence | tuple[int, int]) -> "TensorField":
        p, q = valence
        z = Poly.zero(dim)
        return cls(dim, (p, q), [z] * dim ** (p + q))

    @classmethod
    def from_map(cls, dim: int, valence: Valence | tuple[int, int],
                 entries: Mapping[tuple[int, ...], Poly]) -> "TensorField":
        """Build from a sparse {multi-index: Poly} mapping; missing entries are zero."""
        field = cls.zeros(dim, valence)
        comps = list(field.comps)
        for idx, poly in entries.items():
            comps[field.offset(idx)] = poly
        return cls(dim, valence, comps)

    # ---- indexing ----------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.valence.p + self.valence.q

    def offset(self, idx: tuple[int, ...]) -> int:
        if len(idx) != self.rank:
            raise IndexError(f"multi-index {idx} has rank {len(idx)}, expected {self.rank}")
        off = 0
        for i in idx:
            if not 0 <= i < self.dim:
                raise IndexError(f"index {i} out of range for dim {self.dim}")
            off = off * self.dim + i
        return off

    def __getitem__(self, idx: tuple[int, ...]) -> Poly:
        if isinstance(idx, int):
            idx = (idx,)
        return self.comps[self.offset(idx)]

    def indices(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(range(self.dim), repeat=self.rank)

    # ---- componentwise arithmetic -------------------------------------------

    def _check_same_shape(self, other: "TensorField") -> None:
        if self.dim != other.dim or self.valence != other.valence:
            raise ValueError(f"shape mismatch: dim {self.dim} valence {tuple(self.valence)} "
                             f"vs dim {other.dim} valence {tuple(other.valence)}")

    def __add__(self, other: "TensorField") -> "TensorField":
        self._check_same_shape(other)
        return TensorField(self.dim, self.valence,
                           [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "TensorField") -> "TensorField":
        self._check_same_shape(other)
        return TensorField(self.dim, self.valence,
                           [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "TensorField":
        return TensorField(self.dim, self.valence, [-a for a in self.comps])

    def scale(self, factor: Scalar) -> "TensorField":
        f = Fraction(factor)
        return TensorField(self.dim, self.valence, [a.scale(f) for a in self.comps])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorField):
            return NotImplemented
        return (self.dim == other.dim and self.valence == other.valence
                and self.comps == other.comps)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.comps)

    # ---- index-level operations ---------------------------------------------

    def comma(self) -> "TensorField":
        """Partial-derivative array: entry (..., k) = d(component ...)/dx^k.

        The new slot is appended after the lower indices.  The result is a
        plain indexed array; it is not claimed to transform as a tensor.
        """
        p, q = self.valence
        dim = self.dim
        comps = []
        for c in self.comps:
            comps.extend(c.diff(k) for k in range(dim))
        return TensorField(dim, (p, q + 1), comps)

    def swap_lower(self, a: int, b: int) -> "TensorField":
        """Exchange lower slots ``a`` and ``b`` (0-based among the lower slots)."""
        p, q = self.valence
        if not (0 <= a < q and 0 <= b < q):
            raise IndexError(f"lower slots ({a}, {b}) invalid for valence ({p},{q})")
        out = {}
        for idx in self.indices():
            tgt = list(idx)
            tgt[p + a], tgt[p + b] = tgt[p + b], tgt[p + a]
            out[tuple(tgt)] = self[idx]
        return TensorField.from_map(self.dim, self.valence, out)

    # ---- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "p": self.valence.p,
            "q": self.valence.q,
            "components": [c.to_json() for c in self.comps],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TensorField":
        dim = data["dim"]
        comps = [Poly.from_json(dim, rec) for rec in data["components"]]
        return cls(dim, (data["p"], data["q"]), comps)

    def __repr__(self) -> str:
        p, q = self.valence
        return f"TensorField(dim={self.dim}, valence=({p},{q}))"


IndexOrder = str  # "ak": slot index then derivative index; "ka": derivative index first


def contract_with_connection(coeffs: "TensorField", field: TensorField,
                             slot: tuple[str, int], deriv_index: int,
                             index_order: IndexOrder = "ak") -> TensorField:
    """Single summed connection correction term for one index slot.

    ``coeffs`` is a (1,2)-indexed object C[i, j, k].  For an upper slot ``u``
    the result component at multi-index ``I`` is

        sum_a C[I_u, a, k] * field[I with slot u replaced by a]      ("ak")
        sum_a C[I_u, k, a] * field[I with slot u replaced by a]      ("ka")

    and for a lower slot ``v`` (0-based among lower slots)

        sum_a C[a, I_v, k] * field[I with slot v replaced by a]      ("ak")
        sum_a C[a, k, I_v] * field[I with slot v replaced by a]      ("ka")

    with k = ``deriv_index``.  The caller owns any sign convention.
    """
    kind, pos = slot
    p, q = field.valence
    if coeffs.valence != (1, 2) or coeffs.dim != field.dim:
        raise ValueError("connection coefficients must be a (1,2)-indexed object of equal dim")
    if index_order not in ("ak", "ka"):
        raise ValueError(f"index_order must be 'ak' or 'ka', got {index_order!r}")
    if kind == "upper":
        if not 0 <= pos < p:
            raise IndexError(f"upper slot {pos} invalid for valence ({p},{q})")
        flat = pos
    elif kind == "lower":
        if not 0 <= pos < q:
            raise IndexError(f"lower slot {pos} invalid for valence ({p},{q})")
        flat = p + pos
    else:
        raise ValueError(f"slot kind must be 'upper' or 'lower', got {kind!r}")

    dim = field.dim
    k = deriv_index
    if not 0 <= k < dim:
        raise IndexError(f"derivative index {k} out of range for dim {dim}")
    comps = []
    for idx in field.indices():
        acc = Poly.zero(dim)
        for a in range(dim):
            rep = idx[:flat] + (a,) + idx[flat + 1:]
            if kind == "upper":
                c = coeffs[(idx[flat], a, k)] if index_order == "ak" else coeffs[(idx[flat], k, a)]
            else:
                c = coeffs[(a, idx[flat], k)] if index_order == "ak" else coeffs[(a, k, idx[flat])]
            acc = acc + c * field[rep]
        comps.append(acc)
    return TensorField(dim, (p, q), comps)
