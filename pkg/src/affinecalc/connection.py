"""Affine connections with torsion and their covariant derivative kinds.

The coefficient array L[i, j, k] (one upper, two lower slots) need not be
symmetric in (j, k).  Splitting it into the symmetric part and the torsion
gives five covariant differentiation operators on tensor fields:

    kind 0   uses the symmetric part only,
    kinds 1-4 use the full coefficients with the four possible placements of
    the differentiation index in the upper and lower correction factors.

Every kind is also expressible as kind 0 plus torsion corrections weighted
by the kind coefficients (c_z, d_z); both routes are implemented
independently (``mode="direct"`` and ``mode="unified"``) so they can be
checked against each other exactly.

Iterating two covariant derivatives needs one convention choice: the second
differentiation here distributes over the first derivative's correction
products factor by factor.  For second kinds 0, 1, 2 this coincides with
differentiating the first derivative as a plain (p, q+1) tensor; for kinds
3 and 4 the two differ, because those operators do not commute with index
contraction, and the productwise form is the one under which the commutation
identities of this package close exactly.  Both are exposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .poly import Poly
from .tensor import TensorField, contract_with_connection

KINDS = (0, 1, 2, 3, 4)


@dataclass(frozen=True)
class KindCoefficients:
    """Torsion-correction weights (c_z, d_z) for each derivative kind z."""

    c: Mapping[int, Fraction]
    d: Mapping[int, Fraction]

    def __post_init__(self):
        expected_c = {0: 0, 1: 1, 2: -1, 3: 1, 4: -1}
        expected_d = {0: 0, 1: -1, 2: 1, 3: 1, 4: -1}
        for z in KINDS:
            if Fraction(self.c[z]) != expected_c[z] or Fraction(self.d[z]) != expected_d[z]:
                raise ValueError(f"kind coefficients for z={z} must be "
                                 f"c={expected_c[z]}, d={expected_d[z]}")


KIND_COEFFS = KindCoefficients(
    c={z: Fraction(v) for z, v in {0: 0, 1: 1, 2: -1, 3: 1, 4: -1}.items()},
    d={z: Fraction(v) for z, v in {0: 0, 1: -1, 2: 1, 3: 1, 4: -1}.items()},
)

# Index order of the correction factors in the four direct definitions:
# "ak" puts the summed/slot index first, "ka" puts the derivative index first.
_DIRECT_ORDERS = {1: ("ak", "ak"), 2: ("ka", "ka"), 3: ("ak", "ka"), 4: ("ka", "ak")}


def _check_kind(kind: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"derivative kind must be one of {KINDS}, got {kind!r}")


class Connection:
    """Connection coefficients L[i, j, k] with cached symmetric part and torsion."""

    def __init__(self, dim: int, comps: Sequence[Poly]):
        self._field = TensorField(dim, (1, 2), comps)
        self._sym: TensorField | None = None
        self._tor: TensorField | None = None

    @property
    def dim(self) -> int:
        return self._field.dim

    @property
    def coeffs(self) -> TensorField:
        """The raw (1,2)-indexed coefficient object (not a tensor)."""
        return self._field

    def __getitem__(self, idx: tuple[int, int, int]) -> Poly:
        return self._field[idx]

    def symmetric_part(self) -> TensorField:
        """(1,2)-indexed object with components (L[i,j,k] + L[i,k,j]) / 2."""
        if self._sym is None:
            half = Fraction(1, 2)
            out = {}
            for i, j, k in self._field.indices():
                out[i, j, k] = (self._field[i, j, k] + self._field[i, k, j]).scale(half)
            self._sym = TensorField.from_map(self.dim, (1, 2), out)
        return self._sym

    def torsion(self) -> TensorField:
        """Torsion tensor components (L[i,j,k] - L[i,k,j]) / 2, antisymmetric in (j,k)."""
        if self._tor is None:
            half = Fraction(1, 2)
            out = {}
            for i, j, k in self._field.indices():
                out[i, j, k] = (self._field[i, j, k] - self._field[i, k, j]).scale(half)
            self._tor = TensorField.from_map(self.dim, (1, 2), out)
        return self._tor

    @property
    def is_torsion_free(self) -> bool:
        return self.torsion().is_zero

    def to_json(self) -> dict:
        return {"dim": self.dim, "L": [c.to_json() for c in self._field.comps]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Connection":
        dim = data["dim"]
        return cls(dim, [Poly.from_json(dim, rec) for rec in data["L"]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Connection):
            return NotImplemented
        return self._field == other._field

    def __repr__(self) -> str:
        return f"Connection(dim={self.dim})"


def _assemble_derivative(field: TensorField, corrections) -> TensorField:
    """comma derivative plus per-k correction fields; new slot appended last.

    ``corrections(k)`` must return a list of (sign, TensorField) sharing the
    input valence.
    """
    dim = field.dim
    p, q = field.valence
    corr = {k: corrections(k) for k in range(dim)}
    comps = []
    for idx in field.indices():
        base = field[idx]
        for k in range(dim):
            val = base.diff(k)
            for sign, cf in corr[k]:
                term = cf[idx]
                val = val + term if sign > 0 else val - term
            comps.append(val)
    return TensorField(dim, (p, q + 1), comps)


def cov_deriv(conn: Connection, field: TensorField, kind: int,
              mode: str = "direct") -> TensorField:
    """Kind-z covariant derivative of a (p,q) field; result valence (p, q+1).

    ``direct`` builds kind 0 from the symmetric part and kinds 1-4 from the
    full coefficients with their index orders; ``unified`` builds every kind
    as kind 0 plus (c_z, d_z)-weighted torsion corrections.  The two must
    agree exactly.
    """
    _check_kind(kind)
    if mode not in ("direct", "unified"):
        raise ValueError(f"mode must be 'direct' or 'unified', got {mode!r}")
    if conn.dim != field.dim:
        raise ValueError(f"dimension mismatch: connection {conn.dim}, field {field.dim}")
    p, q = field.valence

    if mode == "unified" and kind != 0:
        base = cov_deriv(conn, field, 0)
        tor = conn.torsion()
        c = KIND_COEFFS.c[kind]
        d = KIND_COEFFS.d[kind]

        def corrections(k):
            out = []
            for u in range(p):
                out.append((1, contract_with_connection(tor, field, ("upper", u), k, "ak").scale(c)))
            for v in range(q):
                out.append((1, contract_with_connection(tor, field, ("lower", v), k, "ak").scale(d)))
            return out

        extra = _assemble_derivative(field, corrections)
        # _assemble_derivative added the comma part; remove it by subtracting once
        return base + extra - field.comma()

    if kind == 0:
        coeffs = conn.symmetric_part()
        up_order = low_order = "ak"
    else:
        coeffs = conn.coeffs
        up_order, low_order = _DIRECT_ORDERS[kind]

    def corrections(k):
        out = []
        for u in range(p):
            out.append((1, contract_with_connection(coeffs, field, ("upper", u), k, up_order)))
        for v in range(q):
            out.append((-1, contract_with_connection(coeffs, field, ("lower", v), k, low_order)))
        return out

    return _assemble_derivative(field, corrections)


def _contraction_twist(conn: Connection, field: TensorField,
                       cv: Fraction, dv: Fraction, scale: Fraction) -> TensorField:
    """The productwise correction of a repeated derivative; slots (m, n) appended.

    For each upper slot u:  scale * cv * sum_{a,b} T[b,a,n] T[i_u,b,m] field[..a@u..]
    for each lower slot l:  scale * dv * sum_{a,b} T[b,j_l,m] T[a,b,n] field[..a@l..]
    where T is the torsion.
    """
    dim = field.dim
    p, q = field.valence
    tor = conn.torsion()
    out = {}
    for idx in field.indices():
        for m in range(dim):
            for n in range(dim):
                acc = Poly.zero(dim)
                if cv:
                    for u in range(p):
                        for a in range(dim):
                            rep = idx[:u] + (a,) + idx[u + 1:]
                            f = field[rep]
                            if f.is_zero:
                                continue
                            for b in range(dim):
                                acc = acc + (tor[(b, a, n)] * tor[(idx[u], b, m)] * f).scale(cv)
                if dv:
                    for l in range(q):
                        pos = p + l
                        for a in range(dim):
                            rep = idx[:pos] + (a,) + idx[pos + 1:]
                            f = field[rep]
                            if f.is_zero:
                                continue
                            for b in range(dim):
                                acc = acc + (tor[(b, idx[pos], m)] * tor[(a, b, n)] * f).scale(dv)
                out[idx + (m, n)] = acc.scale(scale)
    return TensorField.from_map(dim, (p, q + 2), out)


def double_cov_deriv(conn: Connection, field: TensorField, v: int, w: int,
                     productwise: bool = True) -> TensorField:
    """Repeated covariant derivative, kind v then kind w; slots (m, n) appended.

    The first derivative's slot participates as a lower tensor slot in the
    second differentiation.  With ``productwise=True`` (default) the second
    derivative distributes over the first derivative's correction products
    factor by factor, which adds a torsion-pair twist whenever c_w + d_w is
    nonzero (second kind 3 or 4); with ``productwise=False`` the result is the
    plain composition of the two derivative operators.
    """
    _check_kind(v)
    _check_kind(w)
    second = cov_deriv(conn, cov_deriv(conn, field, v), w)
    if not productwise:
        return second
    cw_dw = KIND_COEFFS.c[w] + KIND_COEFFS.d[w]
    cv, dv = KIND_COEFFS.c[v], KIND_COEFFS.d[v]
    if cw_dw == 0 or (cv == 0 and dv == 0):
        return second
    return second + _contraction_twist(conn, field, cv, dv, cw_dw)


def curvature_like(coeffs: TensorField) -> TensorField:
    """Curvature-formula object of any (1,2) coefficient array G:

        K[i,j,m,n] = G[i,j,m],n - G[i,j,n],m
                     + sum_a (G[a,j,m] G[i,a,n] - G[a,j,n] G[i,a,m])
    """
    if coeffs.valence != (1, 2):
        raise ValueError("curvature formula needs a (1,2)-indexed object")
    dim = coeffs.dim
    out = {}
    for i, j, m, n in TensorField.zeros(dim, (1, 3)).indices():
        val = coeffs[(i, j, m)].diff(n) - coeffs[(i, j, n)].diff(m)
        for a in range(dim):
            val = val + coeffs[(a, j, m)] * coeffs[(i, a, n)] \
                      - coeffs[(a, j, n)] * coeffs[(i, a, m)]
        out[i, j, m, n] = val
    return TensorField.from_map(dim, (1, 3), out)


def curvature_R(conn: Connection) -> TensorField:
    """(1,3) curvature tensor of the symmetric part; antisymmetric in (m, n)."""
    return curvature_like(conn.symmetric_part())


def torsion_cov_deriv(conn: Connection) -> TensorField:
    """Kind-0 covariant derivative of the torsion viewed as a (1,2) tensor."""
    return cov_deriv(conn, conn.torsion(), 0)


@dataclass(frozen=True)
class CurvatureObjects:
    """Curvature tensor R plus the two curvature pseudotensors A1, A2."""

    R: TensorField
    A1: TensorField
    A2: TensorField


def pseudotensors_A(conn: Connection) -> tuple[TensorField, TensorField]:
    """The printed (1,3) curvature pseudotensors A1 and A2.

    Both share the core R[i,j,m,n] + Td[i,j,m,n] - Td[i,j,n,m] (Td the kind-0
    derivative of torsion) and the pure-torsion products; they differ in the
    mixed symmetric-torsion tail terms.  No (m, n) antisymmetry is claimed.
    """
    dim = conn.dim
    R = curvature_R(conn)
    Td = torsion_cov_deriv(conn)
    tor = conn.torsion()
    sym = conn.symmetric_part()
    a1, a2 = {}, {}
    for i, j, m, n in R.indices():
        core = R[(i, j, m, n)] + Td[(i, j, m, n)] - Td[(i, j, n, m)]
        v1 = core
        v2 = core
        for a in range(dim):
            shared = tor[(a, j, n)] * tor[(i, a, m)] - tor[(a, j, m)] * tor[(i, a, n)]
            v1 = v1 + shared - (sym[(a, j, m)] * tor[(i, a, n)]).scale(2) \
                 + sym[(a, j, n)] * tor[(i, a, m)]
            v2 = v2 + shared - (tor[(a, j, m)] * sym[(i, a, n)]).scale(2) \
                 + sym[(a, j, n)] * sym[(i, a, m)]
        a1[i, j, m, n] = v1
        a2[i, j, m, n] = v2
    return (TensorField.from_map(dim, (1, 3), a1), TensorField.from_map(dim, (1, 3), a2))


def curvature_objects(conn: Connection) -> CurvatureObjects:
    A1, A2 = pseudotensors_A(conn)
    return CurvatureObjects(R=curvature_R(conn), A1=A1, A2=A2)
