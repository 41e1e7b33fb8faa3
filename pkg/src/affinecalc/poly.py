"""Exact sparse multivariate polynomials over the rationals.

A polynomial in ``num_vars`` coordinate variables is stored as a dictionary
mapping exponent tuples to nonzero ``Fraction`` coefficients:

    2*x0^2*x1 - 1/3   ->   {(2, 1): Fraction(2), (0, 0): Fraction(-1, 3)}

The zero polynomial is the empty dictionary.  Every operation returns a new
canonical ``Poly`` (no zero coefficients are ever stored), so equal
polynomials always have identical term maps and ``==`` is a reliable
identity test.  Instances are immutable by convention and safe to share.

Degrees are never capped here; any truncation is the caller's business.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


class Poly:
    """Multivariate polynomial with exact rational coefficients."""

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Mapping[Exponent, Scalar] | None = None):
        if num_vars < 0:
            raise ValueError(f"num_vars must be non-negative, got {num_vars}")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if len(exp) != num_vars:
                    raise ValueError(
                        f"exponent tuple {exp} has length {len(exp)}, expected {num_vars}")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(exp)] = c
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> "Poly":
        return cls(num_vars)

    @classmethod
    def const(cls, num_vars: int, value: Scalar) -> "Poly":
        return cls(num_vars, {(0,) * num_vars: Fraction(value)})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Poly":
        """The coordinate polynomial x_index."""
        if not 0 <= index < num_vars:
            raise IndexError(f"variable index {index} out of range for {num_vars} variables")
        exp = [0] * num_vars
        exp[index] = 1
        return cls(num_vars, {tuple(exp): Fraction(1)})

    # ---- ring operations ----------------------------------------------

    def _check_same_vars(self, other: "Poly") -> None:
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"variable-count mismatch: {self.num_vars} vs {other.num_vars}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_same_vars(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = terms.get(exp)
            if acc is None:
                terms[exp] = coeff
            else:
                acc = acc + coeff
                if acc:
                    terms[exp] = acc
                else:
                    del terms[exp]
        out = Poly.__new__(Poly)
        object.__setattr__(out, "num_vars", self.num_vars)
        object.__setattr__(out, "terms", terms)
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        object.__setattr__(out, "num_vars", self.num_vars)
        object.__setattr__(out, "terms", {e: -c for e, c in self.terms.items()})
        return out

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check_same_vars(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exp)
                if acc is None:
                    terms[exp] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        terms[exp] = acc
                    else:
                        del terms[exp]
        out = Poly.__new__(Poly)
        object.__setattr__(out, "num_vars", self.num_vars)
        object.__setattr__(out, "terms", terms)
        return out

    def __rmul__(self, other: Scalar) -> "Poly":
        return self.scale(other)

    def scale(self, factor: Scalar) -> "Poly":
        f = Fraction(factor)
        out = Poly.__new__(Poly)
        object.__setattr__(out, "num_vars", self.num_vars)
        if f == 0:
            object.__setattr__(out, "terms", {})
        else:
            object.__setattr__(out, "terms", {e: c * f for e, c in self.terms.items()})
        return out

    # ---- calculus ------------------------------------------------------

    def diff(self, var: int) -> "Poly":
        """Formal partial derivative with respect to coordinate ``var``."""
        if not 0 <= var < self.num_vars:
            raise IndexError(f"variable index {var} out of range for {self.num_vars} variables")
        terms: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            k = exp[var]
            if k == 0:
                continue
            new = list(exp)
            new[var] = k - 1
            terms[tuple(new)] = coeff * k
        return Poly(self.num_vars, terms)

    def eval(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.num_vars:
            raise ValueError(
                f"point has dimension {len(point)}, expected {self.num_vars}")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            val = coeff
            for x, e in zip(pt, exp):
                if e:
                    val *= x ** e
            total += val
        return total

    # ---- inspection ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            coeff = self.terms[exp]
            factors = [f"x{i}" + (f"^{e}" if e > 1 else "")
                       for i, e in enumerate(exp) if e]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(coeff) + "*" + "*".join(factors))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    # ---- serialization --------------------------------------------------

    def to_json(self) -> list[dict]:
        """List of {coeff_num, coeff_den, exponents} records, sorted for determinism."""
        return [
            {"coeff_num": c.numerator, "coeff_den": c.denominator, "exponents": list(e)}
            for e, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, num_vars: int, records: Iterable[Mapping]) -> "Poly":
        terms = {
            tuple(r["exponents"]): Fraction(r["coeff_num"], r["coeff_den"])
            for r in records
        }
        return cls(num_vars, terms)
