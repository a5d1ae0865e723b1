"""
Sparse Laurent polynomials in one variable $v$ with integer coefficients,
i.e. elements of the ring $Z[v, v^{-1}]$.

A polynomial is stored as a dict mapping exponent to nonzero coefficient.
Zero coefficients are stripped eagerly, so two equal polynomials always
compare equal structurally.  Coefficients are Python ints, hence
arbitrary precision; overflow is impossible by construction.

Instances are immutable after construction and safe to share between
threads.

>>> v = LaurentPoly.v()
>>> p = (v + v.bar()) * (v + v.bar())
>>> p.pairs()
((-2, 1), (0, 2), (2, 1))
>>> p.bar() == p
True
"""

from __future__ import annotations

from typing import Iterable, Mapping

__all__ = ["LaurentPoly", "ZERO", "ONE"]


class LaurentPoly:
    """An element of $Z[v, v^{-1}]$, keyed by exponent."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        data: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            c = data.get(exp, 0) + coeff
            if c:
                data[exp] = c
            elif exp in data:
                del data[exp]
        self._terms = data
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def _raw(cls, data: dict[int, int]) -> "LaurentPoly":
        """Wrap a dict already known to have no zero coefficients."""
        p = cls.__new__(cls)
        p._terms = data
        p._hash = None
        return p

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return ZERO

    @classmethod
    def one(cls) -> "LaurentPoly":
        return ONE

    @classmethod
    def v(cls, exp: int = 1, coeff: int = 1) -> "LaurentPoly":
        """The monomial ``coeff * v**exp``."""
        if coeff == 0:
            return ZERO
        return cls._raw({exp: coeff})

    @classmethod
    def const(cls, n: int) -> "LaurentPoly":
        return cls.v(0, n)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self._terms:
            return other
        if not other._terms:
            return self
        data = dict(self._terms)
        for exp, coeff in other._terms.items():
            c = data.get(exp, 0) + coeff
            if c:
                data[exp] = c
            else:
                del data[exp]
        return LaurentPoly._raw(data)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(a) > len(b):
            a, b = b, a
        data: dict[int, int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                c = data.get(e, 0) + c1 * c2
                if c:
                    data[e] = c
                elif e in data:
                    del data[e]
        return LaurentPoly._raw(data)

    def scale(self, coeff: int, shift: int = 0) -> "LaurentPoly":
        """Return ``coeff * v**shift * self``."""
        if coeff == 0 or not self._terms:
            return ZERO
        return LaurentPoly._raw(
            {e + shift: c * coeff for e, c in self._terms.items()}
        )

    def bar(self) -> "LaurentPoly":
        """The bar involution $v \\mapsto v^{-1}$."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    # -- inspection --------------------------------------------------------

    def coeff(self, exp: int) -> int:
        """Coefficient of $v^{exp}$, zero when absent."""
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        """Smallest exponent with nonzero coefficient.  Raises on zero."""
        if not self._terms:
            raise ValueError("the zero polynomial has no exponents")
        return min(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no exponents")
        return max(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Sorted ``(exponent, coefficient)`` pairs; the wire format."""
        return tuple(sorted(self._terms.items()))

    def terms(self) -> dict[int, int]:
        """A fresh copy of the underlying exponent -> coefficient map."""
        return dict(self._terms)

    def eval_at_one(self) -> int:
        return sum(self._terms.values())

    # -- protocol ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.pairs())
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for e, c in self.pairs():
            if e == 0:
                bits.append(f"{c}")
            elif e == 1:
                bits.append(f"{c}*v" if c != 1 else "v")
            else:
                bits.append(f"{c}*v^{e}" if c != 1 else f"v^{e}")
        return " + ".join(bits)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})


if __name__ == "__main__":
    import doctest

    doctest.testmod()
