"""Polynomials in the translation operator T, where (T y)(t) = y(t+1).

An `OperatorPoly` is the left-hand side of a constant-coefficient difference
equation: a_0*T^n + a_1*T^(n-1) + ... + a_n applied to an unknown sequence.
Everything here is exact; see `solver` for how these get inverted.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import Coeff, Poly


class ZeroOperatorError(ValueError):
    """The zero polynomial is not a usable difference operator."""


class ZeroScaleError(ValueError):
    """Scaling the operator argument by 0 would collapse T to a constant."""


@dataclass(init=False, frozen=True)
class OperatorPoly:
    """Immutable operator polynomial with exact coefficients, lowest power first.

    >>> P = OperatorPoly(4, -5, 1)        # T^2 - 5*T + 4
    >>> P(3)
    Fraction(-2, 1)
    >>> str(P.scale_argument(3))
    '9*T^2 - 15*T + 4'
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, *coeffs: Coeff | Iterable[Coeff]) -> None:
        p = Poly(*coeffs)
        if p.is_zero:
            raise ZeroOperatorError("operator polynomial must be nonzero")
        object.__setattr__(self, "coeffs", p.coeffs)

    @classmethod
    def from_poly(cls, p: Poly) -> OperatorPoly:
        return cls(p.coeffs)

    def as_poly(self) -> Poly:
        return Poly(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam: Coeff) -> Fraction:
        """Evaluate the characteristic polynomial P(lam) exactly."""
        return self.as_poly()(lam)

    def __mul__(self, other: OperatorPoly) -> OperatorPoly:
        return OperatorPoly.from_poly(self.as_poly() * other.as_poly())

    def __pow__(self, n: int) -> OperatorPoly:
        return OperatorPoly.from_poly(self.as_poly() ** n)

    def scale_argument(self, lam: Coeff) -> OperatorPoly:
        """The operator P(lam*T): each T^k coefficient picks up lam^k."""
        lam = Fraction(lam)
        if lam == 0:
            raise ZeroScaleError("cannot scale operator argument by 0")
        return OperatorPoly(c * lam**k for k, c in enumerate(self.coeffs))

    def taylor_shifted(self, lam: Coeff) -> Poly:
        """P expanded around lam: the polynomial p~ with p~(u) = P(u + lam)."""
        return self.as_poly().taylor_shift(lam)

    def factor_root(self, lam: Coeff) -> tuple[int, OperatorPoly]:
        """Split P = (T - lam)^m * S with S(lam) != 0; returns (m, S).

        m is 0 when lam is not a characteristic root.
        """
        lam = Fraction(lam)
        p = self.as_poly()
        m = 0
        while p.degree >= 1 and p(lam) == 0:
            p = p.deflate(lam)
            m += 1
        return m, OperatorPoly.from_poly(p)

    def reduce_shift(self) -> tuple[int, OperatorPoly]:
        """Split P = T^k * Q with Q having a nonzero trailing coefficient."""
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k, OperatorPoly(self.coeffs[k:])

    def __str__(self) -> str:
        return self.as_poly().render("T")
