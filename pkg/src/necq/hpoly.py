"""Polynomials in the formal deformation parameter hbar over the rationals.

Every coefficient in the quantized algebras lives here.  The class is a thin
dict {power: Fraction} kept free of zero entries, so equality is exact and
hashing/ordering of the *keys* of linear combinations can stay elsewhere.
"""

from __future__ import annotations

from fractions import Fraction


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact rational")


class HPoly:
    """An exact polynomial in hbar with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs: dict[int, Fraction] = {}
        if coeffs:
            for power, value in coeffs.items():
                value = _coerce(value)
                if value:
                    self.coeffs[power] = value

    @classmethod
    def const(cls, value) -> "HPoly":
        return cls({0: _coerce(value)})

    @classmethod
    def hbar(cls, power: int = 1, value=1) -> "HPoly":
        return cls({power: _coerce(value)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree in hbar; -1 for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else -1

    def coefficient(self, power: int) -> Fraction:
        return self.coeffs.get(power, Fraction(0))

    def at_zero(self) -> Fraction:
        """The constant term, i.e. the evaluation at hbar = 0."""
        return self.coeffs.get(0, Fraction(0))

    def __add__(self, other: "HPoly") -> "HPoly":
        out = dict(self.coeffs)
        for power, value in other.coeffs.items():
            total = out.get(power, Fraction(0)) + value
            if total:
                out[power] = total
            else:
                out.pop(power, None)
        result = HPoly()
        result.coeffs = out
        return result

    def __neg__(self) -> "HPoly":
        result = HPoly()
        result.coeffs = {p: -v for p, v in self.coeffs.items()}
        return result

    def __sub__(self, other: "HPoly") -> "HPoly":
        return self + (-other)

    def __mul__(self, other) -> "HPoly":
        if not isinstance(other, HPoly):
            other = HPoly.const(other)
        out: dict[int, Fraction] = {}
        for p, v in self.coeffs.items():
            for q, w in other.coeffs.items():
                total = out.get(p + q, Fraction(0)) + v * w
                if total:
                    out[p + q] = total
                else:
                    out.pop(p + q, None)
        result = HPoly()
        result.coeffs = out
        return result

    __rmul__ = __mul__

    def scale(self, value) -> "HPoly":
        value = _coerce(value)
        result = HPoly()
        if value:
            result.coeffs = {p: v * value for p, v in self.coeffs.items()}
        return result

    def shift(self, powers: int) -> "HPoly":
        """Multiply by hbar**powers (powers may not drive exponents negative)."""
        if self.coeffs and min(self.coeffs) + powers < 0:
            raise ValueError("hbar exponent would become negative")
        result = HPoly()
        result.coeffs = {p + powers: v for p, v in self.coeffs.items()}
        return result

    def divide_hbar(self) -> "HPoly":
        """Exact division by hbar; raises if the constant term is nonzero."""
        if self.coefficient(0):
            raise ValueError("not divisible by hbar: nonzero constant term")
        return self.shift(-1)

    def truncate(self, max_power: int) -> "HPoly":
        result = HPoly()
        result.coeffs = {p: v for p, v in self.coeffs.items() if p <= max_power}
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, HPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == HPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"HPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for power in sorted(self.coeffs):
            value = self.coeffs[power]
            if power == 0:
                parts.append(str(value))
                continue

            if power == 1:
                sym = "hbar"
            else:
                sym = f"hbar^{power}"
            if value == 1:
                parts.append(sym)
            elif value == -1:
                parts.append(f"-{sym}")
            else:
                parts.append(f"{value}*{sym}")
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text


ZERO = HPoly()
ONE = HPoly.const(1)
HBAR = HPoly.hbar()
