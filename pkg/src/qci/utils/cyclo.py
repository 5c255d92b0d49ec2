from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

ZETA = cmath.exp(1j * math.pi / 4)


def cyclo_canonicalize(x: CycloNum) -> CycloNum:
    return CycloNum.of(x.a, x.b, x.c, x.d, x.k)


@dataclass(frozen=True, slots=True)
class CycloNum:
    """Exact value (a + b*z + c*z^2 + d*z^3) / 2^k with z = exp(i*pi/4).

    Instances built through ``of`` or arithmetic are fully reduced: k == 0 or
    one of the four coefficients is odd, so equal values compare equal.
    """

    a: int
    b: int
    c: int
    d: int
    k: int = 0

    @classmethod
    def of(cls, a: int, b: int = 0, c: int = 0, d: int = 0, k: int = 0) -> CycloNum:
        if k < 0:
            raise ValueError(f"Denominator exponent must be non-negative, got {k}")
        if a == b == c == d == 0:
            return cls(0, 0, 0, 0, 0)
        while k > 0 and not (a & 1 or b & 1 or c & 1 or d & 1):
            a, b, c, d = a >> 1, b >> 1, c >> 1, d >> 1
            k -= 1
        return cls(a, b, c, d, k)

    @classmethod
    def from_int(cls, x: int) -> CycloNum:
        return cls.of(x)

    @classmethod
    def zeta_power(cls, m: int) -> CycloNum:
        m %= 8
        coef = [0, 0, 0, 0]
        if m < 4:
            coef[m] = 1
        else:
            coef[m - 4] = -1
        return cls.of(*coef)

    @classmethod
    def half(cls) -> CycloNum:
        return cls.of(1, k=1)

    @property
    def coef(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def _rescaled(self, k: int) -> Tuple[int, int, int, int]:
        shift = k - self.k
        return (self.a << shift, self.b << shift, self.c << shift, self.d << shift)

    def __add__(self, other: int | CycloNum) -> CycloNum:
        if isinstance(other, int):
            other = CycloNum.from_int(other)
        elif not isinstance(other, CycloNum):
            return NotImplemented
        k = max(self.k, other.k)
        p, q = self._rescaled(k), other._rescaled(k)
        return CycloNum.of(p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3], k)

    def __radd__(self, other: int) -> CycloNum:
        return self + other

    def __neg__(self) -> CycloNum:
        return CycloNum(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other: int | CycloNum) -> CycloNum:
        if isinstance(other, int):
            other = CycloNum.from_int(other)
        elif not isinstance(other, CycloNum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> CycloNum:
        return (-self) + other

    def __mul__(self, other: int | CycloNum) -> CycloNum:
        if isinstance(other, int):
            other = CycloNum.from_int(other)
        elif not isinstance(other, CycloNum):
            return NotImplemented
        p, q = self.coef, other.coef
        r = [0, 0, 0, 0]
        for i, pi in enumerate(p):
            if not pi:
                continue
            for j, qj in enumerate(q):
                e = i + j
                # z^4 = -1
                if e < 4:
                    r[e] += pi * qj
                else:
                    r[e - 4] -= pi * qj
        return CycloNum.of(r[0], r[1], r[2], r[3], self.k + other.k)

    def __rmul__(self, other: int) -> CycloNum:
        return self * other

    def conj(self) -> CycloNum:
        # z -> z^7 = -z^3, z^2 -> -z^2, z^3 -> -z
        return CycloNum(self.a, -self.d, -self.c, -self.b, self.k)

    def is_zero(self) -> bool:
        return self.a == self.b == self.c == self.d == 0

    def to_complex(self) -> complex:
        value = self.a + self.b * ZETA + self.c * 1j + self.d * ZETA**3
        return complex(value) / (1 << self.k)

    def __repr__(self) -> str:
        return f"CycloNum({self.a}, {self.b}, {self.c}, {self.d}; k={self.k})"

    def __str__(self) -> str:
        terms = []
        for coef, unit in zip(self.coef, ("", "z", "z^2", "z^3")):
            if coef:
                terms.append(f"{coef:+d}{unit}")
        body = "".join(terms) or "0"
        return body if self.k == 0 else f"({body})/2^{self.k}"
