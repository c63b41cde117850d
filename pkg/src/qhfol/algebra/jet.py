"""Truncated univariate power series ``c_0 + c_1 z + ... + c_N z^N``."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Jet1:
    order: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient array must have length order + 1")

    @classmethod
    def from_list(cls, coeffs, order=None):
        coeffs = list(coeffs)
        order = len(coeffs) - 1 if order is None else order
        coeffs = (coeffs + [0] * (order + 1))[: order + 1]
        return cls(order, tuple(coeffs))

    def __add__(self, other):
        return Jet1(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return Jet1(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c):
        return Jet1(self.order, tuple(a * c for a in self.coeffs))

    def __mul__(self, other):
        n = self.order
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return Jet1(n, tuple(out))

    def compose(self, inner):
        """self(inner(z)) truncated; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must vanish at 0")
        n = self.order
        result = Jet1(n, (self.coeffs[0],) + (0,) * n)
        power = Jet1(n, (1,) + (0,) * n)
        for k in range(1, n + 1):
            power = power * inner
            if self.coeffs[k] != 0:
                result = result + power.scale(self.coeffs[k])
        return result

    def truncate(self, n):
        return Jet1.from_list(self.coeffs[: n + 1], n)

    def evaluate(self, z):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc
