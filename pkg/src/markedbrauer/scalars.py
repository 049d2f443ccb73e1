"""Exact coefficient arithmetic shared by every other module.

Coefficients are integer polynomials in the loop value ``delta`` when it is
kept symbolic, and plain integers once it is specialized.  The sign
``epsilon`` is a construction-time parameter of each algebra instance, never
a symbolic variable; it only ever enters through ``(-1)**k`` multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple, TypeVar


class ParamsMismatch(ValueError):
    """Operands built over different ground parameters."""


@dataclass(frozen=True, order=True)
class Params:
    """Ground parameters of one algebra instance.

    ``epsilon`` is +1 or -1.  ``delta`` is ``None`` for a symbolic loop
    parameter (allowed only when ``epsilon == +1``) or a concrete integer.
    ``epsilon == -1`` forces ``delta == 0``.
    """

    epsilon: int
    delta: int | None = None

    def __post_init__(self) -> None:
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        if self.epsilon == -1:
            if self.delta is None:
                object.__setattr__(self, "delta", 0)
            elif self.delta != 0:
                raise ValueError("epsilon == -1 forces delta == 0")
        elif self.delta is not None and not isinstance(self.delta, int):
            raise ValueError(f"delta must be an integer or None, got {self.delta!r}")

    @property
    def symbolic_delta(self) -> bool:
        return self.delta is None

    def require_same(self, other: "Params") -> None:
        if self != other:
            raise ParamsMismatch(f"parameters differ: {self} vs {other}")


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Scalar:
    """An exact coefficient: a polynomial in delta, constant when delta is fixed.

    ``coeffs[k]`` is the coefficient of delta**k; the tuple carries no
    trailing zeros, and the zero scalar is the empty tuple.
    """

    params: Params
    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        if not self.params.symbolic_delta and len(self.coeffs) > 1:
            raise ValueError("non-constant scalar with a specialized delta")

    # -- constructors ------------------------------------------------------

    @classmethod
    def integer(cls, params: Params, n: int) -> "Scalar":
        return cls(params, (n,))

    @classmethod
    def one(cls, params: Params) -> "Scalar":
        return cls(params, (1,))

    @classmethod
    def zero(cls, params: Params) -> "Scalar":
        return cls(params, ())

    @classmethod
    def delta_power(cls, params: Params, k: int) -> "Scalar":
        """delta**k as a scalar; collapses to an integer when delta is fixed."""
        if k < 0:
            raise ValueError("negative delta power")
        if params.symbolic_delta:
            return cls(params, (0,) * k + (1,))
        return cls(params, (params.delta**k,))

    # -- ring operations ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Scalar") -> "Scalar":
        self.params.require_same(other.params)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] += c
        for i, c in enumerate(b):
            out[i] += c
        return Scalar(self.params, out)

    def __neg__(self) -> "Scalar":
        return Scalar(self.params, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Scalar(self.params, tuple(other * c for c in self.coeffs))
        self.params.require_same(other.params)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Scalar.zero(self.params)
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Scalar(self.params, out)

    __rmul__ = __mul__

    def eps_pow(self, k: int) -> "Scalar":
        """Multiply by epsilon**k; a no-op when epsilon == +1."""
        if self.params.epsilon == -1 and k % 2:
            return -self
        return self

    def evaluate(self, delta_value: int) -> int:
        """Evaluate the polynomial at a concrete loop value.

        Rejects a nonzero value when epsilon == -1, where delta is
        identically zero.
        """
        if self.params.epsilon == -1 and delta_value != 0:
            raise ValueError("epsilon == -1 forces delta == 0")
        if not self.params.symbolic_delta and delta_value != self.params.delta:
            raise ValueError(
                f"delta already specialized to {self.params.delta}, cannot evaluate at {delta_value}"
            )
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * delta_value + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mon = "d" if k == 1 else f"d^{k}"
                parts.append(mon if c == 1 else f"-{mon}" if c == -1 else f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


K = TypeVar("K")


def lc_normalize(items: Iterable[tuple[Scalar, K]]) -> tuple[tuple[K, Scalar], ...]:
    """Combine like terms, drop zeros, sort keys: the canonical linear combination."""
    acc: dict[K, Scalar] = {}
    for coeff, key in items:
        if key in acc:
            acc[key] = acc[key] + coeff
        else:
            acc[key] = coeff
    return tuple((key, c) for key, c in sorted(acc.items()) if not c.is_zero)
