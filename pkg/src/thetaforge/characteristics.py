"""Exact arithmetic for half-integer theta characteristics.

Entries are stored doubled (2*alpha) as integers so that reduction mod 1,
subset sums and the reduction sign are computed without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidCharacteristicError

_HALF_TOL = 1e-9


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class Characteristic:
    """Theta characteristic (alpha', alpha'') of some genus g.

    ``top2`` and ``bottom2`` hold the doubled entries 2*alpha' and
    2*alpha'' as plain integers; the characteristic value of entry i is
    ``top2[i] / 2``.
    """

    top2: tuple[int, ...]
    bottom2: tuple[int, ...]

    def __post_init__(self):
        if len(self.top2) == 0 or len(self.top2) != len(self.bottom2):
            raise InvalidCharacteristicError(
                "characteristic rows must be nonempty and of equal length"
            )
        if not all(isinstance(v, int) for v in self.top2 + self.bottom2):
            raise InvalidCharacteristicError("doubled entries must be integers")

    @property
    def g(self) -> int:
        return len(self.top2)

    @property
    def top(self) -> np.ndarray:
        """alpha' as a float vector."""
        return np.asarray(self.top2, dtype=float) / 2.0

    @property
    def bottom(self) -> np.ndarray:
        """alpha'' as a float vector."""
        return np.asarray(self.bottom2, dtype=float) / 2.0

    def is_canonical(self) -> bool:
        """True when every entry lies in {0, 1/2}."""
        return all(v in (0, 1) for v in self.top2 + self.bottom2)

    @classmethod
    def from_halves(cls, top, bottom) -> "Characteristic":
        """Build from float/rational entries; entries must be multiples of 1/2."""
        top = np.atleast_1d(np.asarray(top, dtype=float))
        bottom = np.atleast_1d(np.asarray(bottom, dtype=float))
        doubled = []
        for row in (top, bottom):
            d2 = 2.0 * row
            rounded = np.round(d2)
            if np.max(np.abs(d2 - rounded), initial=0.0) > _HALF_TOL:
                raise InvalidCharacteristicError(
                    f"entries must be integer multiples of 1/2, got {row}"
                )
            doubled.append(tuple(int(v) for v in rounded))
        return cls(doubled[0], doubled[1])

    @classmethod
    def zero(cls, g: int) -> "Characteristic":
        return cls((0,) * g, (0,) * g)

    def text(self) -> str:
        """Render in the CLI text format ``a1,...,ag;b1,...,bg``."""
        def fmt(v2: int) -> str:
            if v2 % 2 == 0:
                return str(v2 // 2)
            return f"{v2}/2"

        return (
            ",".join(fmt(v) for v in self.top2)
            + ";"
            + ",".join(fmt(v) for v in self.bottom2)
        )


def parse_characteristic(s: str) -> Characteristic:
    """Parse the CLI text format ``a1,...,ag;b1,...,bg`` (entries 0 or 1/2).

    Non-canonical half-integer entries such as ``3/2`` or ``-1/2`` are also
    accepted.
    """
    parts = s.split(";")
    if len(parts) != 2:
        raise InvalidCharacteristicError(f"expected 'top;bottom', got {s!r}")

    def parse_entry(tok: str) -> int:
        tok = tok.strip()
        if "/" in tok:
            num, den = tok.split("/")
            if int(den) != 2:
                raise InvalidCharacteristicError(f"bad entry {tok!r}")
            return int(num)
        return 2 * int(tok)

    top2 = tuple(parse_entry(t) for t in parts[0].split(",") if t.strip() != "")
    bottom2 = tuple(parse_entry(t) for t in parts[1].split(",") if t.strip() != "")
    if not top2 or len(top2) != len(bottom2):
        raise InvalidCharacteristicError(f"row lengths disagree in {s!r}")
    return Characteristic(top2, bottom2)


def reduce_characteristic(alpha: Characteristic) -> tuple[Characteristic, int]:
    """Reduce to the canonical representative with entries in {0, 1/2}.

    Returns ``(canonical, sign)`` with theta[alpha](z) = sign * theta[canonical](z)
    for all z.  Writing alpha = canonical + n with integer n = (n', n''), the
    sign is (-1)**(2 * canonical_top . n'').
    """
    can_top2 = tuple(v % 2 for v in alpha.top2)
    can_bottom2 = tuple(v % 2 for v in alpha.bottom2)
    n_bottom = [(b - cb) // 2 for b, cb in zip(alpha.bottom2, can_bottom2)]
    # 2 * canonical' . n'' = sum of (doubled canonical top) * n''.
    exponent = sum(ct * nb for ct, nb in zip(can_top2, n_bottom))
    sign = -1 if exponent % 2 else 1
    return Characteristic(can_top2, can_bottom2), sign


def parity(alpha: Characteristic) -> Parity:
    """Parity of the characteristic: even iff 4 * alpha'.alpha'' is even.

    4 * alpha'.alpha'' equals the integer top2 . bottom2, so the test is exact,
    and it is invariant under reduction to the canonical representative.
    """
    dot = sum(t * b for t, b in zip(alpha.top2, alpha.bottom2))
    return Parity.EVEN if dot % 2 == 0 else Parity.ODD


def is_even(alpha: Characteristic) -> bool:
    return parity(alpha) is Parity.EVEN
