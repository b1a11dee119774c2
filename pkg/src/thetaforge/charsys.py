"""Combinatorics of hyperelliptic theta characteristics.

Base characteristics eta_k attached to an ordering of the 2g+2 branch
points, subset sums eta_S mod 1, and the fundamental systems produced by a
permutation of the branch points.  Everything here is exact integer
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .characteristics import Characteristic, Parity, parity
from .errors import DimensionMismatchError, InvalidCharacteristicError


@dataclass(frozen=True)
class IndexSet:
    """Subset of the branch point labels {1, ..., 2g+2}."""

    members: frozenset
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise DimensionMismatchError("genus must be >= 1")
        bad = [k for k in self.members if not (1 <= k <= 2 * self.g + 2)]
        if bad:
            raise DimensionMismatchError(
                f"labels {bad} outside [1, {2 * self.g + 2}]"
            )

    @classmethod
    def of(cls, members: Iterable[int], g: int) -> "IndexSet":
        return cls(frozenset(int(k) for k in members), g)


def sym_diff(s: IndexSet, t: IndexSet) -> IndexSet:
    """Symmetric difference (S u T) \\ (S n T)."""
    if s.g != t.g:
        raise DimensionMismatchError("index sets have different genus")
    return IndexSet(s.members ^ t.members, s.g)


def u_set(g: int) -> IndexSet:
    """The odd-label set {1, 3, ..., 2g+1}."""
    return IndexSet.of(range(1, 2 * g + 2, 2), g)


def base_characteristic(g: int, k: int) -> Characteristic:
    """The k-th base characteristic eta_k, 1 <= k <= 2g+2, in canonical form.

    Odd-index family eta_{2m-1} (1 <= m <= g+1): top row (1/2) e_m for
    m <= g and zero for m = g+1; bottom row has 1/2 in positions 1..m-1.
    Even-index family eta_{2m} (1 <= m <= g): top row (1/2) e_m; bottom row
    has 1/2 in positions 1..m.  eta_{2g+2} is zero.
    """
    if not 1 <= k <= 2 * g + 2:
        raise DimensionMismatchError(f"label {k} outside [1, {2 * g + 2}]")
    top2 = [0] * g
    bottom2 = [0] * g
    if k == 2 * g + 2:
        return Characteristic(tuple(top2), tuple(bottom2))
    if k % 2 == 1:  # k = 2m-1
        m = (k + 1) // 2
        if m <= g:
            top2[m - 1] = 1
        n_half = m - 1
    else:  # k = 2m
        m = k // 2
        top2[m - 1] = 1
        n_half = m
    for i in range(n_half):
        bottom2[i] = 1
    return Characteristic(tuple(top2), tuple(bottom2))


def characteristic_of_set(g: int, s: IndexSet | Iterable[int]) -> Characteristic:
    """eta_S = sum of eta_k over k in S \\ {2g+2}, reduced mod 1 (canonical)."""
    if not isinstance(s, IndexSet):
        s = IndexSet.of(s, g)
    elif s.g != g:
        raise DimensionMismatchError("index set genus disagrees")
    top2 = [0] * g
    bottom2 = [0] * g
    for k in s.members:
        if k == 2 * g + 2:
            continue
        eta = base_characteristic(g, k)
        for i in range(g):
            top2[i] += eta.top2[i]
            bottom2[i] += eta.bottom2[i]
    return Characteristic(
        tuple(v % 2 for v in top2), tuple(v % 2 for v in bottom2)
    )


@dataclass(frozen=True)
class FundamentalSystem:
    """The 2g+2 characteristics eta^sigma_k attached to a permutation sigma."""

    chars: tuple
    sigma: tuple

    @property
    def g(self) -> int:
        return len(self.sigma) // 2 - 1


def _check_permutation(g: int, sigma: Sequence[int]) -> tuple:
    n = 2 * g + 2
    sigma = tuple(int(v) for v in sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise InvalidCharacteristicError(
            f"sigma must be a permutation of 1..{n}, got {sigma}"
        )
    return sigma


def fundamental_system(g: int, sigma: Sequence[int]) -> FundamentalSystem:
    """Characteristics eta^sigma_k = eta_{T_sigma o {sigma(k)} o U}.

    T_sigma = {sigma(1), ..., sigma(g)}; the first g members come out odd and
    the remaining g+2 even.
    """
    sigma = _check_permutation(g, sigma)
    t_sigma = IndexSet.of(sigma[:g], g)
    u = u_set(g)
    chars = []
    for k in range(1, 2 * g + 3):
        t_k = sym_diff(sym_diff(t_sigma, IndexSet.of([sigma[k - 1]], g)), u)
        chars.append(characteristic_of_set(g, t_k))
    return FundamentalSystem(tuple(chars), sigma)


def is_fundamental(fs: FundamentalSystem) -> bool:
    """Check the parity pattern (g odd then g+2 even) and pairwise distinctness."""
    g = fs.g
    if len(fs.chars) != 2 * g + 2:
        return False
    for k, ch in enumerate(fs.chars, start=1):
        want = Parity.ODD if k <= g else Parity.EVEN
        if parity(ch) is not want:
            return False
    seen = {(ch.top2, ch.bottom2) for ch in fs.chars}
    return len(seen) == 2 * g + 2
