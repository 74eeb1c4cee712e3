"""Highest-weight labels of SO(N) irreps and the interlacing branching rule.

A partition of SO(N) is a weakly decreasing integer tuple of length
M = N // 2. For even N the last entry may be negative (only its absolute
value is bounded by the previous one); for odd N all entries are >= 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


class PartitionError(ValueError):
    """Structural problem with a partition label (wrong length, wrong group)."""


class ContractingIndexError(ValueError):
    """The contracting-sequence index is below the admissible range."""


def _is_integral(v) -> bool:
    try:
        return int(v) == v
    except (TypeError, ValueError):
        return False


def validate_partition(entries: Sequence[int], N: int) -> bool:
    """True iff ``entries`` satisfies the dominance conditions for SO(N).

    A length different from ``N // 2`` raises :class:`PartitionError` rather
    than returning False. Non-integer entries are not valid group labels.
    """
    if N < 1:
        raise PartitionError(f"group size must be >= 1, got {N}")
    M = N // 2
    if len(entries) != M:
        raise PartitionError(f"SO({N}) partitions have {M} entries, got {len(entries)}")
    if not all(_is_integral(e) for e in entries):
        return False
    e = [int(v) for v in entries]
    if M == 0:
        return True
    if any(e[i] < e[i + 1] for i in range(M - 2)):
        return False
    if N % 2 == 0:
        return M == 1 or e[M - 2] >= abs(e[M - 1])
    return (M == 1 or e[M - 2] >= e[M - 1]) and e[M - 1] >= 0


@dataclass(frozen=True)
class Partition:
    entries: tuple
    group_size: int

    def __post_init__(self):
        ent = tuple(self.entries)
        if not validate_partition(ent, self.group_size):
            raise PartitionError(f"{ent} is not a valid SO({self.group_size}) partition")
        object.__setattr__(self, "entries", tuple(int(v) for v in ent))

    @classmethod
    def of(cls, N: int, *entries: int) -> "Partition":
        """Build an SO(N) label, padding missing trailing entries with zeros."""
        M = N // 2
        ent = tuple(entries) + (0,) * (M - len(entries))
        return cls(ent, N)

    @classmethod
    def trivial(cls, N: int) -> "Partition":
        return cls((0,) * (N // 2), N)

    @property
    def first(self) -> int:
        return self.entries[0] if self.entries else 0

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return f"SO({self.group_size}){self.entries}"


def _interlacing_ranges(p: Partition):
    """Per-entry integer ranges of the SO(N-1) labels interlacing ``p``.

    Odd N = 2M+1: l1 >= b1 >= l2 >= ... >= b_{M-1} >= l_M >= |b_M|.
    Even N = 2M:  l1 >= b1 >= l2 >= ... >= b_{M-1} >= |l_M|.
    """
    lam = p.entries
    N = p.group_size
    M = len(lam)
    ranges = []
    if N % 2 == 1:
        for i in range(M - 1):
            ranges.append(range(lam[i + 1], lam[i] + 1))
        if M:
            ranges.append(range(-lam[M - 1], lam[M - 1] + 1))
    else:
        for i in range(M - 2):
            ranges.append(range(lam[i + 1], lam[i] + 1))
        if M >= 2:
            ranges.append(range(abs(lam[M - 1]), lam[M - 2] + 1))
    return ranges


def _interlacing_patterns(p: Partition) -> Iterator[tuple]:
    yield from itertools.product(*_interlacing_ranges(p))


def branch(p: Partition) -> list[Partition]:
    """Irreducible SO(N-1) constituents of the SO(N) irrep ``p``.

    Sorted lexicographically (ascending) and free of duplicates. SO(2)
    restricts to the single empty label of SO(1).
    """
    N = p.group_size
    if N < 2:
        raise PartitionError("SO(1) has no subgroup to branch to")
    out = {Partition(t, N - 1) for t in _interlacing_patterns(p)}
    return sorted(out, key=lambda q: q.entries)


def multiplicity(tau: Partition, pi: Partition) -> int:
    """Number of copies of the SO(N-1) irrep ``tau`` inside the SO(N) irrep ``pi``.

    Counts interlacing patterns equal to ``tau`` directly, so the result
    would expose a non multiplicity-free branching if one existed.
    """
    if tau.group_size != pi.group_size - 1:
        raise PartitionError(
            f"multiplicity needs SO(N-1) inside SO(N); got {tau} and {pi}")
    return sum(1 for t in _interlacing_patterns(pi) if t == tau.entries)


def contracting_label(sigma: Partition, ell: int) -> Partition:
    """SO(n+1) label (ell, sigma_1, ..., sigma_{m-1}) of the contracting sequence.

    ``sigma`` labels an irrep of SO(n-1).
    """
    n = sigma.group_size + 1
    target = n + 1
    M = target // 2
    ent = (int(ell),) + sigma.entries
    ent = ent + (0,) * (M - len(ent))
    if not validate_partition(ent, target):
        raise ContractingIndexError(
            f"sequence index below range: ell={ell} is smaller than sigma_1 for {sigma}")
    return Partition(ent, target)


def min_contracting_index(tau: Partition) -> int:
    """Smallest ell from which tau sits inside every rho_{sigma, ell} with sigma in tau.

    This is tau_1; for SO(2), whose single entry carries a sign, it is |tau_1|.
    """
    return abs(tau.first)


def partitions(N: int, max_first: int) -> list[Partition]:
    """All SO(N) partitions with first entry at most ``max_first``."""
    M = N // 2
    if M == 0:
        return [Partition((), N)]
    lo = -max_first if N % 2 == 0 else 0
    out = []
    for t in itertools.product(range(lo, max_first + 1), repeat=M):
        if validate_partition(t, N):
            out.append(Partition(t, N))
    return sorted(out, key=lambda q: q.entries)


def dimension(p: Partition) -> int:
    """Dimension of the SO(N) irrep for N <= 5 (Weyl dimension formula)."""
    N = p.group_size
    e = p.entries
    if N == 1:
        return 1
    if N == 2:
        return 1
    if N == 3:
        return 2 * e[0] + 1
    if N == 4:
        return (e[0] + e[1] + 1) * (e[0] - e[1] + 1)
    if N == 5:
        a, b = e
        return (a - b + 1) * (a + b + 2) * (2 * a + 3) * (2 * b + 1) // 6
    raise NotImplementedError("dimension is only tabulated for N <= 5")


def commutativity_check(n: int, tau: Partition, max_sigma: int) -> bool:
    """True iff every SO(n-1) label sigma with sigma_1 <= max_sigma occurs at most once in tau.

    Via m(tau, omega_{sigma,R}) = m(sigma, tau) this is the multiplicity-one
    condition for (M(n), SO(n), tau) on the generic representations.
    """
    if tau.group_size != n:
        raise PartitionError(f"tau must label an SO({n}) irrep, got {tau}")
    return all(multiplicity(s, tau) <= 1 for s in partitions(n - 1, max_sigma))
