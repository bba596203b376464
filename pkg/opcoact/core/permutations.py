"""Permutations in one-line notation: a tuple (σ(1), …, σ(n)) of 1-based images."""

from __future__ import annotations

from itertools import permutations as _all_orderings
from typing import Iterator, Sequence

from sympy.combinatorics import Permutation as SymPermutation

from opcoact.utils.errors import InputError

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def validate(sigma: Sequence[int], n: int | None = None) -> Perm:
    """Check that sigma is a permutation of 1..len(sigma) (and of the expected size).

    Raises:
        InputError: If it is not.
    """
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise InputError(f"{list(sigma)} is not a permutation.")
    if n is not None and len(sigma) != n:
        raise InputError(f"Permutation {list(sigma)} has size {len(sigma)}, expected {n}.")
    return sigma


def then(sigma: Perm, tau: Perm) -> Perm:
    """The product acting as sigma first, then tau: (f·σ)·τ = f·then(σ, τ), i.e. τ∘σ."""
    return tuple(tau[s - 1] for s in sigma)


def inverse(sigma: Perm) -> Perm:
    out = [0] * len(sigma)
    for pos, image in enumerate(sigma, start=1):
        out[image - 1] = pos
    return tuple(out)


def from_cycles(n: int, *cycles: Sequence[int]) -> Perm:
    """Build a permutation of 1..n from 1-based cycles, e.g. from_cycles(3, (1, 2, 3))."""
    zero_based = [[c - 1 for c in cycle] for cycle in cycles if len(cycle) > 1]
    return tuple(x + 1 for x in SymPermutation(zero_based, size=n).array_form)


def sign(sigma: Perm) -> int:
    return SymPermutation([s - 1 for s in sigma]).signature()


def adjacent_word(sigma: Perm) -> list[int]:
    """Adjacent transpositions s_t (1-based t) with f·σ = (…((f·s_{t1})·s_{t2})…).

    Bubble-sorting the one-line notation of σ by adjacent position swaps records exactly this word.
    """
    arr = list(sigma)
    word: list[int] = []
    for end in range(len(arr) - 1, 0, -1):
        for t in range(end):
            if arr[t] > arr[t + 1]:
                arr[t], arr[t + 1] = arr[t + 1], arr[t]
                word.append(t + 1)
    return word


def transposition(n: int, t: int) -> Perm:
    """The adjacent transposition (t, t+1) in S_n."""
    arr = list(range(1, n + 1))
    arr[t - 1], arr[t] = arr[t], arr[t - 1]
    return tuple(arr)


def block(sigma: Perm, j: int, tau: Perm) -> Perm:
    """σ∘ⱼτ: the j-th entry of σ replaced by the block σ(j)−1+τ(·), larger entries shifted up."""
    m = len(tau)
    pivot = sigma[j - 1]
    out: list[int] = []
    for pos, value in enumerate(sigma, start=1):
        if pos == j:
            out.extend(pivot - 1 + t for t in tau)
        else:
            out.append(value if value < pivot else value + m - 1)
    return tuple(out)


def all_permutations(n: int) -> Iterator[Perm]:
    """Every permutation of 1..n in lexicographic order."""
    return _all_orderings(range(1, n + 1))
