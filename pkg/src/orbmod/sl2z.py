"""Integer SL(2, Z) arithmetic and the conformal-block representation.

The modular group is generated by ``S = (0, -1; 1, 0)`` and
``T = (1, 1; 0, 1)``.  This module factors arbitrary integer matrices of
determinant one into words in those generators (Euclidean reduction on the
first column, exact integer round trip), and evaluates the representation
``rho`` attached to a modular datum -- ``rho(S)`` is the S-matrix and
``rho(T)`` the diagonal of T-phases -- on any group element.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .modular_data import ModularDatum, Phase, t_matrix

__all__ = [
    "SL2Matrix",
    "GeneratorWord",
    "S_GEN",
    "T_GEN",
    "IDENTITY",
    "evaluate_word",
    "decompose_to_generators",
    "rho_of",
    "SectorCongruence",
    "sector_congruence",
    "is_prime",
]

_TOKEN_RE = re.compile(r"^(S|T\^(-?\d+))$")


@dataclass(frozen=True)
class SL2Matrix:
    """Integer matrix ``(a, b; c, d)`` with ``a d - b c = 1``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(
                f"determinant must be 1, got {self.a * self.d - self.b * self.c}"
            )

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}; {self.c}, {self.d})"


S_GEN = SL2Matrix(0, -1, 1, 0)
T_GEN = SL2Matrix(1, 1, 0, 1)
IDENTITY = SL2Matrix(1, 0, 0, 1)


def _t_power(n: int) -> SL2Matrix:
    return SL2Matrix(1, n, 0, 1)


@dataclass(frozen=True)
class GeneratorWord:
    """A word in the generators: tokens ``"S"`` or ``"T^n"`` (``n != 0``).

    Adjacent T tokens are forbidden (they must be merged), so the printed
    form is canonical for the token sequence it stores.  The empty word is
    the identity.
    """

    tokens: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        prev_t = False
        for tok in self.tokens:
            m = _TOKEN_RE.match(tok)
            if not m:
                raise ValueError(f"bad generator token {tok!r}")
            if m.group(2) is not None:
                if int(m.group(2)) == 0:
                    raise ValueError("T^0 tokens are not allowed")
                if prev_t:
                    raise ValueError("adjacent T tokens must be merged")
                prev_t = True
            else:
                prev_t = False

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return " ".join(self.tokens) if self.tokens else "<empty>"


def _token_exponent(token: str) -> int | None:
    """T-exponent of a token, or None for the S generator."""
    return None if token == "S" else int(token[2:])


def evaluate_word(word: GeneratorWord | Iterable[str]) -> SL2Matrix:
    """Exact integer product of the generator matrices in word order."""
    if not isinstance(word, GeneratorWord):
        word = GeneratorWord(tuple(word))
    out = IDENTITY
    for tok in word:
        n = _token_exponent(tok)
        out = out @ (S_GEN if n is None else _t_power(n))
    return out


def _normalize_tokens(tokens: list[tuple[str, int]]) -> tuple[str, ...]:
    """Merge adjacent T tokens, drop T^0 and S^4 runs, until stable."""
    changed = True
    while changed:
        changed = False
        out: list[tuple[str, int]] = []
        for kind, n in tokens:
            if kind == "T":
                if n == 0:
                    changed = True
                    continue
                if out and out[-1][0] == "T":
                    out[-1] = ("T", out[-1][1] + n)
                    changed = True
                    continue
                out.append((kind, n))
            else:
                out.append((kind, n))
                if len(out) >= 4 and all(t[0] == "S" for t in out[-4:]):
                    del out[-4:]
                    changed = True
        tokens = out
    return tuple("S" if kind == "S" else f"T^{n}" for kind, n in tokens)


def decompose_to_generators(m: SL2Matrix) -> GeneratorWord:
    """Factor ``m`` into a generator word with ``evaluate_word(word) == m``.

    Euclidean reduction on the first column: left-multiplications by powers
    of T shrink the upper-left entry modulo the lower-left one, and S swaps
    the rows, until the matrix is upper triangular.  Word length is
    O(log max |entry|).  ``-I`` comes out as ``S S``.
    """
    a, b, c, d = m.entries()
    applied: list[tuple[str, int]] = []  # left-applied reductions, in order
    while c != 0:
        q = a // c
        if q:
            a, b = a - q * c, b - q * d
            applied.append(("T", -q))
        a, b, c, d = -c, -d, a, b
        applied.append(("S", 0))
    if a == 1:
        if b:
            applied.append(("T", -b))
    else:  # a == d == -1: clear the sign with S^2 = -I, then the shear
        applied.append(("S", 0))
        applied.append(("S", 0))
        if b:
            applied.append(("T", b))
    # applied[-1] ... applied[0] . m = I, so m is the product of the
    # inverses in application order; S^{-1} = S . (-I) with -I central,
    # hence an odd number of S inversions leaves one trailing S^2.
    tokens: list[tuple[str, int]] = []
    n_s = 0
    for kind, n in applied:
        if kind == "T":
            tokens.append(("T", -n))
        else:
            tokens.append(("S", 0))
            n_s += 1
    if n_s % 2:
        tokens.append(("S", 0))
        tokens.append(("S", 0))
    return GeneratorWord(_normalize_tokens(tokens))


def rho_of(m: SL2Matrix, d: ModularDatum) -> np.ndarray:
    """Evaluate the conformal-block representation of ``m`` on a datum.

    The result is the matrix product of ``rho`` over any factorization of
    ``m`` into generators; on a validated datum ``rho`` is a genuine
    representation, so the value does not depend on the chosen word.
    """
    t_angles = [p.angle for p in t_matrix(d)]
    out = np.eye(d.rank, dtype=complex)
    for tok in decompose_to_generators(m):
        n = _token_exponent(tok)
        if n is None:
            out = out @ d.s_matrix
        else:
            out = out * np.array([Phase(n * ang).value for ang in t_angles])
    return out


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    f = 2
    while f * f <= k:
        if k % f == 0:
            return False
        f += 1
    return True


class SectorCongruence(NamedTuple):
    """Solution ``(a, b)`` of the sector congruences plus its SL(2, Z) matrix."""

    a: int
    b: int
    matrix: SL2Matrix


def sector_congruence(k: int, r: int, s: int) -> SectorCongruence:
    """Solve ``s = r a`` and ``-r = s b`` (mod k) with ``0 < a, b < k``.

    Returns the unique solution together with the determinant-one matrix
    ``(k, -b; -a, (1 + a b)/k)`` that transports twisted-sector trace
    functions onto the untwisted conformal block.  Requires ``k`` prime and
    ``0 < r, s < k``; primality makes ``a`` and ``b`` invertible mod ``k``
    and forces ``k | 1 + a b``.
    """
    if not is_prime(k):
        raise ValueError(f"k must be prime, got {k}")
    if not (0 < r < k and 0 < s < k):
        raise ValueError(f"r, s must lie strictly between 0 and k={k}, got r={r}, s={s}")
    # k is tiny in practice; direct search beats a modular-inverse routine
    a = next(x for x in range(1, k) if (r * x - s) % k == 0)
    b = next(x for x in range(1, k) if (s * x + r) % k == 0)
    assert (1 + a * b) % k == 0
    return SectorCongruence(a, b, SL2Matrix(k, -b, -a, (1 + a * b) // k))
