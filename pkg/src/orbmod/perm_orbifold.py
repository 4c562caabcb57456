"""Modular data of the cyclic permutation orbifold ``(V^k)^{Z_k}``, k prime.

Starting from the modular datum of a rational chiral algebra ``V`` with
``p + 1`` irreducible modules, the fixed-point subalgebra of the k-fold
tensor power under the cyclic group generated by the full k-cycle has

- one module per rotation orbit of non-constant index tuples
  (*off-diagonal*, ``((p+1)^k - (p+1)) / k`` of them),
- ``k`` eigencomponents of each diagonal tensor power (*diagonal*,
  ``(p+1) k``), and
- ``k`` eigencomponents of each twisted module in each of the ``k - 1``
  twisted sectors (*twisted*, ``(p+1) k (k-1)``).

This module enumerates those labels with their conformal weights mod 1,
assembles the full S-matrix (twisted-sector blocks are transported onto the
untwisted conformal block through :func:`orbmod.sl2z.sector_congruence` and
the representation ``rho``), builds the T-phases, and bundles everything
into a validated :class:`OrbifoldDatum`.

Convention note: the weight mod 1 of the eigencomponent ``a`` of a sector-r
twisted module is ``h/k + (k^2 - 1) c / (24 k) + m0/k`` with
``m0 = (-a r) mod k`` under the default ``"minus"`` convention
(``m0 = (+a r) mod k`` under ``"plus"``).  The two choices coincide for
``k = 2``; for larger primes the modular-relation check ``(S T)^3 = S^2``
on the assembled datum singles out ``"minus"``.  Likewise, in the
twisted-twisted blocks the representation of the congruence matrix acts on
the column index of the source S-matrix (``S @ rho_of(matrix, d)``); this
orientation is the one under which the assembled matrix passes the
unitarity and modular-relation checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .modular_data import (
    DEFAULT_EPS,
    DEFAULT_EPS_INT,
    InvalidDatum,
    ModularDatum,
    ModuleInfo,
    Phase,
    ValidationReport,
    modular_datum_to_dict,
    validate_modular_datum,
)
from .restricted import CharacterTable, FiniteAbelianGroup, OrbitSpec
from .sl2z import is_prime, rho_of, sector_congruence

__all__ = [
    "CONVENTIONS",
    "OffDiagonal",
    "Diagonal",
    "Twisted",
    "OrbifoldLabel",
    "OrbifoldDatum",
    "canonical_rotation",
    "module_count",
    "orbifold_labels",
    "enumerate_orbifold_modules",
    "twisted_sector_block",
    "assemble_orbifold_S",
    "orbifold_t_phases",
    "build_orbifold_datum",
    "orbifold_datum_to_dict",
    "label_text",
    "permutation_restriction_data",
]

CONVENTIONS = ("minus", "plus")


def canonical_rotation(t: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically minimal rotation of a tuple."""
    t = tuple(t)
    return min(t[i:] + t[:i] for i in range(len(t))) if t else t


@dataclass(frozen=True)
class OffDiagonal:
    """Rotation orbit of a non-constant index tuple; stored canonically."""

    indices: tuple[int, ...]

    def __post_init__(self):
        t = canonical_rotation(tuple(int(i) for i in self.indices))
        if len(set(t)) <= 1:
            raise ValueError(f"constant tuple {t} is a diagonal label, not off-diagonal")
        object.__setattr__(self, "indices", t)


@dataclass(frozen=True)
class Diagonal:
    """Eigencomponent ``a`` of the k-th tensor power of module ``i``."""

    i: int
    a: int


@dataclass(frozen=True)
class Twisted:
    """Eigencomponent ``a`` of the sector-``r`` twisted module built on
    module ``i`` (``0 < r < k``)."""

    r: int
    i: int
    a: int


OrbifoldLabel = OffDiagonal | Diagonal | Twisted


def module_count(n_modules: int, k: int) -> int:
    """Closed count of orbifold modules for ``n_modules`` input modules."""
    return (n_modules**k - n_modules) // k + n_modules * k + n_modules * k * (k - 1)


def _require_prime(k: int) -> None:
    if not is_prime(k):
        raise ValueError(f"k must be prime, got {k}")


def orbifold_labels(d: ModularDatum, k: int) -> tuple[OrbifoldLabel, ...]:
    """All orbifold module labels in canonical order: diagonal by ``(i, a)``
    (vacuum ``Diagonal(0, 0)`` first), then off-diagonal by tuple, then
    twisted by ``(r, i, a)``."""
    _require_prime(k)
    n = d.rank
    diag = [Diagonal(i, a) for i in range(n) for a in range(k)]
    off = sorted(
        {
            canonical_rotation(t)
            for t in itertools.product(range(n), repeat=k)
            if len(set(t)) > 1
        }
    )
    twisted = [
        Twisted(r, i, a) for r in range(1, k) for i in range(n) for a in range(k)
    ]
    labels = tuple(diag) + tuple(OffDiagonal(t) for t in off) + tuple(twisted)
    assert len(labels) == module_count(n, k)
    return labels


def _weight_mod1(
    label: OrbifoldLabel, d: ModularDatum, k: int, convention: str
) -> Fraction:
    c = d.central_charge
    h = d.weights
    if isinstance(label, Diagonal):
        return (k * h[label.i]) % 1
    if isinstance(label, OffDiagonal):
        return sum((h[i] for i in label.indices), Fraction(0)) % 1
    sign = -1 if convention == "minus" else 1
    m0 = (sign * label.a * label.r) % k
    return (h[label.i] / k + (k * k - 1) * c / (24 * k) + Fraction(m0, k)) % 1


def enumerate_orbifold_modules(
    d: ModularDatum, k: int, convention: str = "minus"
) -> list[tuple[OrbifoldLabel, Fraction]]:
    """Labels with conformal weights mod 1, in the canonical ordering.

    Weights: ``k h_i`` for ``Diagonal(i, a)`` (independent of ``a``),
    ``sum_j h_{i_j}`` for off-diagonal tuples, and
    ``h_i/k + (k^2 - 1) c/(24 k) + m0/k`` for ``Twisted(r, i, a)`` with
    ``m0`` fixed by the eigenvalue-residue convention (see module notes).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return [
        (label, _weight_mod1(label, d, k, convention))
        for label in orbifold_labels(d, k)
    ]


def twisted_sector_block(d: ModularDatum, k: int, r: int, s: int) -> np.ndarray:
    """S-entries between sector-``r`` and sector-``s`` twisted modules.

    ``block[x, y]`` is the S-matrix entry pairing the twisted module built
    on module ``x`` in sector ``r`` with the one built on module ``y`` in
    sector ``s``:

        exp(2 pi i a (-h_x/k + c/24k)) * exp(-2 pi i b (-h_y/k + c/24k))
            * (S @ rho(A))[x, y]

    with ``(a, b, A) = sector_congruence(k, r, s)``.  Requires ``k`` prime
    and ``0 < r, s < k`` (raises ``ValueError`` otherwise).
    """
    cong = sector_congruence(k, r, s)
    rho_a = rho_of(cong.matrix, d)
    c = d.central_charge
    left = np.array(
        [Phase(cong.a * (-h / k + c / (24 * k))).value for h in d.weights]
    )
    right = np.array(
        [Phase(-cong.b * (-h / k + c / (24 * k))).value for h in d.weights]
    )
    return left[:, None] * (d.s_matrix @ rho_a) * right[None, :]


def assemble_orbifold_S(d: ModularDatum, k: int) -> np.ndarray:
    """Assemble the full orbifold S-matrix over :func:`orbifold_labels`.

    Entry rules (with ``S`` the input S-matrix and ``B`` the twisted-sector
    blocks):

    - diagonal ``(i, a)`` vs diagonal ``(j, b)``: ``S[i, j]**k / k``;
    - off-diagonal ``t`` vs off-diagonal ``u``: sum over rotations ``rho``
      of ``prod_j S[t_j, u_{j+rho}]``;
    - off-diagonal ``t`` vs diagonal ``(j, b)``: ``prod_m S[t_m, j]``;
    - twisted ``(r, i, a)`` vs diagonal ``(j, b)``:
      ``S[i, j] exp(2 pi i r b / k) / k``;
    - twisted ``(r, i, a)`` vs twisted ``(s, j, b)``:
      ``B[r, s][i, j] exp(2 pi i (s a + r b) / k) / k``;
    - twisted vs off-diagonal: 0.

    The matrix is filled symmetrically (upper triangle mirrored), so the
    output is exactly symmetric.
    """
    _require_prime(k)
    n = d.rank
    s = d.s_matrix
    labels = orbifold_labels(d, k)
    n_diag = n * k
    off_tuples = np.array(
        [lab.indices for lab in labels if isinstance(lab, OffDiagonal)], dtype=int
    ).reshape(-1, k)
    n_off = off_tuples.shape[0]
    n_tw = n * k * (k - 1)
    total = n_diag + n_off + n_tw

    out = np.zeros((total, total), dtype=complex)
    ones_k = np.ones((k, k))

    # diagonal vs diagonal: expand (i, j) values over the (a, b) eigenindices
    out[:n_diag, :n_diag] = np.kron(s**k / k, ones_k)

    if n_off:
        sl_off = slice(n_diag, n_diag + n_off)
        # off-diagonal vs off-diagonal, one rotation at a time
        oo = np.zeros((n_off, n_off), dtype=complex)
        for rot in range(k):
            prod = np.ones((n_off, n_off), dtype=complex)
            for j in range(k):
                prod *= s[off_tuples[:, j][:, None], off_tuples[:, (j + rot) % k][None, :]]
            oo += prod
        out[sl_off, sl_off] = oo

        # off-diagonal vs diagonal (independent of the diagonal eigenindex)
        od = np.ones((n_off, n), dtype=complex)
        for m in range(k):
            od *= s[off_tuples[:, m], :]
        od = np.repeat(od, k, axis=1)
        out[sl_off, :n_diag] = od
        out[:n_diag, sl_off] = od.T

    # twisted sectors
    base = n_diag + n_off
    sector = {}  # r -> slice of the (i, a) block for that sector
    for idx, r in enumerate(range(1, k)):
        sector[r] = slice(base + idx * n * k, base + (idx + 1) * n * k)

    def eig(num):
        return np.exp(2j * np.pi * num / k)

    for r in range(1, k):
        # twisted (r, i, a) vs diagonal (j, b): S[i, j] e^{2 pi i r b / k} / k
        phases_b = eig(r * np.arange(k))
        td = np.kron(s / k, np.outer(np.ones(k), phases_b))
        out[sector[r], :n_diag] = td
        out[:n_diag, sector[r]] = td.T
        for s_idx in range(1, k):
            block = twisted_sector_block(d, k, r, s_idx)
            phase_ab = eig(
                np.add.outer(s_idx * np.arange(k), r * np.arange(k))
            )
            out[sector[r], sector[s_idx]] = np.kron(block / k, phase_ab)

    # exact symmetry: mirror the upper triangle
    return np.triu(out) + np.triu(out, 1).T


def orbifold_t_phases(
    d: ModularDatum, k: int, convention: str = "minus"
) -> tuple[Phase, ...]:
    """Diagonal T-phases of the orbifold: ``Phase(w - k c / 24)`` per label,
    using the weights mod 1 from :func:`enumerate_orbifold_modules`."""
    c24 = k * d.central_charge / 24
    return tuple(
        Phase(w - c24) for _, w in enumerate_orbifold_modules(d, k, convention)
    )


def label_text(label: OrbifoldLabel, source: ModularDatum) -> str:
    """Readable unique label string, using the source module labels."""
    names = source.labels
    if isinstance(label, Diagonal):
        return f"diag({names[label.i]};{label.a})"
    if isinstance(label, OffDiagonal):
        return "off(" + ",".join(names[i] for i in label.indices) + ")"
    return f"tw{label.r}({names[label.i]};{label.a})"


@dataclass(frozen=True)
class OrbifoldDatum:
    """Assembled orbifold modular datum plus its provenance.

    ``datum.modules[i].weight`` is the weight *mod 1* of ``labels[i]``;
    ``report`` is the validation of the assembled datum and records, via
    the ``modular_relation`` check, whether the chosen eigenvalue-residue
    ``convention`` is the validating one.
    """

    datum: ModularDatum
    labels: tuple[OrbifoldLabel, ...]
    k: int
    convention: str
    report: ValidationReport

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.datum.rank:
            raise ValueError("one label per module required")
        if self.labels[0] != Diagonal(0, 0):
            raise ValueError("orbifold vacuum must be Diagonal(0, 0) at index 0")


def build_orbifold_datum(
    d: ModularDatum,
    k: int,
    convention: str = "minus",
    *,
    eps: float = DEFAULT_EPS,
    eps_int: float = DEFAULT_EPS_INT,
    validate_input: bool = True,
) -> OrbifoldDatum:
    """Run the whole pipeline: enumerate, assemble S, build T, validate.

    The input datum must itself pass validation (checked unless
    ``validate_input=False``; failures raise :class:`InvalidDatum`).  The
    returned orbifold datum carries its own validation report; callers
    decide how to act on a failing report (e.g. retry with the flipped
    convention).
    """
    _require_prime(k)
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if validate_input:
        in_report = validate_modular_datum(d, eps, eps_int)
        if not in_report.ok:
            names = [c.name for c in in_report.failures()]
            raise InvalidDatum(f"input datum fails validation checks: {names}")
    modules = [
        ModuleInfo(label_text(label, d), weight)
        for label, weight in enumerate_orbifold_modules(d, k, convention)
    ]
    s = assemble_orbifold_S(d, k)
    datum = ModularDatum(k * d.central_charge, tuple(modules), s)
    report = validate_modular_datum(datum, eps, eps_int)
    return OrbifoldDatum(datum, orbifold_labels(d, k), k, convention, report)


def _label_fields(label: OrbifoldLabel) -> dict:
    if isinstance(label, Diagonal):
        return {"label_kind": "diag", "i": label.i, "a": label.a}
    if isinstance(label, OffDiagonal):
        return {"label_kind": "offdiag", "factors": list(label.indices)}
    return {"label_kind": "twisted", "r": label.r, "i": label.i, "a": label.a}


def orbifold_datum_to_dict(od: OrbifoldDatum) -> dict:
    """JSON structure: the plain datum schema extended with ``k``,
    ``convention`` and per-module label-kind fields."""
    doc = modular_datum_to_dict(od.datum)
    for entry, label in zip(doc["modules"], od.labels):
        entry.update(_label_fields(label))
    doc["k"] = od.k
    doc["convention"] = od.convention
    return doc


def permutation_restriction_data(
    d: ModularDatum, k: int
) -> tuple[list[OrbitSpec], dict, FiniteAbelianGroup]:
    """Express the permutation orbifold as generic orbit/character/block data.

    Returns ``(orbits, blocks, group)`` ready for
    :func:`orbmod.restricted.assemble_restricted_S`; the resulting pair
    ordering coincides with :func:`orbifold_labels`, so the assembled matrix
    must match :func:`assemble_orbifold_S` entrywise.  Character rows follow
    the eigencomponent labeling ``chi_a(g) = exp(-2 pi i a g / k)``.
    """
    _require_prime(k)
    n = d.rank
    s = d.s_matrix
    group = FiniteAbelianGroup((k,))
    elems = group.elements()
    full_table = CharacterTable(
        elems,
        np.array(
            [[Phase(Fraction(-a * g, k)).value for (g,) in elems] for a in range(k)],
            dtype=complex,
        ),
        (1,) * k,
    )
    trivial_table = CharacterTable(((0,),), np.array([[1.0]], dtype=complex), (1,))

    off = [lab for lab in orbifold_labels(d, k) if isinstance(lab, OffDiagonal)]
    orbits: list[OrbitSpec] = []
    kinds: list[tuple] = []
    for i in range(n):
        orbits.append(OrbitSpec(f"diag({d.labels[i]})", (0,), elems, full_table))
        kinds.append(("diag", i))
    for lab in off:
        text = ",".join(d.labels[i] for i in lab.indices)
        orbits.append(OrbitSpec(f"off({text})", (0,), ((0,),), trivial_table))
        kinds.append(("off", lab.indices))
    for r in range(1, k):
        for i in range(n):
            orbits.append(OrbitSpec(f"tw{r}({d.labels[i]})", (r,), elems, full_table))
            kinds.append(("tw", r, i))

    tw_blocks = {
        (r, t): twisted_sector_block(d, k, r, t)
        for r in range(1, k)
        for t in range(1, k)
    }
    blocks: dict[tuple[int, int], list[tuple[tuple[int, ...], complex]]] = {}
    for bi, ki in enumerate(kinds):
        for bj, kj in enumerate(kinds):
            if ki[0] == "diag" and kj[0] == "diag":
                blocks[(bi, bj)] = [((0,), complex(s[ki[1], kj[1]] ** k))]
            elif ki[0] == "diag" and kj[0] == "off":
                value = complex(np.prod([s[ki[1], t] for t in kj[1]]))
                blocks[(bi, bj)] = [((g,), value) for g in range(k)]
            elif ki[0] == "off" and kj[0] == "diag":
                value = complex(np.prod([s[t, kj[1]] for t in ki[1]]))
                blocks[(bi, bj)] = [((0,), value)]
            elif ki[0] == "off" and kj[0] == "off":
                blocks[(bi, bj)] = [
                    (
                        (rot,),
                        complex(
                            np.prod(
                                [s[ki[1][m], kj[1][(m + rot) % k]] for m in range(k)]
                            )
                        ),
                    )
                    for rot in range(k)
                ]
            elif ki[0] == "tw" and kj[0] == "tw":
                blocks[(bi, bj)] = [
                    ((0,), complex(tw_blocks[(ki[1], kj[1])][ki[2], kj[2]]))
                ]
            elif ki[0] == "tw" and kj[0] == "diag":
                blocks[(bi, bj)] = [((0,), complex(s[ki[2], kj[1]]))]
            elif ki[0] == "diag" and kj[0] == "tw":
                blocks[(bi, bj)] = [((0,), complex(s[ki[1], kj[2]]))]
            # off vs twisted: empty transversal, zero block
    return orbits, blocks, group
