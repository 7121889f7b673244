"""Finite groups acting on free abelian lattices Z^r.

Nilpotency is decided over Q: the integer series Z > 2Z > 4Z > ... never
stabilizes as a set, but a lattice term is zero iff its rational span is.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ValidationError

Matrix = tuple[tuple[int, ...], ...]
Row = tuple[Fraction, ...]

DEFAULT_MAX_ORDER = 24


def as_matrix(M: Sequence[Sequence[int]]) -> Matrix:
    rows = tuple(tuple(int(x) for x in row) for row in M)
    if not rows or any(len(row) != len(rows) for row in rows):
        raise ValidationError("matrix must be square and nonempty")
    return rows


def identity(r: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n = len(B)
    return tuple(tuple(sum(a[t] * B[t][j] for t in range(n)) for j in range(len(B[0]))) for a in A)


def determinant(M: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(row) for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def finite_order(M: Sequence[Sequence[int]], max_order: int = DEFAULT_MAX_ORDER) -> int | None:
    """Smallest m <= max_order with M^m = I, or None if there is none."""
    M = as_matrix(M)
    if max_order < 1:
        raise ValidationError("max_order must be >= 1")
    ident = identity(len(M))
    P = M
    for m in range(1, max_order + 1):
        if P == ident:
            return m
        P = matmul(P, M)
    return None


@dataclass(frozen=True)
class IntegerRepresentation:
    rank: int
    generators: tuple[Matrix, ...]
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError("rank must be >= 1")
        gens = tuple(as_matrix(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if len(g) != self.rank:
                raise ValidationError(f"generator is {len(g)}x{len(g)}, expected rank {self.rank}")
            if abs(determinant(g)) != 1:
                raise ValidationError("generator is not invertible over Z (det != +-1)")
            if finite_order(g, self.max_order) is None:
                raise ValidationError(f"generator has no finite order <= {self.max_order}")

    @property
    def orders(self) -> list[int]:
        return [finite_order(g, self.max_order) for g in self.generators]

    def is_trivial(self) -> bool:
        ident = identity(self.rank)
        return all(g == ident for g in self.generators)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "generators": [[list(r) for r in g] for g in self.generators]}


def rref(rows: Iterable[Sequence]) -> tuple[Row, ...]:
    """Reduced row echelon form over Q, zero rows dropped. Canonical per row space."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return ()
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        lead = A[r][c]
        A[r] = [x / lead for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    out = A[:r]
    return tuple(tuple(row) for row in out)


def rank_q(rows: Iterable[Sequence]) -> int:
    return len(rref(rows))


@dataclass(frozen=True)
class SubspaceChain:
    """V_1 = Q^r > V_2 > ... with V_{j+1} = span{(g - 1) v : v in V_j}.

    ``stabilized_at`` is the index of the first term equal to its
    predecessor, or None if the chain reached 0.
    """

    dims: tuple[int, ...]
    bases: tuple[tuple[Row, ...], ...]
    stabilized_at: int | None

    @property
    def reaches_zero(self) -> bool:
        return self.dims[-1] == 0


def _apply_minus_identity(g: Matrix, v: Row) -> Row:
    return tuple(sum(g[i][j] * v[j] for j in range(len(v))) - v[i] for i in range(len(v)))


def series_step(rep: IntegerRepresentation, basis: Sequence[Row]) -> tuple[Row, ...]:
    return rref(_apply_minus_identity(g, v) for v in basis for g in rep.generators)


def rational_series(rep: IntegerRepresentation) -> SubspaceChain:
    basis = rref(identity(rep.rank))
    bases = [basis]
    while basis:
        nxt = series_step(rep, basis)
        bases.append(nxt)
        if len(nxt) == len(basis):  # nxt is contained in basis's span, so equal
            return SubspaceChain(tuple(len(b) for b in bases), tuple(bases), len(bases) - 1)
        basis = nxt
    return SubspaceChain(tuple(len(b) for b in bases), tuple(bases), None)


def is_nilpotent_integer_action(rep: IntegerRepresentation) -> bool:
    return rational_series(rep).reaches_zero


def fixed_subspace_dim(M: Matrix) -> int:
    r = len(M)
    return r - rank_q([[M[i][j] - (i == j) for j in range(r)] for i in range(r)])


# ---------------------------------------------------------------------------
# integer lattices, for displaying the non-terminating chain


def hermite_rows(rows: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``."""
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return ()
    ncols = len(A[0])
    out = []
    for c in range(ncols):
        # gcd-combine all rows with nonzero entry in column c into one pivot row
        nz = [row for row in A if row[c] != 0]
        rest = [row for row in A if row[c] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda row: abs(row[c]))
            piv = nz[0]
            new = [piv]
            for row in nz[1:]:
                q = row[c] // piv[c]
                row = [x - q * y for x, y in zip(row, piv)]
                (new if row[c] != 0 else rest).append(row)
            nz = new
        if nz:
            piv = nz[0]
            if piv[c] < 0:
                piv = [-x for x in piv]
            out.append(piv)
        A = [row for row in rest if any(row)]
    for i, piv in enumerate(out):
        c = next(j for j, x in enumerate(piv) if x)
        for k in range(i):
            q = out[k][c] // piv[c]
            out[k] = [x - q * y for x, y in zip(out[k], piv)]
    return tuple(tuple(row) for row in out)


def lattice_series(rep: IntegerRepresentation, steps: int = 3) -> list[tuple[tuple[int, ...], ...]]:
    """First ``steps`` terms of L_1 = Z^r, L_{j+1} = span_Z{(g - 1) v : v in L_j}."""
    L = hermite_rows(identity(rep.rank))
    out = [L]
    for _ in range(steps - 1):
        L = hermite_rows(
            tuple(sum(g[i][j] * v[j] for j in range(rep.rank)) - v[i] for i in range(rep.rank))
            for v in L
            for g in rep.generators
        )
        out.append(L)
        if not L:
            break
    return out


def describe_lattice_series(terms: Sequence[tuple[tuple[int, ...], ...]]) -> str:
    """E.g. ``Z > 2Z > 4Z`` in rank one; spanning rows for lower-rank terms."""
    parts = []
    for L in terms:
        if not L:
            parts.append("0")
        elif len(L) == 1 and len(L[0]) == 1:
            d = L[0][0]
            parts.append("Z" if d == 1 else f"{d}Z")
        elif len(L) == len(L[0]):
            d = abs(determinant(L))
            parts.append(f"Z^{len(L)}" if d == 1 else f"index-{d} sublattice")
        else:
            parts.append("<" + ", ".join("(" + ",".join(map(str, row)) + ")" for row in L) + ">")
    return " > ".join(parts)


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class EnumerationSpec:
    """All single-generator representations with bounded entries and order."""

    ranks: tuple[int, ...] = (1, 2, 3)
    entry_min: int = -2
    entry_max: int = 2
    max_order: int = 6

    def __post_init__(self):
        if any(r < 1 or r > 3 for r in self.ranks):
            raise ValidationError("enumeration supports ranks 1..3")
        if self.entry_min > self.entry_max:
            raise ValidationError("empty entry range")


def _det_batch(M: np.ndarray) -> np.ndarray:
    r = M.shape[1]
    if r == 1:
        return M[:, 0, 0]
    if r == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    return (
        M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
        - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
        + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0])
    )


def finite_order_matrices(r: int, lo: int, hi: int, max_order: int) -> Iterator[Matrix]:
    """Integer r x r matrices with entries in [lo, hi] and finite order <= max_order."""
    base = hi - lo + 1
    total = base ** (r * r)
    eye = np.eye(r, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        M = (np.stack(np.unravel_index(idx, (base,) * (r * r)), axis=1) + lo).astype(np.int64).reshape(-1, r, r)
        M = M[np.abs(_det_batch(M)) == 1]
        P = M.copy()
        found = np.all(P == eye, axis=(1, 2))
        for _ in range(max_order - 1):
            P = P @ M
            found |= np.all(P == eye, axis=(1, 2))
        for m in M[found]:
            yield tuple(tuple(int(x) for x in row) for row in m)


@dataclass
class ZLatticeReport:
    checked: int = 0
    nilpotent: int = 0
    trivial: int = 0
    counterexamples: list[IntegerRepresentation] = field(default_factory=list)
    by_rank: dict[int, dict[str, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "nilpotent": self.nilpotent,
            "trivial": self.trivial,
            "counterexamples": [rep.to_dict() for rep in self.counterexamples],
            "by_rank": {str(r): dict(v) for r, v in sorted(self.by_rank.items())},
        }


def verify_nilpotent_iff_trivial(reps: EnumerationSpec | Iterable[IntegerRepresentation]) -> ZLatticeReport:
    """Check that every nilpotent representation in the enumeration is trivial."""
    if isinstance(reps, EnumerationSpec):
        spec = reps
        reps = (
            IntegerRepresentation(r, (M,), spec.max_order)
            for r in spec.ranks
            for M in finite_order_matrices(r, spec.entry_min, spec.entry_max, spec.max_order)
        )
    report = ZLatticeReport()
    for rep in reps:
        row = report.by_rank.setdefault(rep.rank, {"checked": 0, "nilpotent": 0})
        report.checked += 1
        row["checked"] += 1
        trivial = rep.is_trivial()
        report.trivial += trivial
        if is_nilpotent_integer_action(rep):
            report.nilpotent += 1
            row["nilpotent"] += 1
            if not trivial:
                report.counterexamples.append(rep)
    return report


def series_report(rep: IntegerRepresentation) -> dict:
    """JSON-ready summary of one representation."""
    chain = rational_series(rep)
    lattice = lattice_series(rep, steps=3)
    return {
        "rank": rep.rank,
        "orders": rep.orders,
        "nilpotent": chain.reaches_zero,
        "rational_dims": list(chain.dims),
        "stabilized_at": chain.stabilized_at,
        "lattice_series": describe_lattice_series(lattice),
        "method": "series terminates iff its span over Q reaches 0 (the lattice is torsion-free)",
    }
