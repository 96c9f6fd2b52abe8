"""Exact integer bilinear forms on finite-rank divisor lattices.

The central objects are :class:`IntLattice`, a symmetric integer Gram
matrix modelling a finite-rank sublattice of the Picard group of a
surface, and :class:`DivisorClass`, an integer coordinate vector in the
lattice basis.  A lattice additionally carries a list of classes that
are *declared* to be 2-divisible in the ambient Picard group; mod-2
divisibility of arbitrary classes is then certified by linear algebra
over GF(2) relative to those declarations.

All arithmetic is exact.  Definiteness is decided by alternating signs
of leading principal minors with arbitrary-precision integers, never by
floating point.  Every value is immutable, so all operations are safe
for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]

__all__ = [
    "DivisorClass",
    "EvennessCertificate",
    "IntLattice",
    "Matrix",
    "determinant",
    "negative_definite",
    "smith_normal_form",
    "solve_gf2",
]


@dataclass(frozen=True)
class DivisorClass:
    """Integer coordinate vector with respect to a fixed lattice basis."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @staticmethod
    def zero(rank: int) -> "DivisorClass":
        return DivisorClass((0,) * rank)

    def __len__(self) -> int:
        return len(self.coords)

    def _match(self, other: "DivisorClass") -> None:
        if len(self.coords) != len(other.coords):
            raise ValueError(
                f"coordinate length mismatch: {len(self.coords)} vs {len(other.coords)}"
            )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._match(other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._match(other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(tuple(k * a for a in self.coords))

    __mul__ = __rmul__

    def parity(self) -> tuple[int, ...]:
        """Coordinates reduced mod 2."""
        return tuple(c & 1 for c in self.coords)


def class_sum(classes: Iterable[DivisorClass], rank: int) -> DivisorClass:
    """Sum of divisor classes, defaulting to zero on an empty iterable."""
    total = DivisorClass.zero(rank)
    for c in classes:
        total = total + c
    return total


@dataclass(frozen=True)
class EvennessCertificate:
    """Outcome of a mod-2 divisibility test.

    On success ``coefficients`` picks the declared 2-divisible classes
    D_k with B = sum(eps_k * D_k) + 2 * half_remainder, so B is twice an
    honest class of the ambient Picard group.
    """

    even: bool
    coefficients: tuple[int, ...] | None = None
    half_remainder: DivisorClass | None = None

    def __bool__(self) -> bool:
        return self.even

    def to_json(self) -> dict:
        doc: dict = {"even": self.even}
        if self.even:
            doc["coefficients"] = list(self.coefficients or ())
            doc["half_remainder"] = list(self.half_remainder.coords) if self.half_remainder else []
        return doc


@dataclass(frozen=True)
class IntLattice:
    """Finite-rank lattice with a symmetric integer pairing.

    ``declared_even`` lists classes asserted to be 2-divisible in the
    true Picard group (the lattice itself is only a sublattice, so such
    divisibilities are extra data, not derivable).  ``even`` demands an
    even diagonal, which holds for any sublattice of the Picard lattice
    of a K3 surface; blown-up-plane lattices set it to False.
    """

    gram: Matrix
    labels: tuple[str, ...] = ()
    declared_even: tuple[DivisorClass, ...] = ()
    even: bool = True

    def __post_init__(self) -> None:
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise ValueError(f"gram matrix is not symmetric at ({i},{j})")
        if self.even:
            for i in range(n):
                if gram[i][i] % 2:
                    raise ValueError(
                        f"diagonal entry gram[{i}][{i}] = {gram[i][i]} is odd; "
                        "an even lattice requires even self-intersections"
                    )
        labels = tuple(self.labels) if self.labels else tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise ValueError(f"expected {n} basis labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)
        declared = tuple(
            d if isinstance(d, DivisorClass) else DivisorClass(tuple(d))
            for d in self.declared_even
        )
        object.__setattr__(self, "declared_even", declared)
        for k, d in enumerate(declared):
            if len(d) != n:
                raise ValueError(f"declared_even[{k}] has wrong length")
            if self.even and self.square(d) % 8:
                raise ValueError(
                    f"declared_even[{k}] has square {self.square(d)}; a 2-divisible "
                    "class on an even lattice must have square divisible by 8"
                )

    @property
    def rank(self) -> int:
        return len(self.gram)

    def basis_class(self, i: int) -> DivisorClass:
        """The i-th basis vector as a divisor class."""
        if not 0 <= i < self.rank:
            raise ValueError(f"basis index {i} out of range")
        return DivisorClass(tuple(1 if j == i else 0 for j in range(self.rank)))

    def _check(self, a: DivisorClass) -> None:
        if len(a) != self.rank:
            raise ValueError(f"class has length {len(a)}, lattice rank is {self.rank}")

    def pair(self, a: DivisorClass, b: DivisorClass) -> int:
        """Intersection number a . b (symmetric, bilinear, exact)."""
        self._check(a)
        self._check(b)
        total = 0
        for i, ai in enumerate(a.coords):
            if ai == 0:
                continue
            row = self.gram[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(b.coords) if bj)
        return total

    def square(self, a: DivisorClass) -> int:
        return self.pair(a, a)

    def half_square(self, a: DivisorClass) -> Fraction:
        """(a/2)^2 as an exact rational."""
        return Fraction(self.square(a), 4)

    def is_negative_definite(self, subset: Sequence[int]) -> bool:
        """Whether the principal submatrix on ``subset`` is negative definite.

        Decided by the Sylvester criterion: the leading principal minors
        of the submatrix must alternate in sign starting negative.
        """
        idx = list(subset)
        if not idx:
            raise ValueError("subset must be nonempty")
        if len(set(idx)) != len(idx):
            raise ValueError("subset indices must be distinct")
        for i in idx:
            if not 0 <= i < self.rank:
                raise ValueError(f"basis index {i} out of range")
        sub = tuple(tuple(self.gram[i][j] for j in idx) for i in idx)
        return negative_definite(sub)

    def is_even(self, B: DivisorClass) -> EvennessCertificate:
        """Certify that B is 2-divisible in the ambient Picard group.

        Succeeds iff B mod 2 lies in the GF(2)-span of the declared
        2-divisible classes; completeness of the declarations is the
        responsibility of whoever built the lattice.
        """
        self._check(B)
        columns = [d.coords for d in self.declared_even]
        eps = solve_gf2(columns, B.coords)
        if eps is None:
            return EvennessCertificate(False)
        remainder = list(B.coords)
        for e, d in zip(eps, self.declared_even):
            if e:
                remainder = [x - y for x, y in zip(remainder, d.coords)]
        half = DivisorClass(tuple(x // 2 for x in remainder))
        return EvennessCertificate(True, tuple(eps), half)

    def to_json(self) -> dict:
        return {
            "basis": list(self.labels),
            "gram": [list(row) for row in self.gram],
            "declared_even": [list(d.coords) for d in self.declared_even],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "IntLattice":
        if "basis" not in doc or "gram" not in doc:
            raise ValueError("lattice document requires 'basis' and 'gram'")
        return cls(
            gram=tuple(tuple(row) for row in doc["gram"]),
            labels=tuple(doc["basis"]),
            declared_even=tuple(DivisorClass(tuple(v)) for v in doc.get("declared_even", [])),
        )


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def negative_definite(m: Sequence[Sequence[int]]) -> bool:
    """Sylvester test: (-1)^k det(M_k) > 0 for every leading minor M_k."""
    n = len(m)
    for k in range(1, n + 1):
        lead = [row[:k] for row in list(m)[:k]]
        d = determinant(lead)
        if (d if k % 2 == 0 else -d) <= 0:
            return False
    return True


def solve_gf2(
    columns: Sequence[Sequence[int]], target: Sequence[int]
) -> tuple[int, ...] | None:
    """Solve sum(eps_k * columns[k]) = target over GF(2).

    Returns one solution vector of 0/1 coefficients (free variables set
    to 0), or None when the system is inconsistent.
    """
    m = len(columns)
    n = len(target)
    for col in columns:
        if len(col) != n:
            raise ValueError("column length mismatch")
    rows = [[columns[j][i] & 1 for j in range(m)] + [target[i] & 1] for i in range(n)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(m):
        pivot_row = next((i for i in range(r, n) if rows[i][col]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        for i in range(n):
            if i != r and rows[i][col]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1
        if r == n:
            break
    # After full elimination any row beyond the pivot rows is all zero on
    # the coefficient side, so a nonzero augmented entry means no solution.
    for i in range(r, n):
        if rows[i][m]:
            return None
    eps = [0] * m
    for pr, pc in pivots:
        eps[pc] = rows[pr][m]
    return tuple(eps)


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(
    m: Sequence[Sequence[int]],
) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms: returns (U, D, V) with U*M*V = D.

    U and V are unimodular (determinant +-1); D is diagonal with
    nonnegative entries satisfying d_i | d_{i+1}.
    """
    a = [[int(x) for x in row] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if any(len(row) != ncols for row in a):
        raise ValueError("matrix rows must have equal length")
    u = _identity(nrows)
    v = _identity(ncols)

    def swap_rows(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(i: int, k: int, q: int) -> None:
        # row_i += q * row_k
        a[i] = [x + q * y for x, y in zip(a[i], a[k])]
        u[i] = [x + q * y for x, y in zip(u[i], u[k])]

    def add_col(j: int, k: int, q: int) -> None:
        for row in a:
            row[j] += q * row[k]
        for row in v:
            row[j] += q * row[k]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    for t in range(min(nrows, ncols)):
        # Move a nonzero entry of smallest magnitude to the pivot slot.
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            reduced = False
            for i in range(t + 1, nrows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                    reduced = True
                    break
            if reduced:
                continue
            for j in range(t + 1, ncols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                    reduced = True
                    break
            if reduced:
                continue
            # Pivot row and column are clear; force divisibility of the
            # remaining block before moving on.
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            negate_row(t)

    d = tuple(
        tuple(a[i][j] if i == j else 0 for j in range(ncols)) for i in range(nrows)
    )
    return (
        tuple(tuple(row) for row in u),
        d,
        tuple(tuple(row) for row in v),
    )
