"""Finitely generated abelian groups and their colimits via Smith normal form.

A group is presented as the cokernel of an integer matrix ``P: Z^cols -> Z^rows``:
rows are generators, columns are relations.  Python ints are unbounded, so
intermediate blow-up in the normal form is harmless.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .errors import NotAHomomorphism, ShapeMismatch


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatch(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def of(cls, data: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        rows = tuple(tuple(int(v) for v in r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        return cls(rows, cols, tuple(
            tuple(values[i] if i == j and i < len(values) else 0 for j in range(cols)) for i in range(rows)
        ))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_of_other = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols_of_other) for r in self.entries
        ))

    def __neg__(self) -> IntMatrix:
        return self.scale(-1)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return self - (-other)

    def _same_shape(self, other: IntMatrix) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * a for a in r) for r in self.entries))

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)
        ))

    def hstack(self, *others: IntMatrix) -> IntMatrix:
        for o in others:
            if o.rows != self.rows:
                raise ShapeMismatch("hstack needs equal row counts")
        rows = tuple(sum((o.entries[i] for o in others), self.entries[i]) for i in range(self.rows))
        return IntMatrix(self.rows, self.cols + sum(o.cols for o in others), rows)

    def vstack(self, *others: IntMatrix) -> IntMatrix:
        for o in others:
            if o.cols != self.cols:
                raise ShapeMismatch("vstack needs equal column counts")
        rows = self.entries + sum((o.entries for o in others), ())
        return IntMatrix(len(rows), self.cols, rows)

    def kron(self, other: IntMatrix) -> IntMatrix:
        rows = tuple(
            tuple(a * b for a in r1 for b in r2)
            for r1 in self.entries
            for r2 in other.entries
        )
        return IntMatrix(self.rows * other.rows, self.cols * other.cols, rows)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal_entries(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(S, U, V)`` with ``S = U @ m @ V`` diagonal, ``d1 | d2 | ...``, ``d_i >= 0``.

    ``U`` and ``V`` are unimodular.  Pivoting always picks the smallest
    nonzero entry of the remaining block, which bounds the number of passes.
    """
    n, k = m.rows, m.cols
    A = m.tolist()
    U = IntMatrix.identity(n).tolist()
    V = IntMatrix.identity(k).tolist()

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(n, k)):
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, k) if A[i][j]]
            if not nonzero:
                break
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, n):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, k):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, k) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return IntMatrix.of(A, k), IntMatrix.of(U, n), IntMatrix.of(V, k)


def is_smith_form(s: IntMatrix) -> bool:
    if not s.is_diagonal():
        return False
    d = s.diagonal_entries()
    if any(x < 0 for x in d):
        return False
    for a, b in zip(d, d[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a:
            return False
    return True


@dataclass(frozen=True)
class FgAbGroup:
    """``coker(presentation)``; compare groups with :attr:`canonical`."""

    presentation: IntMatrix

    @property
    def generators(self) -> int:
        return self.presentation.rows

    @cached_property
    def canonical(self) -> tuple[int, tuple[int, ...]]:
        """``(free rank, invariant factors d1 | d2 | ... , each > 1)``."""
        s, _, _ = smith_normal_form(self.presentation)
        diag = [d for d in s.diagonal_entries() if d != 0]
        rank = self.presentation.rows - len(diag)
        return rank, tuple(d for d in diag if d > 1)

    @property
    def rank(self) -> int:
        return self.canonical[0]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.canonical[1]

    @property
    def order(self) -> int | None:
        """Number of elements, or ``None`` if infinite."""
        rank, factors = self.canonical
        if rank:
            return None
        out = 1
        for d in factors:
            out *= d
        return out

    def isomorphic(self, other: FgAbGroup) -> bool:
        return self.canonical == other.canonical

    def __str__(self) -> str:
        return format_canonical(*self.canonical)


def format_canonical(rank: int, factors: Sequence[int]) -> str:
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    parts.extend(f"Z/{d}" for d in factors)
    return " ⊕ ".join(parts) if parts else "0"


def abelian_group(rank: int = 0, torsion: Sequence[int] = ()) -> FgAbGroup:
    """``Z^rank ⊕ Z/t1 ⊕ ...``; torsion entries need not form a divisibility chain."""
    n = rank + len(torsion)
    return FgAbGroup(IntMatrix.diagonal([0] * rank + list(torsion), rows=n, cols=n))


def cyclic(n: int) -> FgAbGroup:
    """Z/n, with ``cyclic(0)`` meaning Z."""
    return abelian_group(1, ()) if n == 0 else abelian_group(0, (n,))


def free_abelian(rank: int) -> FgAbGroup:
    return abelian_group(rank)


_NAME = re.compile(r"^\s*Z(?:/|_)?(\d*)\s*$")


def parse_group_name(text: str) -> FgAbGroup | None:
    """``"Z"``, ``"Z4"``, ``"Z/4"``, or a ``⊕``/``+``-separated sum of these."""
    parts = [p for p in re.split(r"⊕|\+", text)]
    rank, torsion = 0, []
    for p in parts:
        p = p.strip()
        power = re.fullmatch(r"Z\^(\d+)", p)
        if power:
            rank += int(power.group(1))
            continue
        m = _NAME.match(p)
        if not m:
            return None
        if m.group(1) in ("", "0"):
            rank += 1
        else:
            torsion.append(int(m.group(1)))
    return abelian_group(rank, torsion)


def _solve_integer(p: IntMatrix, v: Sequence[int]) -> bool:
    """Is ``v`` in the Z-span of the columns of ``p``?"""
    s, u, _ = smith_normal_form(p)
    uv = [sum(a * b for a, b in zip(row, v)) for row in u.entries]
    d = s.diagonal_entries()
    for i, val in enumerate(uv):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if val != 0:
                return False
        elif val % di:
            return False
    return True


def check_homomorphism(f: IntMatrix, source: FgAbGroup, target: FgAbGroup) -> None:
    """Raise unless ``f`` (target gens x source gens) sends source relations into target relations."""
    if f.rows != target.generators or f.cols != source.generators:
        raise ShapeMismatch(
            f"map is {f.rows}x{f.cols}, expected {target.generators}x{source.generators}"
        )
    image = f @ source.presentation
    for j in range(image.cols):
        col = [image[i, j] for i in range(image.rows)]
        if not _solve_integer(target.presentation, col):
            raise NotAHomomorphism(f"relation {j} of the source is not sent to a relation")


def cokernel(m: IntMatrix) -> FgAbGroup:
    return FgAbGroup(m)


def coequalizer_ab(
    f: IntMatrix,
    g: IntMatrix,
    source: FgAbGroup | None = None,
    target: FgAbGroup | None = None,
) -> FgAbGroup:
    """Quotient of ``target`` by the image of ``f - g``.

    ``source`` and ``target`` default to free groups on the matrices' columns
    and rows.
    """
    if (f.rows, f.cols) != (g.rows, g.cols):
        raise ShapeMismatch("parallel maps must have the same shape")
    source = source or free_abelian(f.cols)
    target = target or free_abelian(f.rows)
    check_homomorphism(f, source, target)
    check_homomorphism(g, source, target)
    return FgAbGroup((f - g).hstack(target.presentation))


def pushout_ab(
    f: IntMatrix,
    g: IntMatrix,
    source: FgAbGroup | None = None,
    left: FgAbGroup | None = None,
    right: FgAbGroup | None = None,
) -> FgAbGroup:
    """Pushout of ``left <-f- source -g-> right``: ``(left ⊕ right) / (f(a), -g(a))``."""
    if f.cols != g.cols:
        raise ShapeMismatch("pushout legs need a common domain")
    source = source or free_abelian(f.cols)
    left = left or free_abelian(f.rows)
    right = right or free_abelian(g.rows)
    check_homomorphism(f, source, left)
    check_homomorphism(g, source, right)
    glue = f.vstack(-g)
    rel_left = left.presentation.vstack(IntMatrix.zeros(right.generators, left.presentation.cols))
    rel_right = IntMatrix.zeros(left.generators, right.presentation.cols).vstack(right.presentation)
    return FgAbGroup(glue.hstack(rel_left, rel_right))


def tensor_product(m: FgAbGroup, n: FgAbGroup) -> FgAbGroup:
    """``coker(A) ⊗ coker(B) = coker [A ⊗ I_q | I_p ⊗ B]`` for A: p-row, B: q-row presentations."""
    a, b = m.presentation, n.presentation
    p, q = a.rows, b.rows
    return FgAbGroup(a.kron(IntMatrix.identity(q)).hstack(IntMatrix.identity(p).kron(b)))


def direct_sum(*groups: FgAbGroup) -> FgAbGroup:
    rows = sum(g.generators for g in groups)
    blocks = []
    offset = 0
    for g in groups:
        pres = g.presentation
        top = IntMatrix.zeros(offset, pres.cols)
        bottom = IntMatrix.zeros(rows - offset - pres.rows, pres.cols)
        blocks.append(top.vstack(pres, bottom))
        offset += pres.rows
    if not blocks:
        return free_abelian(0)
    return FgAbGroup(blocks[0].hstack(*blocks[1:]))
