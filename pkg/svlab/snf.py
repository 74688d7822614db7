from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Set, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

__all__ = ['SparseMatrix', 'smith_diagonal', 'invariant_factors', 'integer_rank', 'rational_rank',
           'in_rational_span']

SparseMatrix = Mapping[Tuple[int, int], Union[int, Fraction]]


class _Elimination:
    """
    Sparse integer matrix under unimodular row and column operations.
    """

    def __init__(self, entries: SparseMatrix):
        self.rows: Dict[int, Dict[int, int]] = {}
        self.cols: Dict[int, Set[int]] = {}
        for (r, c), v in entries.items():
            v = int(v)
            if v:
                self.rows.setdefault(r, {})[c] = v
                self.cols.setdefault(c, set()).add(r)

    def get(self, r: int, c: int) -> int:
        return self.rows.get(r, {}).get(c, 0)

    def set(self, r: int, c: int, v: int):
        if v:
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, set()).add(r)
            return
        row = self.rows.get(r)
        if row is not None and c in row:
            del row[c]
            if not row:
                del self.rows[r]
        col = self.cols.get(c)
        if col is not None:
            col.discard(r)
            if not col:
                del self.cols[c]

    def add_row(self, target: int, source: int, factor: int):
        for c, v in list(self.rows[source].items()):
            self.set(target, c, self.get(target, c) + factor * v)

    def add_col(self, target: int, source: int, factor: int):
        for r in list(self.cols[source]):
            self.set(r, target, self.get(r, target) + factor * self.rows[r][source])

    def pivot(self) -> Tuple[int, int, int]:
        return min(((r, c, v) for r, row in self.rows.items() for c, v in row.items()),
                   key=lambda t: (abs(t[2]), t[0], t[1]))

    def remove(self, r: int, c: int):
        self.set(r, c, 0)


def smith_diagonal(entries: SparseMatrix) -> List[int]:
    """
    Diagonalize an integer matrix and return the absolute values of its nonzero diagonal entries.

    The pivot is always the smallest entry in absolute value, so remainders shrink strictly and entries
    stay small on boundary matrices.
    """
    work = _Elimination(entries)
    diagonal = []

    while work.rows:
        pr, pc, pv = work.pivot()
        while True:
            for r in sorted(work.cols.get(pc, ())):
                if r != pr:
                    work.add_row(r, pr, -(work.get(r, pc) // pv))
            for c in sorted(work.rows.get(pr, {})):
                if c != pc:
                    work.add_col(c, pc, -(work.get(pr, c) // pv))

            remainders = [(r, pc, work.get(r, pc)) for r in work.cols.get(pc, ()) if r != pr]
            remainders += [(pr, c, v) for c, v in work.rows.get(pr, {}).items() if c != pc]
            if not remainders:
                break
            pr, pc, pv = min(remainders, key=lambda t: (abs(t[2]), t[0], t[1]))

        diagonal.append(abs(pv))
        work.remove(pr, pc)

    return diagonal


def invariant_factors(entries: SparseMatrix) -> List[int]:
    """
    Nonzero invariant factors in divisibility order.
    """
    factors = sorted(smith_diagonal(entries))
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            a, b = factors[i], factors[j]
            g = gcd(a, b)
            factors[i], factors[j] = g, a * b // g
    return factors


def integer_rank(entries: SparseMatrix) -> int:
    return len(smith_diagonal(entries))


def _domain_matrix(entries: SparseMatrix, shape: Tuple[int, int]) -> DomainMatrix:
    data: Dict[int, Dict[int, object]] = {}
    for (r, c), v in entries.items():
        v = Fraction(v)
        if v:
            data.setdefault(r, {})[c] = QQ(v.numerator, v.denominator)
    return DomainMatrix(data, shape, QQ)


def rational_rank(entries: SparseMatrix, shape: Tuple[int, int]) -> int:
    if not any(entries.values()) or 0 in shape:
        return 0
    return _domain_matrix(entries, shape).rank()


def in_rational_span(entries: SparseMatrix, shape: Tuple[int, int], vector: Mapping[int, Fraction]) -> bool:
    """
    Whether ``vector`` (indexed by row) lies in the rational column span of the matrix.
    """
    if not any(vector.values()):
        return True
    rows, cols = shape
    augmented = dict(entries)
    for r, v in vector.items():
        augmented[(r, cols)] = v
    return rational_rank(entries, shape) == rational_rank(augmented, (rows, cols + 1))
