from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .base import ComplexError
from .complexes import Complex
from .snf import invariant_factors

__all__ = ['HomologyProfile', 'boundary_matrix', 'homology']


@dataclass(frozen=True)
class HomologyProfile:
    betti: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]
    relative: bool = False

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def to_dict(self) -> Dict[str, Any]:
        return {'betti': list(self.betti),
                'torsion': [list(t) for t in self.torsion],
                'relative': self.relative}


def _chain_basis(k: Complex, degree: int, relative_to: Optional[Complex]):
    basis = k.simplices(degree)
    if relative_to is not None:
        basis = tuple(s for s in basis if not relative_to.contains(s))
    return {s: i for i, s in enumerate(basis)}


def boundary_matrix(k: Complex, degree: int,
                    relative_to: Optional[Complex] = None) -> Tuple[Dict[Tuple[int, int], int], Tuple[int, int]]:
    """
    Matrix of the simplicial boundary from degree ``degree`` to ``degree - 1``, columns indexed by the
    ``degree``-simplices. Simplices of ``relative_to`` are quotiented out.
    """
    cols = _chain_basis(k, degree, relative_to)
    rows = _chain_basis(k, degree - 1, relative_to) if degree > 0 else {}
    entries: Dict[Tuple[int, int], int] = {}
    for simplex, c in cols.items():
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1:]
            r = rows.get(face)
            if r is not None:
                entries[(r, c)] = 1 if i % 2 == 0 else -1
    return entries, (len(rows), len(cols))


def homology(k: Complex, relative_to: Optional[Complex] = None) -> HomologyProfile:
    if relative_to is not None and not relative_to.is_subcomplex_of(k):
        raise ComplexError(f'{relative_to.name} is not a subcomplex of {k.name}')

    factors = {}
    for degree in range(1, k.dim + 1):
        entries, _ = boundary_matrix(k, degree, relative_to)
        factors[degree] = invariant_factors(entries)

    betti = []
    torsion = []
    for degree in range(k.dim + 1):
        size = len(_chain_basis(k, degree, relative_to))
        rank_out = len(factors.get(degree, ()))
        incoming = factors.get(degree + 1, ())
        betti.append(size - rank_out - len(incoming))
        torsion.append(tuple(f for f in incoming if f > 1))

    return HomologyProfile(tuple(betti), tuple(torsion), relative_to is not None)
