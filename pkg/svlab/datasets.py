import re
from pathlib import Path
from threading import RLock
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .base import BaseElement, ComplexError, DatasetError, NonOrientableError
from .chains import oriented_tuple
from .complexes import Complex, load_complex_file
from .constructions import connected_sum
from .manifolds import ManifoldComplex, manifold_check

__all__ = ['DatasetLibrary', 'Dataset', 'dataset', 'dataset_names', 'cocycle', 'recognize_surface',
           'DATA_DIR']

DATA_DIR = Path(__file__).parent / 'data'

Dataset = Union[Complex, ManifoldComplex]

_PARAMETRIC = re.compile(r'^(?P<family>Delta|Sphere|Circle|Surface)\[(?P<n>\d+)\]$')

_ALIASES = {'RP2-6': 'RP2_6'}

_SHIPPED = ('Torus7', 'PuncturedTorus', 'Annulus', 'Mobius', 'RP2_6')

_TEMPLATES = ('Delta[n]', 'Sphere[n]', 'Circle[n]', 'Surface[g]', 'Interval')

# Edge values of the Torus7 cocycles, keyed by (v - u) mod 7.
_TORUS_COCYCLES = {
    'meridian': {1: 1, 2: -1, 3: 0, 4: 0, 5: 1, 6: -1},
    'longitude': {1: 0, 2: 1, 3: 1, 4: -1, 5: -1, 6: 0},
}

_ANNULUS_WINDING = {(0, 1): 1, (0, 3): 1, (3, 5): -1}


def _delta(n: int, name: str) -> Complex:
    return Complex(name, n, n + 1, (tuple(range(n + 1)),))


def _sphere(n: int, name: str) -> Complex:
    if n < 1:
        raise DatasetError(f'{name}: sphere dimension must be at least 1')
    vertices = tuple(range(n + 2))
    facets = tuple(oriented_tuple(vertices[:i] + vertices[i + 1:], -1 if i % 2 else 1) for i in range(n + 2))
    return Complex(name, n, n + 2, facets)


def _circle(n: int, name: str) -> Complex:
    if n < 3:
        raise DatasetError(f'{name}: a simplicial circle needs at least 3 vertices')
    return Complex(name, 1, n, tuple((i, (i + 1) % n) for i in range(n)))


def _as_dataset(k: Complex) -> Dataset:
    try:
        return manifold_check(k)
    except NonOrientableError:
        return k


class DatasetLibrary(BaseElement):
    """
    Named triangulations: parametric families, shipped triangulation files and any ``<name>.json`` file in
    the extra directories given in ``paths``. Loaded datasets are cached.
    """

    def __init__(self, *args, paths: Iterable[Union[str, Path]] = (), **kwargs):
        super(DatasetLibrary, self).__init__(*args, **kwargs)
        self.paths = [Path(p) for p in paths]
        self._cache: Dict[str, Dataset] = {}
        self._lock = RLock()

    def dataset(self, name: str) -> Dataset:
        name = _ALIASES.get(name, name)
        with self._lock:
            cached = self._cache.get(name)
            if cached is not None:
                return cached
            result = self._load(name)
            self._cache[name] = result
        self.log(f'Loaded dataset {name}', dataset=name)
        return result

    def _load(self, name: str) -> Dataset:
        match = _PARAMETRIC.match(name)
        if match is not None:
            family, n = match.group('family'), int(match.group('n'))
            if family == 'Delta':
                return manifold_check(_delta(n, name))
            if family == 'Sphere':
                return manifold_check(_sphere(n, name))
            if family == 'Circle':
                return manifold_check(_circle(n, name))
            return self._surface(n, name)

        if name == 'Interval':
            return manifold_check(_delta(1, name))

        path = self._find(name)
        if path is None:
            raise DatasetError(f'Unknown dataset {name}')
        try:
            return _as_dataset(load_complex_file(path))
        except ComplexError as ex:
            raise DatasetError(f'Invalid dataset {name}: {ex}')

    def _find(self, name: str) -> Optional[Path]:
        for directory in self.paths:
            candidate = directory / f'{name}.json'
            if candidate.is_file():
                return candidate
        if name in _SHIPPED:
            return DATA_DIR / f'{name}.json'
        return None

    def _surface(self, genus: int, name: str) -> ManifoldComplex:
        if genus == 0:
            sphere = self.dataset('Sphere[2]')
            return ManifoldComplex(sphere.complex.renamed(name), sphere.orientation, (), (), 1)
        torus = self.dataset('Torus7')
        result = torus
        for _ in range(genus - 1):
            result = connected_sum(result, torus)
        return manifold_check(result.complex.renamed(name))

    def dataset_names(self) -> List[str]:
        names = set(_SHIPPED) | set(_TEMPLATES)
        for directory in self.paths:
            if directory.is_dir():
                names.update(p.stem for p in directory.glob('*.json'))
        return sorted(names)

    def cocycle(self, base: str, name: str) -> Dict[Tuple[int, int], int]:
        base = _ALIASES.get(base, base)
        if name == 'zero':
            return {}
        if base == 'Torus7' and name in _TORUS_COCYCLES:
            values = _TORUS_COCYCLES[name]
            return {(u, v): values[(v - u) % 7] for u in range(7) for v in range(u + 1, 7)}
        if base == 'Annulus' and name == 'winding':
            return dict(_ANNULUS_WINDING)
        raise DatasetError(f'Unknown cocycle {base}.{name}')


_default_library = DatasetLibrary(name='svlab-datasets')


def dataset(name: str) -> Dataset:
    return _default_library.dataset(name)


def dataset_names() -> List[str]:
    return _default_library.dataset_names()


def cocycle(base: str, name: str) -> Dict[Tuple[int, int], int]:
    return _default_library.cocycle(base, name)


def recognize_surface(m: ManifoldComplex) -> Optional[str]:
    """
    Name of a library model homeomorphic to ``m``, for closed orientable connected surfaces of genus 0 or 1.
    """
    if m.dim != 2 or not m.is_closed or not m.is_orientable or not m.is_connected:
        return None
    return {2: 'Sphere[2]', 0: 'Torus7'}.get(m.euler_characteristic)
