from csv import writer
from fractions import Fraction
from io import StringIO
from pathlib import Path
from threading import RLock
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .base import BaseElement
from .intervals import format_value

__all__ = ['BaseToCsv', 'DictToCsv', 'INVARIANT_COLUMNS', 'invariant_table']

CellMapper = Callable[[Any], Any]

ColumnSpec = Union[str, Tuple[str, str], Tuple[str, CellMapper], Tuple[str, str, CellMapper]]


def _cell(value: Any) -> Union[str, int, None]:
    if value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_value(value)
    if isinstance(value, (list, tuple)):
        return ' '.join(str(_cell(v)) for v in value)
    return str(value)


class BaseToCsv(BaseElement):
    """
    Writes mappings as CSV rows. Each column reads one key of the row, optionally through a mapper; a missing
    key leaves the cell empty.
    """

    def __init__(self, *args, csv_kwargs: Dict = None, header: bool = True, **kwargs):
        super(BaseToCsv, self).__init__(*args, **kwargs)

        self.csv_kwargs = csv_kwargs or {}
        self.header = header
        self._columns: Dict[str, Tuple[str, Optional[CellMapper]]] = {}
        self._lock = RLock()

    @property
    def columns(self) -> Dict[str, Tuple[str, Optional[CellMapper]]]:
        return self._columns.copy()

    def map_value(self, label: str, value: Any) -> Any:
        if value is None:
            return None
        mapper = self._columns[label][1]
        if mapper is not None:
            value = mapper(value)
        return _cell(value)

    def row(self, frame: Mapping[str, Any]) -> List[Any]:
        return [self.map_value(label, frame.get(key)) for label, (key, _) in self._columns.items()]

    def to_csv(self, frames: Iterable[Mapping[str, Any]]) -> str:
        with self._lock:
            io = StringIO()
            out = writer(io, **self.csv_kwargs)
            if self.header:
                out.writerow(list(self._columns))
            for frame in frames:
                out.writerow(self.row(frame))
            return io.getvalue()

    def dump(self, frames: Iterable[Mapping[str, Any]], path: Union[str, Path]):
        self.log(f'Writing {path}')
        with Path(path).open('w', encoding='utf-8', newline='') as f:
            f.write(self.to_csv(frames))


def _normalize_column(label: Union[str, tuple], key: Union[str, CellMapper, tuple] = None,
                      mapper: CellMapper = None) -> Tuple[str, Tuple[str, Optional[CellMapper]]]:
    if isinstance(label, tuple):
        return _normalize_column(*label)
    if key is None:
        return label, (label, mapper)
    if isinstance(key, tuple):
        return _normalize_column(label, *key)
    if callable(key):
        return label, (label, key)
    return label, (key, mapper)


class DictToCsv(BaseToCsv):
    """
    ``columns`` is either a list of labels, ``(label, key)``, ``(label, mapper)`` or ``(label, key, mapper)``
    tuples, or a mapping from label to key, mapper or ``(key, mapper)``.
    """

    def __init__(self, *args, columns: Union[Mapping[str, Any], List[ColumnSpec]], **kwargs):
        super(DictToCsv, self).__init__(*args, **kwargs)

        items = columns.items() if isinstance(columns, Mapping) else columns
        self._columns = dict(_normalize_column(c) for c in items)


INVARIANT_COLUMNS = ['target', 'quantity', 'value']


def invariant_table(*args, **kwargs) -> DictToCsv:
    return DictToCsv(*args, columns=INVARIANT_COLUMNS, **kwargs)
