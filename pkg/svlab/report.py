from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .json import BaseToJson, ToJson

__all__ = ['Report', 'REPORT_SCHEMA', 'EXIT_OK', 'EXIT_ASSERTION', 'EXIT_INCONSISTENCY', 'EXIT_ERROR']

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INCONSISTENCY = 2
EXIT_ERROR = 3

_JSON_KWARGS = {'sort_keys': True, 'indent': 2, 'separators': (',', ': ')}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class Report:
    """
    Outcome of evaluating a script. Everything but ``generated_at`` is a function of the script and the
    datasets it reads.
    """

    source: Optional[str] = None
    statements: int = 0
    assertions: List[Dict[str, Any]] = field(default_factory=list)
    queries: List[Dict[str, Any]] = field(default_factory=list)
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    cobordisms: List[Dict[str, Any]] = field(default_factory=list)
    gromov: List[Dict[str, Any]] = field(default_factory=list)
    obstructions: List[Dict[str, Any]] = field(default_factory=list)
    errors: List[Dict[str, Any]] = field(default_factory=list)
    inconsistency: Optional[Dict[str, Any]] = None
    invariants: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    ledger: Dict[str, Dict[str, str]] = field(default_factory=dict)
    explain: Optional[Dict[str, Dict[str, str]]] = None
    generated_at: str = field(default_factory=_now, compare=False)

    @property
    def failed_assertions(self) -> List[Dict[str, Any]]:
        return [a for a in self.assertions if not a['passed']]

    @property
    def exit_code(self) -> int:
        if self.errors:
            return EXIT_ERROR
        if self.inconsistency is not None:
            return EXIT_INCONSISTENCY
        if self.failed_assertions:
            return EXIT_ASSERTION
        return EXIT_OK

    def invariant_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for target in sorted(self.invariants):
            for quantity, value in sorted(self.invariants[target].items()):
                rows.append({'target': target, 'quantity': quantity, 'value': value})
        return rows

    def to_dict(self) -> Dict[str, Any]:
        result = {'schema': REPORT_SCHEMA,
                  'exit_code': self.exit_code,
                  'source': self.source,
                  'statements': self.statements,
                  'assertions': self.assertions,
                  'queries': self.queries,
                  'certificates': self.certificates,
                  'cobordisms': self.cobordisms,
                  'gromov': self.gromov,
                  'obstructions': self.obstructions,
                  'errors': self.errors,
                  'inconsistency': self.inconsistency,
                  'invariants': self.invariants,
                  'ledger': self.ledger,
                  'generated_at': self.generated_at}
        if self.explain is not None:
            result['explain'] = self.explain
        return result

    def to_json(self) -> str:
        return BaseToJson(json_encoder_kwargs=dict(_JSON_KWARGS)).to_json(self.to_dict())

    def dump(self, path: Union[str, Path]):
        ToJson(json_encoder_kwargs=dict(_JSON_KWARGS)).dump(self.to_dict(), path)
