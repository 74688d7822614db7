from collections import defaultdict
from pathlib import Path
from threading import RLock
from typing import Any, Dict, Iterable, List, Mapping, Optional, Union

from .base import BUS_MSG_CERTIFICATE_APPENDED, BaseElement, CertificateError
from .certificates import Certificate, CertificateKind, verify
from .json import FromJson, ToJson

__all__ = ['Ledger', 'LEDGER_SCHEMA']

LEDGER_SCHEMA = 1

# Kinds whose bounds also bound the requested kind.
_IMPLIED_BY = {
    CertificateKind.REAL: (CertificateKind.REAL, CertificateKind.INTEGRAL),
    CertificateKind.RELATIVE_REAL: (CertificateKind.RELATIVE_REAL, CertificateKind.RELATIVE_INTEGRAL),
    CertificateKind.INTEGRAL: (CertificateKind.INTEGRAL,),
    CertificateKind.RELATIVE_INTEGRAL: (CertificateKind.RELATIVE_INTEGRAL,),
    CertificateKind.STABLE_INTEGRAL: (CertificateKind.STABLE_INTEGRAL, CertificateKind.INTEGRAL,
                                      CertificateKind.RELATIVE_INTEGRAL),
}


class Ledger(BaseElement):
    """
    Append-only certificate store. Every certificate is verified before it is accepted.
    """

    def __init__(self, *args, **kwargs):
        super(Ledger, self).__init__(*args, **kwargs)
        self._entries: List[Certificate] = []
        self._by_target: Dict[str, List[Certificate]] = defaultdict(list)
        self._lock = RLock()

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(list(self._entries))

    def append(self, cert: Certificate) -> Certificate:
        report = verify(cert)
        if not report.passed:
            raise CertificateError(f'{cert.target}: certificate rejected: {report.reason}')

        with self._lock:
            self._entries.append(cert)
            self._by_target[cert.target].append(cert)

        self.log(f'Certificate {cert.kind.value} for {cert.target} with bound {cert.bound}')
        self._send_message(self._build_message(BUS_MSG_CERTIFICATE_APPENDED, certificate=cert))
        return cert

    def extend(self, certs: Iterable[Certificate]):
        for cert in certs:
            self.append(cert)

    def kind_order_holds(self) -> bool:
        """
        Every integral bound is a real bound, so the best real bound never exceeds the best integral one.
        """
        for target in self.targets():
            for integral, real in ((CertificateKind.INTEGRAL, CertificateKind.REAL),
                                   (CertificateKind.RELATIVE_INTEGRAL, CertificateKind.RELATIVE_REAL)):
                a, b = self.best(target, integral), self.best(target, real)
                if a is not None and (b is None or b.bound > a.bound):
                    return False
        return True

    def for_target(self, target: str) -> List[Certificate]:
        with self._lock:
            return list(self._by_target.get(target, ()))

    def targets(self) -> List[str]:
        with self._lock:
            return sorted(self._by_target)

    def best(self, target: str, kind: CertificateKind) -> Optional[Certificate]:
        candidates = [c for c in self.for_target(target) if c.kind in _IMPLIED_BY[kind]]
        if not candidates:
            return None
        return min(candidates, key=lambda c: c.bound)

    def bounds(self, target: str) -> Dict[CertificateKind, Certificate]:
        result = {}
        for kind in CertificateKind:
            best = self.best(target, kind)
            if best is not None:
                result[kind] = best
        return result

    def to_dict(self) -> Dict[str, Any]:
        with self._lock:
            return {'schema': LEDGER_SCHEMA, 'certificates': [c.to_dict() for c in self._entries]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], *args, verify_entries: bool = True, **kwargs) -> 'Ledger':
        if not isinstance(data, Mapping) or data.get('schema') != LEDGER_SCHEMA:
            raise CertificateError('Unsupported ledger document')
        ledger = cls(*args, **kwargs)
        for entry in data.get('certificates', ()):
            cert = Certificate.from_dict(entry)
            if verify_entries:
                ledger.append(cert)
            else:
                with ledger._lock:
                    ledger._entries.append(cert)
                    ledger._by_target[cert.target].append(cert)
        return ledger

    def export(self, path: Union[str, Path]):
        ToJson(bus=self.bus, json_encoder_kwargs={'sort_keys': True, 'indent': 2}).dump(self.to_dict(), path)

    @classmethod
    def load(cls, path: Union[str, Path], *args, verify_entries: bool = True, **kwargs) -> 'Ledger':
        data = FromJson(bus=kwargs.get('bus'), error_cls=CertificateError).load(path)
        return cls.from_dict(data, *args, verify_entries=verify_entries, **kwargs)
