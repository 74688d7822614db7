from enum import Enum
from fractions import Fraction
from json import JSONDecodeError, JSONEncoder, dumps, loads
from pathlib import Path
from typing import Any, Dict, Type, Union

from .base import BaseElement, SvlabError

__all__ = ['SvlabJSONEncoder', 'BaseFromJson', 'BaseToJson', 'FromJson', 'ToJson']


class SvlabJSONEncoder(JSONEncoder):
    """
    Rationals are written as exact strings, enums by value and domain objects through ``to_dict``.
    """

    def default(self, o: Any) -> Any:
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, Enum):
            return o.value
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        to_dict = getattr(o, 'to_dict', None)
        if callable(to_dict):
            return to_dict()
        return super(SvlabJSONEncoder, self).default(o)


class BaseFromJson(BaseElement):
    def __init__(self,
                 *args,
                 json_decoder_cls=None,
                 json_decoder_kwargs: Dict = None,
                 error_cls: Type[SvlabError] = SvlabError,
                 **kwargs):
        super(BaseFromJson, self).__init__(*args, **kwargs)

        self.json_decoder_cls = json_decoder_cls

        self.json_decoder_kwargs = json_decoder_kwargs or {}

        self.error_cls = error_cls

    def from_json(self, data: Union[str, bytes]) -> Any:
        try:
            return loads(data, cls=self.json_decoder_cls, **self.json_decoder_kwargs)
        except JSONDecodeError as ex:
            raise self.error_cls(f'Malformed JSON document: {ex}')


class FromJson(BaseFromJson):

    def load(self, path: Union[str, Path]) -> Any:
        self.log(f'Reading {path}')
        return self.from_json(Path(path).read_text(encoding='utf-8'))


class BaseToJson(BaseElement):

    def __init__(self, *args, json_encoder_cls=SvlabJSONEncoder, json_encoder_kwargs: Dict = None, **kwargs):
        super(BaseToJson, self).__init__(*args, **kwargs)

        self.json_encoder_cls = json_encoder_cls

        self.json_encoder_kwargs = json_encoder_kwargs or {}

        self.json_encoder_kwargs.setdefault('separators', (', ', ': '))
        self.json_encoder_kwargs.setdefault('indent', None)
        self.json_encoder_kwargs.setdefault('ensure_ascii', False)

    def to_json(self, data: Any) -> str:
        return dumps(data, cls=self.json_encoder_cls, **self.json_encoder_kwargs)


class ToJson(BaseToJson):

    def dump(self, data: Any, path: Union[str, Path]):
        self.log(f'Writing {path}')
        Path(path).write_text(self.to_json(data) + '\n', encoding='utf-8')
