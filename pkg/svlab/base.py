from dataclasses import dataclass, field
from logging import DEBUG, INFO
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple, Union
from uuid import uuid4

__all__ = ['Message', 'Bus', 'MessageFilter', 'SimpleMessageFilter', 'BaseElement',
           'SvlabError', 'ComplexError', 'ManifoldError', 'NonOrientableError', 'ConstructionError',
           'CertificateError', 'InferenceError', 'InconsistencyError', 'CobordismError', 'DatasetError',
           'ScriptError', 'EvaluationError',
           'BUS_MSG_LOG', 'BUS_MSG_RULE_FIRED', 'BUS_MSG_CERTIFICATE_APPENDED', 'BUS_MSG_INCONSISTENCY',
           'BUS_MSG_STATEMENT', 'BUS_MSG_ELEMENT_ERROR']

MessageHandler = Callable[['Message'], Any]

BUS_MSG_LOG = 'log'
BUS_MSG_RULE_FIRED = 'rule-fired'
BUS_MSG_CERTIFICATE_APPENDED = 'certificate-appended'
BUS_MSG_INCONSISTENCY = 'inconsistency'
BUS_MSG_STATEMENT = 'statement'
BUS_MSG_ELEMENT_ERROR = 'element-error'


class SvlabError(Exception):
    pass


class ComplexError(SvlabError, ValueError):
    pass


class ManifoldError(ComplexError):
    pass


class NonOrientableError(ManifoldError):
    pass


class ConstructionError(SvlabError, ValueError):
    pass


class CertificateError(SvlabError, ValueError):
    pass


class InferenceError(SvlabError, ValueError):
    pass


class InconsistencyError(InferenceError):
    def __init__(self, target: str, quantity: str, first: List[Any], second: List[Any]):
        super(InconsistencyError, self).__init__(f'Empty interval for {quantity}({target})')
        self.target = target
        self.quantity = quantity
        self.first = first
        self.second = second


class CobordismError(SvlabError, ValueError):
    pass


class DatasetError(SvlabError, KeyError):

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class ScriptError(SvlabError, ValueError):
    def __init__(self, msg: str, *, line: int = None, column: int = None, expected: Iterable[str] = None):
        super(ScriptError, self).__init__(msg)
        self.line = line
        self.column = column
        self.expected = sorted(expected or [])

    def __str__(self):
        result = self.args[0]
        if self.line is not None:
            result = f'line {self.line}, column {self.column}: {result}'
        if self.expected:
            result += f' (expected one of: {", ".join(self.expected)})'
        return result


class EvaluationError(SvlabError):
    def __init__(self, msg: str, *, line: int = None):
        super(EvaluationError, self).__init__(msg)
        self.line = line

    def __str__(self):
        if self.line is None:
            return self.args[0]
        return f'line {self.line}: {self.args[0]}'


@dataclass()
class Message:
    sender: str
    type: str
    params: Dict[str, Any] = field(default_factory=dict)


class MessageFilter:
    def allow(self, message: 'Message') -> bool:
        return True


class SimpleMessageFilter(MessageFilter):

    def __init__(self,
                 msg_types: Iterable[str] = None,
                 msg_senders: Iterable[str] = None,
                 min_level: int = None):
        self.msg_types = msg_types
        self.msg_senders = msg_senders
        self.min_level = min_level

    def allow(self, message: 'Message') -> bool:
        if self.msg_types and message.type not in self.msg_types:
            return False
        if self.msg_senders and message.sender not in self.msg_senders:
            return False
        if self.min_level is not None and message.params.get('level', INFO) < self.min_level:
            return False
        return True


class Bus:
    """
    Synchronous message bus. Handlers are called in registration order.
    """

    def __init__(self):
        self._handlers: List[Tuple[MessageFilter, MessageHandler]] = []

    def send_message(self, message: 'Message'):
        for msg_filter, handler in list(self._handlers):
            if msg_filter.allow(message):
                handler(message)

    def add_handler(
            self,
            func: MessageHandler = None,
            *,
            msg_filter: MessageFilter = None,
            **kwargs
    ) -> Union[MessageHandler, Callable[[MessageHandler], MessageHandler]]:
        if msg_filter is None:
            msg_filter = SimpleMessageFilter(**kwargs)
        else:
            if len(kwargs):
                raise RuntimeError('Invalid extra argument when already defined a checker')

        def inner(f: MessageHandler) -> MessageHandler:
            self._handlers.append((msg_filter, f))
            return f

        if func:
            return inner(func)
        return inner

    def remove_handler(self, func: MessageHandler):
        self._handlers = [(f, h) for f, h in self._handlers if h is not func]


class BaseElement:

    def __init__(self, name: str = None, *, bus: Optional[Bus] = None, log_level: int = INFO):
        self.name = name or self.new_name()
        self._bus = bus
        self._log_level = log_level

    @property
    def bus(self) -> Optional[Bus]:
        return self._bus

    @bus.setter
    def bus(self, bus: Optional[Bus]):
        self._bus = bus

    @classmethod
    def new_name(cls):
        return '-'.join([cls.__name__,
                         str(uuid4())])

    def _build_message(self, type: str, **params):
        return Message(sender=self.name, type=type, params=params)

    def _send_message(self, msg: 'Message'):
        if self.bus is None:
            return
        self.bus.send_message(msg)

    def _report_error(self, ex: BaseException):
        self.log(f'Error: {ex}', lvl=DEBUG)
        self._send_message(self._build_message(BUS_MSG_ELEMENT_ERROR, ex=ex))

    def log(self, msg, *, lvl=INFO, **kwargs):
        if lvl < self._log_level:
            return
        self._send_message(self._build_message(BUS_MSG_LOG, message=msg, level=lvl, **kwargs))
