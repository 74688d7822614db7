from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from .base import ScriptError
from .descriptions import ATTRIBUTES
from .intervals import format_value

__all__ = ['Number', 'Infinity', 'Flag', 'Symbol', 'BoundaryItem', 'Bracket', 'OpenInterval', 'Vector', 'Pairs',
           'Ref', 'Call', 'ManifoldDecl', 'Let', 'Certify', 'CobordismDecl', 'CobordismCompose', 'Assert', 'Query',
           'Script', 'GRAMMAR_FILE', 'parse', 'parse_file', 'format_script', 'format_node']

GRAMMAR_FILE = Path(__file__).parent / 'grammar.lark'


# values

@dataclass(frozen=True)
class Number:
    value: Fraction


@dataclass(frozen=True)
class Infinity:
    pass


@dataclass(frozen=True)
class Flag:
    value: Optional[bool]


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class BoundaryItem:
    name: str
    pi1_injective: Optional[bool]
    aspherical: Optional[bool]


@dataclass(frozen=True)
class Bracket:
    items: Tuple[Any, ...] = ()


@dataclass(frozen=True)
class OpenInterval:
    """
    ``(lo, hi]``: a quantity known to be strictly larger than ``lo``.
    """

    lo: Number
    hi: Union[Number, Infinity]


@dataclass(frozen=True)
class Vector:
    values: Tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class Pairs:
    items: Tuple[Vector, ...] = ()


# expressions

@dataclass(frozen=True)
class Ref:
    name: str
    index: Optional[int] = None
    attrs: Tuple[str, ...] = ()

    @property
    def base(self) -> str:
        return self.name if self.index is None else f'{self.name}[{self.index}]'


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple[Any, ...] = ()


Expr = Union[Ref, Call]


# statements

@dataclass(frozen=True)
class ManifoldDecl:
    name: str
    attributes: Tuple[Tuple[str, Any], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Certify:
    expr: Expr
    alias: Optional[str] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CobordismDecl:
    name: str
    incoming: Tuple[str, ...]
    outgoing: Tuple[str, ...]
    body: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CobordismCompose:
    name: str
    parts: Tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assert:
    term: Expr
    op: str
    value: Any
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Query:
    term: Expr
    line: int = field(default=0, compare=False)


Statement = Union[ManifoldDecl, Let, Certify, CobordismDecl, CobordismCompose, Assert, Query]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...] = ()

    def bindings(self) -> List[str]:
        return [b for b in (_binding(s) for s in self.statements) if b is not None]


def _binding(s: Statement) -> Optional[str]:
    if isinstance(s, Certify):
        return s.alias
    if isinstance(s, (Assert, Query)):
        return None
    return s.name


def _present(children) -> list:
    return [c for c in children if c is not None]


class ConstructAST(Transformer):

    def start(self, children):
        return Script(tuple(children))

    @v_args(meta=True)
    def manifold_stmt(self, meta, children):
        name, *attributes = _present(children)
        return ManifoldDecl(str(name), tuple(attributes), meta.line)

    def attribute(self, children):
        key, value = children
        return str(key), value

    @v_args(meta=True)
    def let_stmt(self, meta, children):
        name, expr = children
        return Let(str(name), expr, meta.line)

    @v_args(meta=True)
    def certify_stmt(self, meta, children):
        expr, alias = children
        return Certify(expr, None if alias is None else str(alias), meta.line)

    @v_args(meta=True)
    def cobordism_stmt(self, meta, children):
        name, incoming, outgoing, body = children
        return CobordismDecl(str(name), incoming, outgoing, str(body), meta.line)

    @v_args(meta=True)
    def compose_stmt(self, meta, children):
        name, *parts = children
        return CobordismCompose(str(name), tuple(str(p) for p in parts), meta.line)

    @v_args(meta=True)
    def assert_stmt(self, meta, children):
        term, op, value = children
        return Assert(term, str(op), value, meta.line)

    @v_args(meta=True)
    def query_stmt(self, meta, children):
        return Query(children[0], meta.line)

    def name_list(self, children):
        return tuple(str(c) for c in _present(children))

    def call(self, children):
        name, *args = children
        return Call(str(name), tuple(_present(args)))

    def ref(self, children):
        name, index, *attrs = children
        return Ref(str(name), None if index is None else int(index), tuple(str(a) for a in attrs))

    def number(self, children):
        return Number(Fraction(str(children[0])))

    def infinity(self, children):
        return Infinity()

    def flag(self, children):
        return Flag({'true': True, 'false': False, 'unknown': None}[str(children[0])])

    def symbol(self, children):
        name, index = children
        return Symbol(str(name) if index is None else f'{name}[{index}]')

    def boundary_item(self, children):
        name, injective, aspherical = children
        return BoundaryItem(str(name), injective.value, aspherical.value)

    def bracket(self, children):
        return Bracket(tuple(_present(children)))

    def open_interval(self, children):
        lo, hi = children
        return OpenInterval(Number(Fraction(str(lo))), hi)

    def vector(self, children):
        return Vector(tuple(Fraction(str(c)) for c in _present(children)))

    def pairs(self, children):
        return Pairs(tuple(_present(children)))


_parser: Optional[Lark] = None


def _get_parser() -> Lark:
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR_FILE.read_text(encoding='utf-8'), parser='lalr', propagate_positions=True,
                       maybe_placeholders=True)
    return _parser


def _check(script: Script):
    seen = set()
    for s in script.statements:
        if isinstance(s, ManifoldDecl):
            keys = [k for k, _ in s.attributes]
            for key in keys:
                if key not in ATTRIBUTES:
                    raise ScriptError(f'unknown attribute key {key}', line=s.line, column=1)
            if len(set(keys)) != len(keys):
                raise ScriptError(f'{s.name}: repeated attribute', line=s.line, column=1)
        name = _binding(s)
        if name is None:
            continue
        if name in seen:
            raise ScriptError(f'duplicate binding {name}', line=s.line, column=1)
        seen.add(name)


def parse(text: str) -> Script:
    try:
        tree = _get_parser().parse(text)
    except UnexpectedEOF as ex:
        raise ScriptError('unexpected end of script', line=ex.line if ex.line > 0 else None,
                          column=ex.column if ex.column > 0 else None, expected=ex.expected)
    except UnexpectedToken as ex:
        raise ScriptError(f"unexpected token '{ex.token}'", line=ex.line, column=ex.column, expected=ex.expected)
    except UnexpectedCharacters as ex:
        raise ScriptError(f"unexpected character '{ex.char}'", line=ex.line, column=ex.column,
                          expected=ex.allowed)
    except UnexpectedInput as ex:
        raise ScriptError(str(ex), line=ex.line, column=ex.column)

    try:
        script = ConstructAST().transform(tree)
    except VisitError as ex:
        raise ScriptError(str(ex.orig_exc))
    _check(script)
    return script


def parse_file(path: Union[str, Path]) -> Script:
    return parse(Path(path).read_text(encoding='utf-8'))


def format_node(node: Any) -> str:
    if isinstance(node, Number):
        return format_value(node.value)
    if isinstance(node, Infinity):
        return 'inf'
    if isinstance(node, Flag):
        return {True: 'true', False: 'false', None: 'unknown'}[node.value]
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, BoundaryItem):
        return f'{node.name}({format_node(Flag(node.pi1_injective))}, {format_node(Flag(node.aspherical))})'
    if isinstance(node, Bracket):
        return '[' + ', '.join(format_node(i) for i in node.items) + ']'
    if isinstance(node, OpenInterval):
        return f'({format_node(node.lo)}, {format_node(node.hi)}]'
    if isinstance(node, Vector):
        return '(' + ', '.join(format_node(Number(v)) for v in node.values) + ')'
    if isinstance(node, Pairs):
        return '[' + ', '.join(format_node(v) for v in node.items) + ']'
    if isinstance(node, Ref):
        return '.'.join((node.base,) + node.attrs)
    if isinstance(node, Call):
        return f'{node.func}(' + ', '.join(format_node(a) for a in node.args) + ')'
    return _format_statement(node)


def _format_statement(s: Statement) -> str:
    if isinstance(s, ManifoldDecl):
        if not s.attributes:
            return f'manifold {s.name} {{}}'
        body = ',\n'.join(f'    {k}: {format_node(v)}' for k, v in s.attributes)
        return f'manifold {s.name} {{\n{body}\n}}'
    if isinstance(s, Let):
        return f'let {s.name} = {format_node(s.expr)}'
    if isinstance(s, Certify):
        return f'certify {format_node(s.expr)}' + (f' as {s.alias}' if s.alias else '')
    if isinstance(s, CobordismDecl):
        return f'cobordism {s.name} : [{", ".join(s.incoming)}] -> [{", ".join(s.outgoing)}] via {s.body}'
    if isinstance(s, CobordismCompose):
        return f'cobordism {s.name} = ' + ' ; '.join(s.parts)
    if isinstance(s, Assert):
        return f'assert {format_node(s.term)} {s.op} {format_node(s.value)}'
    if isinstance(s, Query):
        return f'query {format_node(s.term)}'
    raise TypeError(f'Cannot format {s!r}')


def format_script(script: Script) -> str:
    return '\n'.join(_format_statement(s) for s in script.statements) + '\n'
