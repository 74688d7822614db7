from fractions import Fraction
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import TestCase

from svlab.csv import DictToCsv, invariant_table


class DictToCsvTestCase(TestCase):

    def test_success(self):
        table = DictToCsv(columns=['field_1', 'field_2', 'field_3'])

        self.assertEqual(
            table.to_csv([{'field_1': 'id1', 'field_2': 1, 'field_3': 'pong_1'},
                          {'field_1': 'id2', 'field_2': 2, 'field_3': 'pong_2'}]),
            'field_1,field_2,field_3\r\nid1,1,pong_1\r\nid2,2,pong_2\r\n'
        )

    def test_success_dict_columns(self):
        table = DictToCsv(columns={'id': 'field_1',
                                   'field_2': lambda x: x * 2,
                                   'msg': ('field_3', lambda x: x * 2)})

        self.assertEqual(
            table.to_csv([{'field_1': 'id1', 'field_2': 1, 'field_3': 'pong_1'}]),
            'id,field_2,msg\r\nid1,2,pong_1pong_1\r\n'
        )

    def test_success_tuple_columns(self):
        table = DictToCsv(columns=['a', ('b', 'field_b'), ('c', str.upper), ('d', 'field_d', len)])

        self.assertEqual(list(table.columns), ['a', 'b', 'c', 'd'])
        self.assertEqual(table.row({'a': 1, 'field_b': 2, 'c': 'x', 'field_d': 'abc'}), [1, 2, 'X', 3])

    def test_success_cells(self):
        table = DictToCsv(columns=['value', 'betti', 'missing'], header=False)

        self.assertEqual(table.to_csv([{'value': Fraction(14, 3), 'betti': [1, 2, 1]}]), '14/3,1 2 1,\r\n')

    def test_success_csv_kwargs(self):
        table = DictToCsv(columns=['a', 'b'], csv_kwargs={'delimiter': ';', 'lineterminator': '\n'})

        self.assertEqual(table.to_csv([{'a': 1, 'b': 2}]), 'a;b\n1;2\n')


class InvariantTableTestCase(TestCase):

    def test_success(self):
        rows = [{'target': 'Torus7', 'quantity': 'chi', 'value': 0},
                {'target': 'Torus7', 'quantity': 'sv', 'value': '[0, 14]'}]

        with TemporaryDirectory() as tmp:
            path = Path(tmp) / 'invariants.csv'
            invariant_table().dump(rows, path)

            self.assertEqual(path.read_bytes().decode('utf-8'),
                             'target,quantity,value\r\nTorus7,chi,0\r\nTorus7,sv,"[0, 14]"\r\n')
