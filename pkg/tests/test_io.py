import json

import numpy as np
import pytest

from monoplex import io as mio
from monoplex.errors import InputError
from monoplex.graphon import StepKernel
from monoplex.graphs import Coloring, Graph, Multiplex, complete
from monoplex.limitlaw import LimitSpec
from monoplex.graphon import constant


class TestGraphFormat:
    def test_one_based_round_trip(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        d = mio.graph_to_dict(g)
        assert d == {"n": 4, "edges": [[1, 2], [3, 4]]}
        assert mio.graph_from_dict(d) == g

    @pytest.mark.parametrize(
        "obj",
        [{"n": 3}, {"n": 3, "edges": [[0, 1]]}, {"n": 3, "edges": [[1, 4]]}, {"n": 3, "edges": [[1]]},
         {"n": "3", "edges": []}, {"n": 3, "edges": [[1.5, 2]]}, [1, 2]],
    )
    def test_rejects(self, obj):
        with pytest.raises(InputError):
            mio.graph_from_dict(obj)

    def test_multiplex_round_trip(self):
        m = Multiplex((complete(3), Graph.from_edges(3, [(0, 2)])))
        assert mio.multiplex_from_dict(mio.multiplex_to_dict(m)) == m
        with pytest.raises(InputError):
            mio.multiplex_from_dict({"n": 3, "layers": []})

    def test_load_graph_or_multiplex(self, tmp_path):
        p = tmp_path / "g.json"
        p.write_text(json.dumps({"n": 3, "edges": [[1, 2]]}))
        assert mio.load_graph_or_multiplex(p).d == 1

    def test_reports_json_position(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"n": 3,\n "edges": [[1, 2],]}')
        with pytest.raises(InputError, match="line 2"):
            mio.load_json(p)
        with pytest.raises(InputError, match="cannot read"):
            mio.load_json(tmp_path / "missing.json")


class TestColoringFormat:
    def test_round_trip(self):
        col = Coloring(np.array([0, 2, 1]), 3)
        d = mio.coloring_to_dict(col)
        assert d == {"c": 3, "colors": [1, 3, 2]}
        assert mio.coloring_from_dict(d) == col

    def test_bare_list_needs_c(self):
        assert mio.coloring_from_dict([1, 2], 2).c == 2
        with pytest.raises(InputError):
            mio.coloring_from_dict([1, 2])
        with pytest.raises(InputError):
            mio.coloring_from_dict([0, 1], 2)


class TestOtherFormats:
    def test_pattern_by_name_or_file(self, tmp_path):
        assert mio.load_pattern("k3") == complete(3)
        p = tmp_path / "h.json"
        p.write_text(json.dumps(mio.graph_to_dict(complete(4))))
        assert mio.load_pattern(str(p)) == complete(4)
        with pytest.raises(InputError):
            mio.load_pattern("k9x")

    def test_kernel(self, tmp_path):
        p = tmp_path / "w.json"
        p.write_text(json.dumps({"measures": [0.5, 0.5], "values": [[1, 0], [0, 1]]}))
        assert mio.load_kernel(p).k == 2
        with pytest.raises(InputError):
            mio.kernel_from_dict([1])

    def test_limit_spec(self, tmp_path):
        spec = LimitSpec.from_patterns([complete(2)], [constant(0.5)], 2)
        p = tmp_path / "s.json"
        p.write_text(spec.to_json())
        assert mio.load_limit_spec(p).sigma[0, 0] == spec.sigma[0, 0]

    def test_write_atomic(self, tmp_path):
        target = tmp_path / "sub" / "out.txt"
        mio.write_atomic(target, "hello")
        mio.write_atomic(target, "again")
        assert target.read_text() == "again"
        assert [f.name for f in target.parent.iterdir()] == ["out.txt"]

    def test_dumps_is_sorted(self):
        assert mio.dumps({"b": 1, "a": 2}).index('"a"') < mio.dumps({"b": 1, "a": 2}).index('"b"')
