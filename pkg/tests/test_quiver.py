import json

import pytest

from seminil.quiver import DimVector, Quiver, QuiverError, arrow_form, load_quiver, vertex_form


def test_load_two_loops():
    q = load_quiver(json.dumps({
        "vertices": ["0"],
        "arrows": [{"id": "a", "src": "0", "tgt": "0"}, {"id": "b", "src": "0", "tgt": "0"}],
    }))
    assert len(q.doubled) == 4
    assert q.loop_vertices == ("0",)


def test_load_doubles_with_involution():
    q = load_quiver('{"vertices": ["0", "1"], "arrows": [{"id": "a", "src": "0", "tgt": "1"}]}')
    bar = q.arrow("a_bar")
    assert (bar.src, bar.tgt, bar.sign) == ("1", "0", -1)
    assert q.arrow(bar.bar).aid == "a"
    for d in q.doubled:
        assert q.arrow(d.bar).sign == -d.sign
        assert (q.arrow(d.bar).src, q.arrow(d.bar).tgt) == (d.tgt, d.src)


def test_load_rejects_unknown_endpoint():
    with pytest.raises(QuiverError):
        load_quiver('{"vertices": ["0"], "arrows": [{"id": "a", "src": "0", "tgt": "2"}]}')


def test_load_rejects_duplicates_and_garbage():
    with pytest.raises(QuiverError):
        load_quiver('{"vertices": ["0", "0"], "arrows": []}')
    with pytest.raises(QuiverError):
        load_quiver('{"vertices": ["0"], "arrows": [{"id": "a", "src": "0", "tgt": "0"}, {"id": "a", "src": "0", "tgt": "0"}]}')
    with pytest.raises(QuiverError):
        load_quiver("not json at all")
    with pytest.raises(QuiverError):
        load_quiver('{"vertices": ["0"]}')


def test_arrow_form_values(jordan, g2, a2):
    three = DimVector.of(g2, [3])
    assert arrow_form(three, three) == 18
    ones = DimVector.of(a2, [1, 1])
    assert arrow_form(ones, ones) == 1
    zero = DimVector.zero(a2)
    assert arrow_form(zero, zero) == 0
    j3 = DimVector.of(jordan, [3])
    assert arrow_form(j3, j3) == 9


def test_arrow_form_not_symmetric(a2):
    a = DimVector.of(a2, [2, 1])
    b = DimVector.of(a2, [1, 3])
    assert arrow_form(a, b) == 2 * 3
    assert arrow_form(b, a) == 1 * 1


def test_vertex_form(a2):
    assert vertex_form(DimVector.of(a2, [1, 2]), DimVector.of(a2, [1, 2])) == 5
    assert vertex_form(DimVector.of(a2, [1, 0]), DimVector.of(a2, [0, 1])) == 0


def test_forms_reject_mismatched_quivers(jordan, g2):
    with pytest.raises(ValueError):
        arrow_form(DimVector.of(jordan, [1]), DimVector.of(g2, [1]))


def test_dim_vector_arithmetic(a2):
    a = DimVector.of(a2, [2, 1])
    b = DimVector.unit(a2, "1")
    assert (a + b).counts == (2, 2)
    assert (a - b).counts == (2, 0)
    assert (2 * a).counts == (4, 2)
    with pytest.raises(ValueError):
        b - a
    with pytest.raises(ValueError):
        DimVector.of(a2, [-1, 0])
    assert a.concentrated() is None
    assert DimVector.of(a2, [0, 2]).concentrated() == ("1", 2)
