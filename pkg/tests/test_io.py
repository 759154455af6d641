import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from framecal import io, sampling
from framecal.errors import DuplicateLabel, MalformedDocument, NonPositiveWeight
from framecal.frame import make_frame

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(st.tuples(finite, finite, st.floats(1e-300, 1e300)), min_size=1, max_size=8))
def test_frame_round_trip_is_bit_exact(entries):
    vectors = np.array([[complex(re, im), complex(im, re)] for re, im, _ in entries])
    f = make_frame(vectors, [w for _, _, w in entries])
    back = io.frame_from_dict(json.loads(io.dumps(io.frame_to_dict(f))))
    assert back.space == f.space
    assert back.vectors.tobytes() == f.vectors.tobytes()


def test_operator_round_trip(tmp_path):
    a = np.array([[1 / 3, 2j], [np.pi, -1e-300 + 1e300j]])
    io.save_operator(a, tmp_path / "op.json")
    assert io.load_operator(tmp_path / "op.json").tobytes() == a.astype(complex).tobytes()


def test_file_round_trip(tmp_path):
    f, _ = sampling.partition_dual_pair()
    io.save_frame(f, tmp_path / "f.json")
    back = io.load_frame(tmp_path / "f.json")
    assert back.space.labels == ("B0", "B1", "B2")
    np.testing.assert_array_equal(back.vectors, f.vectors)


def test_dump_is_deterministic():
    f, _ = sampling.partition_dual_pair()
    assert io.dumps(io.frame_to_dict(f)) == io.dumps(io.frame_to_dict(f))


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"dim": 2},
        {"dim": 0, "atoms": []},
        {"dim": 2, "atoms": []},
        {"dim": True, "atoms": [{"label": "a", "weight": 1, "vector": [[1, 0]]}]},
        {"dim": 2, "atoms": [{"label": "a", "weight": 1, "vector": [[1, 0]]}]},
        {"dim": 1, "atoms": [{"label": "a", "weight": "1", "vector": [[1, 0]]}]},
        {"dim": 1, "atoms": [{"label": "a", "weight": 1, "vector": [[1]]}]},
        {"dim": 1, "atoms": [{"label": "a", "weight": 1, "vector": [["1", 0]]}]},
        {"dim": 1, "atoms": [{"label": "a", "weight": 1, "vector": [[float("nan"), 0]]}]},
        {"dim": 1, "atoms": [{"label": "a", "vector": [[1, 0]]}]},
    ],
)
def test_malformed_frames(doc):
    with pytest.raises(MalformedDocument):
        io.frame_from_dict(doc)


def test_semantic_errors_surface():
    atom = {"label": "a", "weight": 1, "vector": [[1, 0]]}
    with pytest.raises(DuplicateLabel):
        io.frame_from_dict({"dim": 1, "atoms": [atom, atom]})
    with pytest.raises(NonPositiveWeight):
        io.frame_from_dict({"dim": 1, "atoms": [dict(atom, weight=0)]})


@pytest.mark.parametrize(
    "doc",
    [{}, {"matrix": []}, {"matrix": [[[1, 0]], [[1, 0]]]}, {"dim": 3, "matrix": [[[1, 0]]]}],
)
def test_malformed_operators(doc):
    with pytest.raises(MalformedDocument):
        io.operator_from_dict(doc)


def test_truncated_and_missing_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "atoms": [')
    with pytest.raises(MalformedDocument):
        io.load_frame(bad)
    with pytest.raises(MalformedDocument):
        io.load_frame(tmp_path / "absent.json")
