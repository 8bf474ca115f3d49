import numpy as np
import pytest

from ttproj.bench import PairRecord
from ttproj.exceptions import T3DFormatError
from ttproj.io import CSV_COLUMNS, emit_csv, load_tensor, store_tensor


def test_tensor_round_trip_exact(tmp_path, rng):
    T = rng.standard_normal((3, 4, 2)) * 10.0 ** rng.integers(-300, 300, size=(3, 4, 2))
    path = tmp_path / "t.t3d"
    store_tensor(T, path)
    assert np.array_equal(load_tensor(path), T)


def test_tensor_file_layout(tmp_path):
    T = np.arange(1, 9, dtype=float).reshape((2, 2, 2), order="F")
    path = tmp_path / "t.t3d"
    store_tensor(T, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t3d 2 2 2"
    assert " ".join(lines[1:]).split() == [repr(float(v)) for v in range(1, 9)]


def test_load_accepts_free_whitespace(tmp_path):
    path = tmp_path / "t.t3d"
    path.write_text("t3d 1 2 2\n# comment\n1 2\n\n 3\t4 \n")
    np.testing.assert_array_equal(load_tensor(path)[0], [[1, 3], [2, 4]])


@pytest.mark.parametrize("body,line", [
    ("t3d 2 2\n1 2 3 4\n", 1),
    ("tensor 1 1 2\n1 2\n", 1),
    ("t3d 1 1 2\n1\n", 2),
    ("t3d 1 1 2\n1\nfoo\n", 3),
    ("t3d 1 1 2\n1 2\n3\n", 3),
    ("t3d 0 1 2\n", 1),
])
def test_load_rejects_malformed(tmp_path, body, line):
    path = tmp_path / "bad.t3d"
    path.write_text(body)
    with pytest.raises(T3DFormatError) as info:
        load_tensor(path)
    assert info.value.line == line
    assert f":{line}:" in str(info.value)


def test_empty_csv_is_header_only(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv([], path)
    assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_csv_row_format(tmp_path):
    rec = PairRecord(3, 0.7, float("nan"), 1.0, float("nan"), 2.0, 0.5, 0.25, 0.01, 4, float("nan"))
    path = tmp_path / "out.csv"
    emit_csv([rec], path)
    row = path.read_text().splitlines()[1]
    assert row == "3,0.7,,1.0,,2.0,0.5,0.25,0.01,4,"
