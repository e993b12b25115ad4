import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from simout.errors import (
    DimensionMismatch,
    EmptyFile,
    EmptyRunSet,
    NonNumericToken,
    RaggedRows,
)
from simout.ingest import (
    OutputMatrix,
    RunSet,
    infer_delimiter,
    load_run_set,
    parse_output_text,
    read_output_file,
    write_output_file,
)


def test_minimal_comma_file(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2\n3,4\n")
    m = read_output_file(p)
    np.testing.assert_array_equal(m.values, [[1, 2], [3, 4]])
    assert m.output_names == ("out0", "out1")
    assert m.source == str(p)
    assert infer_delimiter(["1,2", "3,4"]) == ","


def test_single_cell():
    m = parse_output_text("5\n")
    assert m.values.shape == (1, 1) and m.values[0, 0] == 5


def test_ragged_row_reports_row_2():
    with pytest.raises(RaggedRows) as exc:
        parse_output_text("1,2\n3\n")
    assert exc.value.context["row"] == 2


@pytest.mark.parametrize(
    "text, delim",
    [("1;2\n3;4", ";"), ("1\t2\n3\t4", "\t"), ("1   2\n 3 4\n", " "), ("1,2;3\n4,5;6", ",")],
)
def test_delimiter_inference(text, delim):
    assert infer_delimiter(text.splitlines()) == delim


def test_crlf_trailing_blank_lines_and_scientific():
    m = parse_output_text("1e-3,2.5E2\r\n-.5,+7\r\n\r\n\n")
    np.testing.assert_array_equal(m.values, [[1e-3, 250.0], [-0.5, 7.0]])


@pytest.mark.parametrize("token", ["nan", "inf", "-Infinity", "abc", "1,5", "0x10", "1e999"])
def test_non_numeric_tokens_rejected(token):
    with pytest.raises(NonNumericToken) as exc:
        parse_output_text(f"1;2\n3;{token}\n", delimiter=";")
    assert exc.value.context["row"] == 2 and exc.value.context["column"] == 2


def test_header_rejected_unless_skipped():
    with pytest.raises(NonNumericToken):
        parse_output_text("prey,pred\n1,2\n")
    m = parse_output_text("prey,pred\n1,2\n", skip_rows=1)
    np.testing.assert_array_equal(m.values, [[1, 2]])


def test_empty_file(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("\n\n")
    with pytest.raises(EmptyFile):
        read_output_file(p)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_output_file(tmp_path / "nope.csv")


def test_output_matrix_rejects_non_finite():
    with pytest.raises(ValueError):
        OutputMatrix(np.array([[1.0, np.nan]]))


def test_load_run_set_order_and_mismatch(tmp_path):
    paths = []
    for i, rows in enumerate([3, 3, 4]):
        p = tmp_path / f"r{i}.csv"
        write_output_file(p, np.full((rows, 2), float(i)))
        paths.append(p)
    rs = load_run_set(paths[:2], "A")
    assert len(rs.runs) == 2 and rs.tag == "A" and rs.n_iters == 3 and rs.n_outputs == 2
    assert rs.column(1)[1, 0] == 1.0
    rs_rev = load_run_set(paths[1::-1])
    assert rs_rev.runs[0].source == str(paths[1])
    with pytest.raises(DimensionMismatch):
        load_run_set(paths)
    with pytest.raises(EmptyRunSet):
        load_run_set([])


def test_read_errors_carry_path(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\nx,3\n")
    with pytest.raises(NonNumericToken) as exc:
        load_run_set([p])
    assert exc.value.context["path"] == str(p)
    assert str(p) in str(exc.value)


def test_runset_invariants():
    with pytest.raises(DimensionMismatch):
        RunSet((OutputMatrix(np.zeros((2, 1))), OutputMatrix(np.zeros((3, 1)))))


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 5)), elements=finite),
    st.sampled_from([",", ";", "\t", " "]),
)
def test_round_trip_bit_exact(tmp_path_factory, values, delim):
    p = tmp_path_factory.mktemp("rt") / "m.txt"
    write_output_file(p, values, delim)
    back = read_output_file(p, delim).values
    assert back.shape == values.shape
    assert back.tobytes() == values.tobytes()


@given(st.text(alphabet="0123456789.,;\t \n-e", max_size=60))
def test_inference_deterministic(text):
    lines = text.split("\n")
    assert infer_delimiter(lines) == infer_delimiter(list(lines))
