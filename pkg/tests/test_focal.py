import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simout.errors import InvalidExtractor, IterOutOfRange, SsIdxOutOfRange
from simout.focal import (
    SIXPACK_NAMES,
    ExtractorSpec,
    FMMatrix,
    extract_at_iters,
    extract_sixpack,
    stats_gather,
)
from simout.ingest import OutputMatrix, RunSet


def test_sixpack_hand_case():
    got = extract_sixpack([1, 3, 2], 1)
    assert got[:4] == (3, 1, 1, 0)
    assert got[4] == pytest.approx(2.5, abs=1e-12)
    assert got[5] == pytest.approx(0.7071067812, abs=1e-10)


@pytest.mark.parametrize("series, ss, expected", [([5, 5, 5], 0, (5, 0, 5, 0, 5, 0)), ([2], 0, (2, 0, 2, 0, 2, 0))])
def test_sixpack_degenerate(series, ss, expected):
    assert extract_sixpack(series, ss) == expected


def test_sixpack_ss_idx_out_of_range():
    with pytest.raises(SsIdxOutOfRange):
        extract_sixpack([1, 2, 3], 3)


def test_at_iters():
    assert extract_at_iters([10, 20, 30], [0, 2]) == (10, 30)
    assert extract_at_iters([7], [0]) == (7,)
    with pytest.raises(IterOutOfRange) as exc:
        extract_at_iters([1, 2], [2])
    assert "2" in str(exc.value)


@pytest.mark.parametrize("iters", [[], [2, 1], [1, 1]])
def test_invalid_iteration_lists(iters):
    with pytest.raises(InvalidExtractor):
        ExtractorSpec.at_iterations(iters)


def test_negative_iteration_index():
    with pytest.raises(IterOutOfRange):
        ExtractorSpec.at_iterations([-1])


def test_summary_names():
    assert ExtractorSpec.sixpack(0).summary_names == SIXPACK_NAMES
    assert ExtractorSpec.at_iterations([0, 5]).summary_names == ("it0", "it5")


def test_gather_hand_case():
    rs = RunSet((OutputMatrix([1, 3, 2]), OutputMatrix([2, 2, 2])), "T")
    fm = stats_gather(rs, ExtractorSpec.sixpack(0))
    assert fm.data.shape == (2, 6)
    np.testing.assert_allclose(fm.data[0], (3, 1, 1, 0, 2, 1))
    np.testing.assert_array_equal(fm.data[1], (2, 0, 2, 0, 2, 0))
    assert fm.tag == "T" and fm.fm_names[0] == ("out0", "max")


def test_gather_two_outputs_initial_values():
    rs = RunSet((OutputMatrix(np.array([[4.0, 9.0], [1.0, 1.0]]), ("x", "y")),))
    fm = stats_gather(rs, ExtractorSpec.at_iterations([0]))
    np.testing.assert_array_equal(fm.data, [[4.0, 9.0]])
    assert fm.labels == ["x:it0", "y:it0"]


def test_gather_output_major_order():
    rs = RunSet((OutputMatrix(np.arange(10.0).reshape(5, 2)),))
    fm = stats_gather(rs, ExtractorSpec.sixpack(2))
    assert [n[0] for n in fm.fm_names] == ["out0"] * 6 + ["out1"] * 6
    assert fm.data[0, 0] == 8 and fm.data[0, 6] == 9


def test_gather_permuting_runs_permutes_rows():
    rng = np.random.default_rng(3)
    runs = [OutputMatrix(rng.normal(size=(20, 2))) for _ in range(5)]
    spec = ExtractorSpec.sixpack(5)
    fm = stats_gather(RunSet(tuple(runs)), spec)
    perm = [3, 0, 4, 1, 2]
    fm_p = stats_gather(RunSet(tuple(runs[i] for i in perm)), spec)
    np.testing.assert_array_equal(fm_p.data, fm.data[perm])


def test_gather_errors_annotated():
    rs = RunSet((OutputMatrix([1.0, 2.0]),))
    with pytest.raises(SsIdxOutOfRange):
        stats_gather(rs, ExtractorSpec.sixpack(5))


def test_fm_matrix_serialization():
    fm = FMMatrix(np.array([[1.5, 2.0], [0.1, 3.0]]), (("o", "max"), ("o", "min")), "tag", ("f1", "f2"))
    back = FMMatrix.from_json(fm.to_json())
    assert back.fm_names == fm.fm_names and back.tag == "tag"
    assert back.data.tobytes() == fm.data.tobytes()
    text = fm.to_delimited()
    assert text.splitlines()[0] == "o:max,o:min"


series = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(series, st.data())
def test_sixpack_properties(xs, data):
    ss = data.draw(st.integers(0, len(xs) - 1))
    mx, amx, mn, amn, mean, sd = extract_sixpack(xs, ss)
    x = np.asarray(xs)
    assert x[int(amx)] == mx == x.max() and not np.any(x[: int(amx)] == mx)
    assert x[int(amn)] == mn == x.min() and not np.any(x[: int(amn)] == mn)
    assert mn <= mean <= mx
    tail = x[ss:]
    assert sd >= 0
    assert (sd == 0) == (tail.min() == tail.max())


@given(series)
def test_at_iters_reproduces_series(xs):
    assert extract_at_iters(xs, range(len(xs))) == tuple(float(v) for v in xs)
