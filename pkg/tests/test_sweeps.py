"""Sweep declaration, grid evaluation, and the delimited serialization formats."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uscmet import InvalidSpec, RangeSpec, SweepSpec
from uscmet import sweeps


def test_linear_range_hits_rational_anchors_exactly():
    values = RangeSpec("g", 0.0, 0.99, 100).values()
    assert len(values) == 100
    assert values[0] == 0.0
    assert values[-1] == 0.99  # endpoint exact, not accumulated
    assert values[50] == 0.0 + 0.99 * (50 / 99)


def test_single_point_range():
    assert RangeSpec("g", 0.7, 1.4, 1).values() == [0.7]


def test_log_range_endpoints():
    values = RangeSpec("delta", 0.01, 100.0, 5, log=True).values()
    assert values[0] == pytest.approx(0.01, rel=1e-15)
    assert values[-1] == pytest.approx(100.0, rel=1e-12)
    ratios = [values[k + 1] / values[k] for k in range(4)]
    assert all(r == pytest.approx(10.0, rel=1e-12) for r in ratios)


def test_range_validation():
    with pytest.raises(InvalidSpec):
        RangeSpec("not an identifier", 0.0, 1.0, 5)
    with pytest.raises(InvalidSpec):
        RangeSpec("g", 0.0, 1.0, 0)
    with pytest.raises(InvalidSpec):
        RangeSpec("g", 0.0, math.inf, 5)
    with pytest.raises(InvalidSpec):
        RangeSpec("g", -1.0, 1.0, 5, log=True)


def test_spec_validation():
    r = RangeSpec("g_over_gc", 0.0, 0.9, 4)
    with pytest.raises(InvalidSpec):
        SweepSpec(model="heisenberg", ranges=(r,))
    with pytest.raises(InvalidSpec):
        SweepSpec(model="dicke", ranges=())
    with pytest.raises(InvalidSpec):
        SweepSpec(model="dicke", ranges=(RangeSpec("volume", 0, 1, 3),))
    with pytest.raises(InvalidSpec):
        SweepSpec(model="dicke", ranges=(r, r))
    with pytest.raises(InvalidSpec):
        SweepSpec(model="dicke", ranges=(r,), fixed={"g_over_gc": 0.5})
    with pytest.raises(InvalidSpec):
        SweepSpec(model="dicke", ranges=(r,), quantities=("volume",))
    with pytest.raises(InvalidSpec):
        SweepSpec(model="dicke", ranges=(r,), convention="sideways")


def test_spec_fills_default_quantities():
    spec = SweepSpec(model="rabi", ranges=(RangeSpec("g_over_gc", 0.1, 0.9, 3),))
    assert spec.quantities == sweeps.DEFAULT_QUANTITIES["rabi"]


def test_evaluate_point_coupling_conflict():
    with pytest.raises(InvalidSpec):
        sweeps.evaluate_point(
            "dicke", {"g": 0.5, "g_over_gc": 0.5}, ("xi_minus",)
        )


def test_evaluate_point_beyond_threshold_flag():
    results, beyond = sweeps.evaluate_point(
        "dicke", {"g_over_gc": 1.5}, ("xi_minus", "omega_minus")
    )
    assert beyond
    assert results == {"xi_minus": None, "omega_minus": None}


def test_run_sweep_row_major_order():
    spec = SweepSpec(
        model="dicke",
        ranges=(
            RangeSpec("g_over_gc", 0.1, 0.3, 2),
            RangeSpec("delta", -1.0, 1.0, 3),
        ),
        quantities=("snr_phase",),
        fixed={"kappa": 1.0, "eta": 1.0, "t": 1.0},
    )
    result = sweeps.run_sweep(spec)
    assert result.columns == ["g_over_gc", "delta", "snr_phase", "beyond_threshold"]
    assert [r["g_over_gc"] for r in result.rows] == [0.1, 0.1, 0.1, 0.3, 0.3, 0.3]
    assert [r["delta"] for r in result.rows] == [-1.0, 0.0, 1.0, -1.0, 0.0, 1.0]


def test_run_sweep_marks_threshold_rows():
    spec = SweepSpec(
        model="dicke",
        ranges=(RangeSpec("g_over_gc", 0.9, 1.1, 3),),
        quantities=("xi_minus",),
    )
    rows = sweeps.run_sweep(spec).rows
    assert [r["beyond_threshold"] for r in rows] == [False, True, True]
    assert rows[0]["xi_minus"] is not None
    assert rows[2]["xi_minus"] is None


def test_sweep_rerun_is_deterministic():
    spec = SweepSpec(
        model="rabi",
        ranges=(RangeSpec("g_over_gc", 0.0, 0.99, 7),),
    )
    a = sweeps.run_sweep(spec)
    b = sweeps.run_sweep(spec)
    assert a.rows == b.rows


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _small_result():
    spec = SweepSpec(
        model="dicke",
        ranges=(RangeSpec("g_over_gc", 0.0, 1.2, 4),),
        quantities=("xi_minus", "ground_qfi"),
    )
    return sweeps.run_sweep(spec)


def test_csv_shape_and_empty_cells():
    result = _small_result()
    text = sweeps.to_csv(result.columns, result.rows, timestamp=False)
    lines = text.splitlines()
    assert lines[0] == "g_over_gc,xi_minus,ground_qfi,beyond_threshold"
    assert len(lines) == 5
    # threshold rows serialize None as the empty cell and the flag as text
    assert lines[-1].endswith(",,true")
    assert lines[1].endswith("false")


def test_csv_timestamp_comment():
    result = _small_result()
    text = sweeps.to_csv(result.columns, result.rows, timestamp=True)
    assert text.startswith("# generated ")
    # the comment is the only difference
    body = "\n".join(text.splitlines()[1:]) + "\n"
    assert body == sweeps.to_csv(result.columns, result.rows, timestamp=False)


def test_csv_roundtrip_is_bit_exact():
    result = _small_result()
    text = sweeps.to_csv(result.columns, result.rows, timestamp=False)
    columns, rows = sweeps.parse_csv(text)
    assert columns == result.columns
    assert sweeps.to_csv(columns, rows, timestamp=False) == text


def test_csv_reruns_byte_identical_without_timestamp():
    result = _small_result()
    a = sweeps.to_csv(result.columns, result.rows, timestamp=False)
    b = sweeps.to_csv(sweeps.run_sweep(result.spec).columns,
                      sweeps.run_sweep(result.spec).rows, timestamp=False)
    assert a == b


@given(
    value=st.floats(allow_nan=False, allow_infinity=False),
)
@settings(max_examples=200, deadline=None)
def test_float_cells_roundtrip_any_double(value):
    """repr-based cells recover every finite double bit for bit."""
    text = sweeps.to_csv(["x"], [{"x": value}], timestamp=False)
    _, rows = sweeps.parse_csv(text)
    got = rows[0]["x"]
    assert got == value or (math.copysign(1, got) == math.copysign(1, value)
                            and got == value == 0.0)


def test_parse_csv_skips_comments_and_handles_strings():
    text = "# generated sometime\npanel,x\na,1.5\nb,\n"
    columns, rows = sweeps.parse_csv(text)
    assert columns == ["panel", "x"]
    assert rows[0] == {"panel": "a", "x": 1.5}
    assert rows[1] == {"panel": "b", "x": None}


def test_json_document_structure():
    result = _small_result()
    text = sweeps.to_json(
        result.columns, result.rows,
        spec=sweeps.spec_as_dict(result.spec), timestamp=False,
    )
    doc = json.loads(text)
    assert set(doc) == {"spec", "columns", "rows"}
    assert doc["columns"] == result.columns
    assert doc["spec"]["model"] == "dicke"
    assert len(doc["rows"]) == 4
    assert doc["rows"][-1]["xi_minus"] is None


def test_json_timestamp_key_only_when_requested():
    result = _small_result()
    with_ts = json.loads(sweeps.to_json(result.columns, result.rows, timestamp=True))
    without = json.loads(sweeps.to_json(result.columns, result.rows, timestamp=False))
    assert "generated" in with_ts
    assert "generated" not in without


def test_write_table_csv_and_json(tmp_path):
    result = _small_result()
    csv_path = tmp_path / "out.csv"
    json_path = tmp_path / "out.json"
    sweeps.write_result(result, str(csv_path), "csv", timestamp=False)
    sweeps.write_result(result, str(json_path), "json", timestamp=False)
    text = csv_path.read_text(encoding="utf-8")
    assert text == sweeps.to_csv(result.columns, result.rows, timestamp=False)
    doc = json.loads(json_path.read_text(encoding="utf-8"))
    assert doc["spec"]["ranges"][0]["name"] == "g_over_gc"


def test_write_table_rejects_unknown_format(tmp_path):
    with pytest.raises(InvalidSpec):
        sweeps.write_table(["x"], [{"x": 1.0}], str(tmp_path / "o.xml"), "xml")
