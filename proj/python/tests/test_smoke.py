import math
import os
import subprocess

import pytest

import reoptbench as rb

MINIMAL = """NAME          tiny
ROWS
 N  obj
 L  c1
COLUMNS
    x         obj       1.0        c1        1.0
    y         obj       2.0        c1        1.0
RHS
    rhs       c1        10.0
ENDATA
"""

MARKER = """NAME mixed
OBJSENSE
    MAX
ROWS
 N obj
 L cap
COLUMNS
    M1 'MARKER' 'INTORG'
    n obj 3 cap 2
    M2 'MARKER' 'INTEND'
    x obj 1 cap 1
RHS
    rhs cap 7
BOUNDS
 UP bnd n 3
 UP bnd x 2.5
ENDATA
"""


def test_minimal_mps_parses():
    inst = rb.parse_mps(MINIMAL)
    assert inst.name == "tiny"
    assert [v.name for v in inst.variables] == ["x", "y"]
    assert inst.objective() == [1.0, 2.0]
    assert inst.rows[0].coefficients == [(0, 1.0), (1, 1.0)]
    assert inst.rows[0].rhs == 10.0 and math.isinf(inst.rows[0].lhs)


def test_round_trip_is_exact():
    for text in (MINIMAL, MARKER):
        inst = rb.parse_mps(text)
        assert rb.bit_equal(rb.parse_mps(rb.write_mps(inst)), inst)


def test_marker_block_gives_general_integers():
    inst = rb.parse_mps(MARKER)
    assert inst.sense == rb.Sense.maximize
    assert inst.variables[0].kind == rb.VarKind.general_integer
    assert inst.variables[1].kind == rb.VarKind.continuous


def test_parse_error_is_raised():
    with pytest.raises(rb.Error):
        rb.parse_mps("NAME x\nROWS\n N obj\nCOLUMNS\n x obj\n")


def test_oracle_matches_highs():
    highspy = pytest.importorskip("highspy")
    inst = rb.parse_mps(MARKER)
    # The oracle enumerates integers only; make x integral too.
    x = inst.variables[1]
    x.kind = rb.VarKind.general_integer
    x.upper = 2.0
    inst.variables = [inst.variables[0], x]
    res = rb.enumerate_solve(inst, 10.0)
    assert res.status == rb.SolveStatus.optimal

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    inf = highspy.kHighsInf
    for v in inst.variables:
        h.addVar(v.lower, v.upper)
    h.changeColsCost(2, [0, 1], [-v.objective for v in inst.variables])
    h.changeColsIntegrality(2, [0, 1], [highspy.HighsVarType.kInteger] * 2)
    row = inst.rows[0]
    idx = [j for j, _ in row.coefficients]
    val = [a for _, a in row.coefficients]
    h.addRow(-inf, row.rhs, len(idx), idx, val)
    h.run()
    assert -h.getInfo().objective_function_value == pytest.approx(res.outcome.primal_bound, abs=1e-6)
    # max 3n + x, 2n + x <= 7, n <= 3, x <= 2 -> n = 3, x = 1
    assert res.outcome.primal_bound == pytest.approx(10.0)
    assert res.solution == [3.0, 1.0]


def test_highs_reads_written_mps(tmp_path):
    highspy = pytest.importorskip("highspy")
    path = tmp_path / "tiny.mps"
    rb.write_mps_file(path, rb.parse_mps(MINIMAL))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == highspy.HighsStatus.kOk
    lp = h.getLp()
    assert lp.num_col_ == 2 and lp.num_row_ == 1
    assert list(lp.col_cost_) == [1.0, 2.0]
    assert list(lp.row_upper_) == [10.0]


def test_score_examples():
    assert rb.gap(10.0, 10.0) == 0.0
    assert rb.gap(None, 5.0) == 1.0
    assert rb.gap(5.0, -5.0) == 1.0
    out = rb.SolveOutcome(30.0, 60.0, solved_to_optimality=True, primal_bound=4.0,
                          dual_bound=4.0, has_feasible_solution=True)
    assert rb.reltime(out) == pytest.approx(0.5)
    assert rb.instance_score(out).f == pytest.approx(0.5)
    none = rb.SolveOutcome(60.0, 60.0)
    rec = rb.instance_score(none)
    assert (rec.reltime, rec.gap, rec.nofeas, rec.f) == (1.0, 1.0, 1, 3.0)


def test_ranking_and_final_score():
    assert rb.rank_instance([1.0, 1.0, 2.0], [True, True, True]) == [1, 1, 3]
    assert rb.rank_instance([0.1, 2.0], [False, True]) == [4, 1]
    c = rb.final_scores({"a": [0.5] * 50, "b": [1.0] * 50})
    assert c["a"] == 177.5
    assert c["b"] == 355.0


def test_similarity():
    assert rb.similarity([1.0, 0.0], [2.0, 0.0]) == 1.0
    assert rb.similarity([1.0, 0.0], [0.0, 1.0]) == 0.0
    with pytest.raises(rb.Error):
        rb.similarity([0.0, 0.0], [1.0, 0.0])


def test_generation_is_deterministic():
    a = rb.generate_series("synthetic_semicontinuous", 7)
    b = rb.generate_series("synthetic_semicontinuous", 7)
    base, instances, mask, limit = a
    assert len(instances) == 50
    assert mask == ["RHS"]
    assert limit > 0
    assert all(rb.bit_equal(x, y) for x, y in zip(instances, b[1]))
    for inst in instances:
        assert rb.changed_components(base, inst) in ([], ["RHS"])


def test_run_and_score_baseline(tmp_path):
    baseline = os.environ.get("REOPTBENCH_BASELINE")
    if not baseline:
        pytest.skip("baseline solver path not provided")
    manifest = rb.write_series("synthetic_semicontinuous", 3, tmp_path / "series", 10.0)
    record = rb.run_series([baseline], manifest)
    assert not record.rejected and record.protocol_violations == []
    assert record.event_count == 102
    records, valid = rb.score_run(record)
    assert len(records) == 50 and all(valid)
    assert all(r.f < 1.0 for r in records)
    rb.persist_run(record, tmp_path / "run.jsonl")
    again = rb.load_run(tmp_path / "run.jsonl")
    assert [r.status for r in again.results] == [r.status for r in record.results]
