import json
import math
from fractions import Fraction
from math import ceil
from pathlib import Path

import pytest

from besc.config_search import is_config
from besc.pipeline import (
    SWEEP_COLUMNS,
    BadEps,
    BadK,
    compute_thresholds,
    density_sweep,
    sweep_csv,
    theorem_pipeline,
)
from besc.triple_system import dilute, generate_steiner, parse

GOLDEN = Path(__file__).parent / "golden"


def n3_closed_form(eps: Fraction) -> int:
    # (n-1)/n >= 1 - eps/(4+5eps)  <=>  n >= (4+5eps)/eps ;  5/(4n) <= eps/2  <=>  n >= 5/(2eps)
    return max(ceil((4 + 5 * eps) / eps), ceil(5 / (2 * eps)))


@pytest.mark.parametrize("eps", [Fraction(1, 20), Fraction(1, 5), Fraction(1, 7), Fraction(3, 100), Fraction(1, 1000)])
def test_thresholds_against_closed_form(eps):
    t = compute_thresholds(eps, 4)
    assert t.n3 == n3_closed_form(eps)
    assert t.n1 == ceil(12 / (Fraction(4, 5) + eps))
    assert t.n0_practical == max(t.n1, t.n3)
    assert t.n2 is None


def test_thresholds_examples():
    t = compute_thresholds(Fraction(1, 20), 4)
    assert (t.n1, t.n3, t.component_bound_exponent) == (15, 85, 160)
    assert t.beta_log3 == pytest.approx(math.log(1 / 20) / math.log(3) - 176, abs=1e-9)
    t = compute_thresholds(Fraction(1, 5), 3)
    assert t.delta == 1 and t.n1 == 12
    with pytest.raises(BadEps):
        compute_thresholds(Fraction(1, 4), 4)
    with pytest.raises(BadEps):
        compute_thresholds(0, 4)
    with pytest.raises(BadK):
        compute_thresholds(Fraction(1, 20), 2)


def test_pipeline_fano(fano):
    rep = theorem_pipeline(fano, 4, 10)
    assert rep.branch == "large_component"
    assert rep.ok
    assert rep.witness is not None and rep.witness["k"] == 4 and rep.witness["s"] == 7
    assert is_config(fano, rep.witness["edge_indices"], 7, 4)
    assert len(rep.witness["span_vertices"]) <= 7


def test_pipeline_single(single):
    rep = theorem_pipeline(single, 3)
    assert rep.branch == "no_seeds"
    assert rep.witness is None and rep.search["status"] == "no_seeds"
    assert rep.ok


def test_pipeline_diluted_sts13():
    H = dilute(generate_steiner(13), Fraction(6, 7), 0)
    assert H.density >= Fraction(6, 7)
    rep = theorem_pipeline(H, 4)
    assert rep.ok
    assert rep.bowtie["avg_degree_float"] > 0
    assert rep.witness is not None
    assert is_config(H, rep.witness["edge_indices"], 7, 4)


def test_pipeline_dense_branch():
    # component bound above |B| forces the dense-component route
    H = generate_steiner(13)
    rep = theorem_pipeline(H, 4, practical_component_bound=10**6)
    assert rep.branch == "dense_components"
    assert rep.components["dense_count"] == 1
    assert rep.witness is not None and rep.ok
    names = {c.name for c in rep.checks}
    assert "sum_I |C_i| >= eps|B|/2" in names


def test_pipeline_rejects_small_k(fano):
    with pytest.raises(BadK):
        theorem_pipeline(fano, 2)


def test_report_json_round_trip(fano):
    rep = theorem_pipeline(fano, 4, 10).to_json()
    assert rep["schema"] == 1
    assert json.loads(json.dumps(rep)) == rep
    assert rep["timings"] is None
    assert theorem_pipeline(fano, 4, 10, timings=True).to_json()["timings"]["search_ms"] >= 0


def test_report_golden(fano):
    expected = json.loads((GOLDEN / "fano_k4_report.json").read_text())
    H = parse((GOLDEN / "fano.l3g").read_text())
    assert H == fano
    assert theorem_pipeline(H, 4, 10).to_json() == expected


def test_sweep_golden():
    rows = density_sweep(13, 4, [1, Fraction(9, 10), Fraction(1, 2)], 2, 3)
    assert sweep_csv(rows) == (GOLDEN / "sweep_n13_k4.csv").read_text()


def test_sweep_examples():
    rows = density_sweep(13, 4, [1], 1, 0)
    assert len(rows) == 1 and rows[0]["witness_found"] is True
    rows = density_sweep(13, 6, [Fraction(1, 10)], 3, 0)
    assert len(rows) == 3
    assert tuple(rows[0]) == SWEEP_COLUMNS
    a = sweep_csv(density_sweep(13, 5, [1, Fraction(4, 5)], 2, 9))
    b = sweep_csv(density_sweep(13, 5, [1, Fraction(4, 5)], 2, 9))
    assert a == b


def test_sweep_parallel_matches_serial():
    grid = [1, Fraction(17, 20)]
    serial = sweep_csv(density_sweep(15, 4, grid, 2, 1))
    parallel = sweep_csv(density_sweep(15, 4, grid, 2, 1, workers=2))
    assert serial == parallel


def test_sweep_timings_column():
    rows = density_sweep(7, 4, [1], 1, 0, timings=True)
    assert rows[0]["elapsed_ms"] != ""
