import json
import math

import pytest

from ...models import Approach, BenchResult, ColorSpace, FilterKind, MetricReport
from ...services.bench import CSV_HEADER, build_meta, emit_csv, emit_json, findings, load_json, summarize


def make_row(approach="marginal", psnr=None, sr=None, rsc=None, filter="median", noise="noise1",
             space="rgb", image="page", seed=0, error=None, ms=None) -> BenchResult:
    return BenchResult(image=image, space=space, filter=filter, approach=approach, noise=noise, seed=seed,
                       metrics=MetricReport(psnr=psnr, sr=sr, rsc=rsc), ms=ms, error=error)


def test_empty_results_give_header_only_csv(tmp_path):
    path = emit_csv([], tmp_path / "empty.csv")
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"


def test_csv_formatting(tmp_path):
    rows = [
        make_row(psnr=23.364516, sr=0.000123456789, ms=12.5),
        make_row(psnr=math.inf, sr=0.0, noise="clean"),
        make_row(filter="sobel", rsc=1234567.0, approach="vector"),
        make_row(approach="vm", error="RuntimeError: boom, again"),
    ]
    lines = emit_csv(rows, tmp_path / "rows.csv").read_text().splitlines()

    assert lines[0] == "image,space,filter,approach,noise,seed,psnr_db,sr,rsc,ms,error"
    assert lines[1] == "page,rgb,median,marginal,noise1,0,23.3645,0.000123457,,12.5,"
    assert lines[2] == "page,rgb,median,marginal,clean,0,inf,0,,,"
    assert lines[3] == "page,rgb,sobel,vector,noise1,0,,,1.23457e+06,,"
    assert lines[4] == 'page,rgb,median,vm,noise1,0,,,,,"RuntimeError: boom, again"'


def test_unwritable_path_raises(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    with pytest.raises(OSError):
        emit_csv([], blocker / "out.csv")
    with pytest.raises(OSError):
        emit_json([], blocker / "out.json")


def test_json_round_trip(tmp_path):
    rows = [make_row(psnr=31.4159265, sr=0.0271828, ms=3.0), make_row(psnr=math.inf, sr=0.0, noise="clean")]
    path = emit_json(rows, tmp_path / "rows.json", meta={"rng": "PCG64"})

    raw = json.loads(path.read_text())
    assert raw["meta"] == {"rng": "PCG64"}
    assert raw["results"][1]["metrics"]["psnr"] == "inf"
    assert "Infinity" not in path.read_text()

    meta, loaded = load_json(path)
    assert meta == {"rng": "PCG64"}
    assert loaded[0].metrics.psnr == pytest.approx(31.4159265, rel=1e-6)
    assert loaded[0].space is ColorSpace.RGB
    assert math.isinf(loaded[1].metrics.psnr)
    assert loaded == rows


def test_build_meta_flags_chosen_defaults(small_experiment, config):
    experiment = small_experiment(noises=["clean", "noise1", "noise6"], noise_parameters={"noise6": 0.2})
    meta = build_meta(experiment, config)

    assert meta["rng"] == "PCG64"
    assert meta["psnr_peak"] == 255.0
    assert meta["summation_order"]
    assert meta["noise_parameters"]["noise1"] == {
        "kind": "gaussian", "strength": "weak", "parameter": 10.0, "chosen_default": True}
    assert meta["noise_parameters"]["noise6"]["parameter"] == 0.2
    assert meta["noise_parameters"]["noise6"]["chosen_default"] is False
    assert "clean" not in meta["noise_parameters"]


def test_single_row_wins_its_cell():
    summary = summarize([make_row(approach="vm", psnr=30.0, sr=0.01)])
    assert [c.metric for c in summary.cells] == ["psnr", "sr"]
    assert all(c.winner is Approach.VECTOR_THEN_MARGINAL for c in summary.cells)
    assert summary.win_fractions["psnr"] == {Approach.VECTOR_THEN_MARGINAL: 1.0}


def test_means_direction_and_ties():
    rows = [
        make_row("marginal", psnr=30.0, sr=0.02, seed=0),
        make_row("marginal", psnr=32.0, sr=0.02, seed=1),
        make_row("vector", psnr=31.0, sr=0.01, seed=0),
        make_row("vector", psnr=31.0, sr=0.01, seed=1),
        make_row("mv", psnr=29.0, sr=0.01, seed=0),
        make_row("mv", psnr=29.0, sr=0.01, seed=1),
    ]
    cells = {c.metric: c for c in summarize(rows).cells}

    assert cells["psnr"].means[Approach.MARGINAL] == pytest.approx(31.0)
    # psnr tie between M and V goes to M; sr tie between V and MV goes to V (lower is better)
    assert cells["psnr"].winner is Approach.MARGINAL
    assert cells["sr"].winner is Approach.VECTOR


def test_win_fractions_sum_to_one_and_errors_are_skipped():
    rows = []
    for noise in ("noise1", "noise2", "noise3"):
        rows.append(make_row("marginal", psnr=30.0, sr=0.01, noise=noise))
        rows.append(make_row("vector", psnr=28.0 if noise != "noise3" else 35.0, sr=0.02, noise=noise))
    rows.append(make_row("vm", noise="noise1", error="ValueError: bad"))

    summary = summarize(rows)
    for fractions in summary.win_fractions.values():
        assert sum(fractions.values()) == pytest.approx(1.0)
    assert summary.win_fractions["psnr"][Approach.MARGINAL] == pytest.approx(2 / 3)
    assert Approach.VECTOR_THEN_MARGINAL not in summary.win_fractions["psnr"]


def test_summarize_rejects_empty_results():
    with pytest.raises(ValueError):
        summarize([])


def test_findings_count_noisy_rgb_denoising_cells():
    rows = []
    for space in ("rgb", "hsb"):
        for noise in ("noise1", "noise2"):
            rows.append(make_row("marginal", psnr=30.0, sr=0.01, noise=noise, space=space))
            rows.append(make_row("mv", psnr=29.0 if space == "rgb" else 31.0, sr=0.02, noise=noise, space=space))
        # clean cells: MV wins in RGB, marginal in HSB
        rows.append(make_row("marginal", psnr=40.0 if space == "hsb" else 38.0, sr=0.001, noise="clean", space=space))
        rows.append(make_row("mv", psnr=39.0, sr=0.002 if space == "hsb" else 0.0005, noise="clean", space=space))
        rows.append(make_row("marginal", filter="laplacian", rsc=2.0, space=space))
        rows.append(make_row("vector", filter="laplacian", rsc=3.0, space=space))

    result = findings(summarize(rows))

    assert result.marginal_win_fraction == {"psnr": 1.0, "sr": 1.0}
    assert result.dual_win_fraction == {"psnr": 0.0, "sr": 0.0}
    # noisy psnr cells disagree between spaces, noisy sr cells agree; clean and rsc cells are left out
    assert result.space_agreement == pytest.approx(2 / 4)
    assert result.rsc_vector_ratio == {FilterKind.LAPLACIAN: pytest.approx(1.5)}


def test_findings_without_hsb_or_edges():
    rows = [make_row("vm", psnr=31.0, sr=0.01), make_row("marginal", psnr=30.0, sr=0.02)]
    result = findings(summarize(rows))

    assert result.dual_win_fraction == {"psnr": 1.0, "sr": 1.0}
    assert result.marginal_win_fraction == {"psnr": 0.0, "sr": 0.0}
    assert result.space_agreement is None
    assert result.rsc_vector_ratio == {}
