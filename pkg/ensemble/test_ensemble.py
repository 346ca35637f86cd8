"""Tests for experiment configs, realization runs and ensemble aggregation."""
import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from ensemble import (
    EnsembleAccumulator,
    ExperimentConfig,
    build_config,
    load_config,
    parse_level_ranges,
    run_ensemble,
    run_realization,
    summarize,
    theory_table,
)
from ensemble.figures import FIGURE_PRESETS, figure_config, figure_driver
from eigensolve import dense_full_diag
from ensemble.pipeline import diagnose, edge_blocks, geometry
from qubit_lattice import build_band_hamiltonian, sample_disorder
from qubit_lattice.errors import CapacityError, OutputExistsError, QcoreError, RealizationError
from thermo import occupation_matrix, sigma_s


def _config(**overrides) -> ExperimentConfig:
    base = {"kind": "eta_scan", "rows": 3, "cols": 3, "j_values": [0.1, 0.6], "n_realizations": 4, "threads": 1}
    return build_config(base, overrides)


def _table(summary) -> pd.DataFrame:
    (table,) = summary.tables.values()
    return table


# ============================================================================
# CONFIG
# ============================================================================

def test_parse_level_ranges():
    assert parse_level_ranges("5-10,95-100") == [(5, 10), (95, 100)]
    assert parse_level_ranges("5, 100") == [(5, 5), (100, 100)]
    assert parse_level_ranges("") == []


def test_load_config_reads_lists_and_ranges(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# scan\nkind=occupation_profile\nrows=3\ncols=4\nj_values=0.03,0.3\nlevel_ranges=5-10,95-100\n")
    config = build_config(load_config(path))
    assert config.kind == "occupation_profile"
    assert config.n == 12
    assert config.j_values == [0.03, 0.3]
    assert config.level_ranges == [(5, 10), (95, 100)]


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("kind=eta_scan\nbogus=1\n")
    with pytest.raises(ValueError, match="bogus"):
        load_config(path)
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.cfg")


def test_later_layers_win():
    config = build_config({"kind": "eta_scan", "rows": 3, "n_realizations": 5}, {"n_realizations": 7, "rows": None})
    assert config.rows == 3
    assert config.n_realizations == 7


def test_scaled_couplings_and_their_override():
    config = build_config({"kind": "eta_scan", "rows": 3, "cols": 3, "jn_values": [0.9, 3.7]})
    assert config.couplings() == pytest.approx([0.1, 3.7 / 9])
    assert build_config(config.model_dump(), {"j_values": [0.2]}).couplings() == [0.2]


def test_invalid_parameters_are_named():
    with pytest.raises(ValidationError, match="delta"):
        _config(delta=-1.0)
    with pytest.raises(ValidationError, match="j_values"):
        _config(j_values=[-0.1])
    with pytest.raises(ValidationError):
        _config(level_ranges=[(10, 5)])
    with pytest.raises(ValidationError, match="overflows"):
        _config(base_seed=2**64 - 2, n_realizations=4)


@pytest.mark.parametrize("n_qubits, shape", [(9, (3, 3)), (12, (3, 4)), (16, (4, 4)), (24, (4, 6))])
def test_qubit_count_picks_most_square_lattice(n_qubits, shape):
    config = _config(n_qubits=n_qubits)
    assert (config.rows, config.cols) == shape
    assert config.n == n_qubits
    assert build_config(config.model_dump()).n == n_qubits


def test_qubit_count_and_explicit_shape():
    assert (_config(n_qubits=12, rows=2).rows, _config(n_qubits=12, rows=2).cols) == (2, 6)
    later_shape = build_config({"kind": "eta_scan", "n_qubits": 12}, {"rows": 4, "cols": 4})
    assert (later_shape.rows, later_shape.cols, later_shape.n_qubits) == (4, 4, None)
    with pytest.raises(ValidationError, match="n_qubits"):
        ExperimentConfig(kind="eta_scan", rows=3, cols=3, n_qubits=12)
    with pytest.raises(ValidationError):
        _config(n_qubits=7)


# ============================================================================
# REALIZATIONS
# ============================================================================

def test_run_realization_is_pure_in_index():
    config = _config()
    first = run_realization(config, 2)
    second = run_realization(config, 2)
    assert first.seed == config.base_seed + 2
    for J in config.couplings():
        assert np.array_equal(first.records[J].sample.spacings, second.records[J].sample.spacings)
    other = run_realization(config, 3)
    assert not np.array_equal(first.records[0.1].sample.spacings, other.records[0.1].sample.spacings)


def test_realization_errors_carry_index(monkeypatch):
    def broken(config, J, seed):
        raise FloatingPointError("boom")

    monkeypatch.setattr("ensemble.runner.diagnose", broken)
    with pytest.raises(RealizationError) as info:
        run_realization(_config(base_seed=100), 3)
    assert info.value.index == 3
    assert info.value.seed == 103


def test_edge_blocks_pick_nearest_band_edge():
    config = _config(kind="occupation_profile", level_ranges=[(0, 3), (120, 125)], solver="iterative")
    low, high = edge_blocks(config, 126)
    assert (low.side, low.k, low.levels) == ("lowest", 4, [0, 1, 2, 3])
    assert (high.side, high.k, high.levels) == ("highest", 6, list(range(120, 126)))

    default = edge_blocks(_config(kind="occupation_profile", iterative_k=5), 126)
    assert [b.side for b in default] == ["lowest", "highest"]
    assert default[1].levels == [121, 122, 123, 124, 125]


# ============================================================================
# ENSEMBLES
# ============================================================================

def test_results_do_not_depend_on_worker_count():
    serial = _table(run_ensemble(_config(threads=1)))
    pooled = _table(run_ensemble(_config(threads=2)))
    pd.testing.assert_frame_equal(serial, pooled)


def test_single_realization_has_zero_spread():
    summary = run_ensemble(_config(n_realizations=1))
    table = _table(summary)
    assert summary.complete
    assert (table["n_realizations"] == 1).all()
    assert (table["eta_realization_stderr"] == 0.0).all()
    assert table["eta"].tolist() == pytest.approx(table["eta_realization_mean"].tolist())


def test_failed_realizations_are_counted_not_fatal(monkeypatch):
    from ensemble import pipeline

    real_diagnose = pipeline.diagnose

    def flaky(config, J, seed):
        if seed == config.base_seed + 1:
            raise FloatingPointError("injected")
        return real_diagnose(config, J, seed)

    monkeypatch.setattr("ensemble.runner.diagnose", flaky)
    summary = run_ensemble(_config(n_realizations=4))
    assert summary.n_completed == 3
    assert summary.n_failed == 1
    assert not summary.complete
    assert summary.failures[0][0] == 1
    assert "injected" in summary.failures[0][1]


def test_all_failures_raise(monkeypatch):
    def broken(config, J, seed):
        raise FloatingPointError("boom")

    monkeypatch.setattr("ensemble.runner.diagnose", broken)
    with pytest.raises(QcoreError, match="all 2 realizations failed"):
        run_ensemble(_config(n_realizations=2))


def test_accumulator_merge_is_associative():
    config = _config(n_realizations=6)
    results = [run_realization(config, r) for r in range(6)]
    parts = []
    for chunk in (results[:2], results[2:3], results[3:]):
        acc = EnsembleAccumulator.empty(config.couplings())
        for result in chunk:
            acc.add(result)
        parts.append(acc)
    a, b, c = parts
    left = _table(summarize(config, a.merge(b).merge(c)))
    right = _table(summarize(config, a.merge(b.merge(c))))
    reversed_order = _table(summarize(config, c.merge(b).merge(a)))
    pd.testing.assert_frame_equal(left, right)
    pd.testing.assert_frame_equal(left, reversed_order)
    pd.testing.assert_frame_equal(left, _table(run_ensemble(config)))


def test_full_spectrum_kinds_refuse_oversized_bands():
    with pytest.raises(CapacityError, match="dense cap"):
        run_ensemble(_config(dense_cap=100))
    with pytest.raises(CapacityError):
        run_ensemble(_config(kind="temperature_comparison", solver="iterative"))


def test_eta_trend_with_coupling():
    table = _table(run_ensemble(_config(j_values=[0.05, 0.8], n_realizations=200)))
    weak, strong = table["eta"]
    assert weak > 0.7
    assert strong < 0.3
    assert (table["n_spacings"] == 200 * 11).all()


@pytest.mark.slow
def test_eta_limits_at_full_ensemble():
    table = _table(run_ensemble(_config(j_values=[0.05, 0.8], n_realizations=2000, threads=4)))
    weak, strong = table["eta"]
    assert weak >= 0.85
    assert strong <= 0.15


def test_eta_vs_energy_windows():
    config = _config(kind="eta_vs_energy", rows=3, cols=4, j_values=[0.4], n_realizations=2, n_windows=4)
    table = _table(run_ensemble(config))
    assert list(table["window"]) == [0, 1, 2, 3]
    assert np.all(np.diff(table["E_over_B"]) > 0)
    assert (table["E_over_B"] < 0).all()


def test_ps_histogram_table():
    table = _table(run_ensemble(_config(kind="ps_histogram", j_values=[0.4], n_realizations=20)))
    widths = table["s_hi"] - table["s_lo"]
    assert np.sum(table["density"] * widths) == pytest.approx(1.0)
    assert table["eta"].nunique() == 1


def test_spectrum_table():
    table = _table(run_ensemble(_config(kind="spectrum", j_values=[0.3], n_realizations=1)))
    assert len(table) == 126
    assert np.all(np.diff(table["E"]) >= 0)
    assert np.ptp(table["E_over_B"]) == pytest.approx(1.0)
    assert list(table["m"]) == list(range(126))


# ============================================================================
# OCCUPATIONS & SIGMA
# ============================================================================

def test_pooled_occupation_profile():
    config = _config(
        kind="occupation_profile", rows=3, cols=4, j_values=[0.3], level_ranges=[(5, 10), (95, 100)], n_realizations=2
    )
    table = _table(run_ensemble(config))
    assert set(table["m_range"]) == {"5-10", "95-100"}
    assert len(table) == 2 * 2 * 12
    sums = table.groupby(["m_range", "realization"])["n_i"].sum()
    assert np.allclose(sums, 6.0, atol=1e-8)
    fitted = table.groupby("m_range")["n_i_fd"].sum()
    assert np.allclose(fitted, 12.0, atol=1e-6)

    low = table[table["m_range"] == "5-10"]
    assert low["T_fd"].nunique() == 1
    assert low["T_fd"].iloc[0] > 0
    assert (low["dE"] > 0).all()


def test_iterative_edges_match_dense_occupations():
    common = {
        "kind": "occupation_profile",
        "j_values": [0.3],
        "level_ranges": [(0, 3), (120, 125)],
        "n_realizations": 1,
        "per_state": True,
    }
    dense = _table(run_ensemble(_config(solver="dense", **common)))
    iterative = _table(run_ensemble(_config(solver="iterative", **common)))
    assert list(dense["m_range"]) == list(iterative["m_range"])
    assert np.allclose(dense["n_i"], iterative["n_i"], atol=1e-6)
    assert np.allclose(dense["dE"], iterative["dE"], atol=1e-8)
    assert np.allclose(dense["T_fd"], iterative["T_fd"], rtol=1e-2)


def test_sigma_scan_table():
    config = _config(kind="sigma_scan", jn_values=[0.5, 6.0], n_realizations=3)
    table = _table(run_ensemble(config))
    assert list(table["Jn_over_delta"]) == pytest.approx([0.5, 6.0])
    assert (table["n_states"] == 3 * 12).all()
    assert (table["sigma_fd"] <= 0.5).all()
    assert table["sigma_fd"].iloc[0] > table["sigma_fd"].iloc[1]
    assert (table["sigma_fd_stderr"] >= 0).all()

    single = _table(run_ensemble(config.model_copy(update={"n_realizations": 1})))
    assert (single["sigma_fd_stderr"] == 0.0).all()


def test_sigma_vs_energy_bins():
    config = _config(kind="sigma_vs_energy", rows=3, cols=3, j_values=[0.4], n_realizations=2, n_windows=5)
    table = _table(run_ensemble(config))
    assert table["n_states"].sum() == 2 * 125
    assert ((table["E_over_B"] > -0.5) & (table["E_over_B"] < 0.5)).all()


def test_temperature_table_signs():
    config = _config(kind="temperature_comparison", j_values=[0.4], n_realizations=1, state_stride=25)
    table = _table(run_ensemble(config))
    assert list(table["m"]) == [0, 25, 50, 75, 100, 125]
    lowest = table.iloc[0]
    assert lowest["E_over_B"] < 0
    assert lowest["T_th"] > 0
    assert lowest["T_can"] >= 0


def test_theory_table():
    table = theory_table(_config(kind="theory", rows=4, cols=4, j_values=[0.2], dense_cap=100))
    values = dict(zip(table["quantity"], table["value"]))
    assert values["n_b"] == 12870
    assert values["delta_c"] == pytest.approx(1.0 / 16)
    assert pd.isna(values["delta_n_empirical"])

    small = theory_table(_config(kind="theory", j_values=[0.2]))
    assert dict(zip(small["quantity"], small["value"]))["delta_n_empirical"] > 0
    assert pd.isna(dict(zip(small["quantity"], small["value"]))["n_eff"])


def test_theory_table_reports_excited_qubits():
    table = theory_table(_config(kind="theory", n_qubits=16, j_values=[0.2], excitation=1.32, dense_cap=100))
    values = dict(zip(table["quantity"], table["value"]))
    assert values["n"] == 16
    assert values["n_eff"] == pytest.approx(np.sqrt(16 * 1.32))


def test_sigma_s_pairs_each_state_with_the_next():
    config = _config(kind="sigma_vs_energy", j_values=[0.3], state_stride=7)
    record = diagnose(config, 0.3, 11)
    assert list(record.columns["m"]) == list(range(0, 125, 7))

    lattice, basis = geometry(3, 3)
    real = sample_disorder(config.model_params(0.3), lattice, 11)
    spectrum = dense_full_diag(build_band_hamiltonian(lattice, real, basis))
    occupations = occupation_matrix(spectrum.eigenvectors, basis)
    expected = [sigma_s(occupations[m], occupations[m + 1]) for m in record.columns["m"]]
    assert np.allclose(record.columns["sigma_s"], expected, atol=1e-12)


# ============================================================================
# CHAOS AND THERMALIZATION REGIMES
# ============================================================================

def _eta_by_scaled_coupling(rows: int, cols: int, n_realizations: int, threads: int = 1) -> pd.Series:
    config = _config(
        rows=rows, cols=cols, jn_values=[2.0, 3.7, 6.0], n_realizations=n_realizations, threads=threads
    )
    table = _table(run_ensemble(config))
    return pd.Series(table["eta"].to_numpy(), index=table["Jn_over_delta"].round(2))


@pytest.mark.slow
def test_chaos_border_crossing_sharpens_with_size():
    small = _eta_by_scaled_coupling(3, 3, 2000, threads=4)
    large = _eta_by_scaled_coupling(3, 4, 500, threads=4)
    for eta in (small, large):
        assert 0.10 <= eta[3.7] <= 0.35
    assert abs(large[2.0] - large[6.0]) > abs(small[2.0] - small[6.0])


def _spacing_crossover(n_realizations: int) -> pd.DataFrame:
    config = _config(kind="ps_histogram", rows=3, cols=4, j_values=[0.05, 0.4], n_realizations=n_realizations)
    return _table(run_ensemble(config))


def test_spacing_histogram_crossover():
    table = _spacing_crossover(20)
    weak = table[table["J_over_delta"] == 0.05]
    strong = table[table["J_over_delta"] == 0.4]
    assert weak["eta"].iloc[0] > strong["eta"].iloc[0] + 0.5
    # level repulsion empties the first bin
    assert weak["density"].iloc[0] > strong["density"].iloc[0]
    assert weak["p_poisson"].iloc[0] > weak["p_wigner"].iloc[0]


@pytest.mark.slow
def test_spacing_histogram_crossover_at_full_ensemble():
    eta = _spacing_crossover(100).groupby("J_over_delta")["eta"].first()
    assert eta[0.05] >= 0.8
    assert eta[0.4] <= 0.2


def _eta_windows(n_realizations: int) -> pd.DataFrame:
    config = _config(
        kind="eta_vs_energy", rows=3, cols=4, j_values=[0.05, 0.4], n_realizations=n_realizations, n_windows=4
    )
    return _table(run_ensemble(config)).pivot(index="window", columns="J_over_delta", values="eta")


def test_chaos_away_from_band_center():
    eta = _eta_windows(4)
    # window 0 touches the band edge
    assert eta[0.05].min() > eta.loc[1:, 0.4].max()


@pytest.mark.slow
def test_chaos_away_from_band_center_at_full_ensemble():
    eta = _eta_windows(15)
    assert (eta.loc[1:, 0.4] <= 0.2).all()
    assert (eta[0.05] >= 0.7).all()


def test_fd_width_drops_past_thermalization_border():
    config = _config(kind="sigma_scan", rows=3, cols=4, jn_values=[1.0, 8.0], n_realizations=2, state_stride=4)
    sigma = _table(run_ensemble(config))["sigma_fd"]
    assert sigma.iloc[0] > sigma.iloc[1]


@pytest.mark.slow
def test_thermalization_border_crossing():
    jn_values = [1.0, 2.5, 4.0, 8.0]

    def widths(rows: int, cols: int, n_realizations: int) -> np.ndarray:
        config = _config(
            kind="sigma_scan", rows=rows, cols=cols, jn_values=jn_values, n_realizations=n_realizations, threads=4
        )
        return _table(run_ensemble(config))["sigma_fd"].to_numpy()

    small = widths(3, 3, 500)
    large = widths(3, 4, 200)
    assert large[0] - large[-1] > small[0] - small[-1]
    gap = large - small
    assert gap[1] > gap[2]
    assert gap[-1] < 0


def _entropy_by_coupling(table: pd.DataFrame) -> pd.Series:
    return table.groupby("J_over_delta")["S_q"].mean()


def test_occupation_profiles_split_by_regime():
    config = _config(
        kind="occupation_profile", rows=3, cols=4, j_values=[0.03, 0.3], level_ranges=[(95, 100)], n_realizations=20
    )
    table = _table(run_ensemble(config))
    entropy = _entropy_by_coupling(table)
    assert entropy[0.03] <= 1.5
    assert entropy[0.3] >= 5.0

    t_fd = table.loc[table["J_over_delta"] == 0.3, "T_fd"].iloc[0]
    assert 0 < t_fd < np.inf


@pytest.mark.slow
def test_occupation_profile_of_sixteen_qubits():
    config = _config(
        kind="occupation_profile", n_qubits=16, j_values=[0.3], level_ranges=[(95, 100)], n_realizations=100,
        threads=4,
    )
    table = _table(run_ensemble(config))
    assert table["T_fd"].iloc[0] == pytest.approx(0.25, abs=0.05)
    assert _entropy_by_coupling(table)[0.3] == pytest.approx(8.0, abs=1.0)


def _sigma_ratio(n_realizations: int, state_stride: int) -> float:
    config = _config(
        kind="sigma_scan", rows=3, cols=4, j_values=[0.4], n_realizations=n_realizations, state_stride=state_stride
    )
    row = _table(run_ensemble(config)).iloc[0]
    return row["sigma_s_over_sqrt2"] * np.sqrt(2.0) / row["sigma_fd"]


def test_sigma_s_tracks_sqrt2_sigma_fd():
    assert 1.25 <= _sigma_ratio(30, state_stride=2) <= 1.55

    config = _config(kind="sigma_scan", rows=3, cols=4, j_values=[0.05, 0.4], n_realizations=1)
    integrable, chaotic = _table(run_ensemble(config))["sigma_fd"]
    assert chaotic < 0.05
    assert integrable > 2 * chaotic


@pytest.mark.slow
def test_sigma_s_tracks_sqrt2_sigma_fd_at_full_ensemble():
    assert 1.25 <= _sigma_ratio(100, state_stride=1) <= 1.55


def test_fd_and_canonical_temperatures_agree():
    config = _config(kind="temperature_comparison", rows=3, cols=4, j_values=[0.3], n_realizations=1)
    table = _table(run_ensemble(config))

    # single states scatter around T_can; compare medians over narrow E / B bins
    side = table[table["E_over_B"].abs().between(0.1, 0.35)].copy()
    side["bin"] = pd.cut(side["E_over_B"].abs(), np.linspace(0.1, 0.35, 6), include_lowest=True)
    side["upper"] = side["E_over_B"] > 0
    medians = side.groupby(["upper", "bin"], observed=True)[["T_fd", "T_can", "T_th"]].median()
    assert len(medians) > 0
    gap = (medians["T_fd"] - medians["T_can"]).abs() / medians["T_can"].abs()
    assert (gap <= 0.25).all()

    upper = medians.xs(True, level="upper")
    lower = medians.xs(False, level="upper")
    assert (upper < 0).all().all()
    assert (lower > 0).all().all()

    center = table.loc[table["E_over_B"].abs() < 0.02, "T_can"].abs().median()
    shoulder = table.loc[table["E_over_B"].abs().between(0.3, 0.35), "T_can"].abs().median()
    assert center > 3 * shoulder


# ============================================================================
# FIGURES
# ============================================================================

@pytest.mark.parametrize("figure_id", sorted(FIGURE_PRESETS))
def test_presets_are_valid(figure_id):
    config = figure_config(figure_id)
    assert config.n_realizations >= 1


def test_figure_overrides_and_outputs(tmp_path):
    overrides = {"jn_values": [1.0, 8.0], "n_realizations": 3}
    summary, paths = figure_driver(1, overrides, out_dir=str(tmp_path))
    assert summary.complete
    assert [p.name for p in paths] == ["fig1_eta-scan.csv", "fig1_eta-scan.meta"]
    before = paths[0].read_text()

    with pytest.raises(OutputExistsError):
        figure_driver(1, overrides, out_dir=str(tmp_path))
    assert paths[0].read_text() == before

    figure_driver(1, overrides, out_dir=str(tmp_path), force=True)
    assert paths[0].read_text() == before

    with pytest.raises(ValueError):
        figure_config(12)
