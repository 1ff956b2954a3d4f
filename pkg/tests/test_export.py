import csv
import io

import pytest

from pavsim.config import apply_parameter_map, parse_stimulus_key, resolve_parameters
from pavsim.dsl import ParseError, parse_rw_file
from pavsim.engine import run_experiment
from pavsim.export import (
    CSV_HEADER,
    PlotOptions,
    assemble_phase_series,
    export_csv,
    render_phase_plots,
)
from pavsim.models import model_defaults

approx = pytest.approx


def simulate(text="G|2A+/B-|3AB+", model="Rescorla Wagner", params=None):
    return run_experiment(parse_rw_file(text), params or model_defaults(model), model)


class TestCsvExport:
    def test_header_and_shape(self):
        table = export_csv(simulate())
        assert table.header == CSV_HEADER
        # Phase 1: A x2, B x1, plus trial types A+ x2, B- x1.
        # Phase 2: A x3, B x3, compound AB x3, trial type AB+ x3.
        assert len(table.rows) == 6 + 12

    def test_untracked_quantities_are_empty_cells(self):
        table = export_csv(simulate())
        for row in table.rows:
            assert row[5] == "" and row[6] == ""  # V_E, V_I not tracked
            if row[2] in ("A+", "B-", "AB", "AB+"):
                assert row[7] == ""  # no alpha for aggregate series
            else:
                assert row[7] != ""

    def test_values_round_trip_through_text(self):
        result = simulate()
        table = export_csv(result)
        parsed = list(csv.reader(io.StringIO(table.to_csv())))
        assert tuple(parsed[0]) == CSV_HEADER
        by_key = {(r[0], r[1], r[2], r[3]): r for r in parsed[1:]}
        phase2 = result.groups[0].phases[1]
        for idx, snap in enumerate(phase2.cs_series["A"], start=1):
            assert float(by_key[("G", "2", "A", str(idx))][4]) == snap[0]

    def test_row_order_is_deterministic(self):
        a = export_csv(simulate()).to_csv()
        b = export_csv(simulate()).to_csv()
        assert a == b

    def test_unix_line_endings(self):
        assert "\r" not in export_csv(simulate()).to_csv()


class TestSeriesAssembly:
    def test_default_strength_series(self):
        series = assemble_phase_series(simulate(), 1, PlotOptions())
        labels = {s.label for s in series}
        assert labels == {"A", "B", "AB"}
        kinds = {s.label: s.kind for s in series}
        assert kinds["AB"] == "compound"

    def test_alpha_series(self):
        series = assemble_phase_series(simulate(), 0, PlotOptions(plot_alpha=True))
        assert {s.quantity for s in series} == {"alpha"}
        assert {s.label for s in series} == {"A", "B"}

    def test_macknhall_series(self):
        result = simulate(model="Le Pelley's Hybrid")
        series = assemble_phase_series(result, 0, PlotOptions(plot_macknhall=True))
        assert {s.quantity for s in series} == {"alpha_mack", "alpha_hall"}

    def test_trial_type_series_opt_in(self):
        on = assemble_phase_series(simulate(), 0, PlotOptions(plot_trial_type_data=True))
        off = assemble_phase_series(simulate(), 0, PlotOptions())
        assert {s.label for s in on} - {s.label for s in off} == {"A+", "B-"}

    def test_group_prefix_when_multiple_groups(self):
        result = simulate("G1|2A+\nG2|2A+")
        labels = {s.label for s in assemble_phase_series(result, 0, PlotOptions())}
        assert labels == {"G1: A", "G2: A"}

    def test_group_and_stimulus_filters(self):
        result = simulate("G1|2A+/2B+\nG2|2A+")
        series = assemble_phase_series(
            result, 0, PlotOptions(groups=("G1",), stimuli=("B",)))
        assert [s.label for s in series] == ["G1: B"]


class TestImageRendering:
    def test_one_file_per_phase(self, tmp_path):
        base = str(tmp_path / "out")
        paths = render_phase_plots(simulate(), base)
        assert paths == [f"{base}_1.png", f"{base}_2.png"]
        for p in paths:
            assert (tmp_path / p.split("/")[-1]).stat().st_size > 0

    def test_separate_legend_file(self, tmp_path):
        base = str(tmp_path / "out")
        paths = render_phase_plots(
            simulate(), base, PlotOptions(separate_legend=True))
        assert paths[-1] == f"{base}_legend.png"

    def test_invalid_dimensions_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            render_phase_plots(simulate(), str(tmp_path / "x"), PlotOptions(width=0))


class TestParameterResolution:
    def test_global_keys(self):
        params, warnings = resolve_parameters(
            "Rescorla Wagner", {"lambda": "0.7", "betan": "0.2"})
        assert params.lamda == 0.7
        assert params.beta_neg == 0.2
        assert warnings == []

    def test_later_maps_win(self):
        params, _ = resolve_parameters(
            "Rescorla Wagner", {"alpha": "0.3"}, {"alpha": 0.6})
        assert params.alpha == 0.6

    def test_per_stimulus_keys(self):
        params, warnings = resolve_parameters(
            "Le Pelley's Hybrid",
            {"alpha_D": "0.1", "alpha_mack_D": "0.3", "alpha_hall_D": "0.7",
             "salience_B'": "0.4"})
        assert warnings == []
        assert params.alpha_overrides == {"D": 0.1}
        assert params.alpha_mack_overrides == {"D": 0.3}
        assert params.alpha_hall_overrides == {"D": 0.7}
        assert params.salience_overrides == {"B'": 0.4}

    def test_configural_cue_key(self):
        params, warnings = resolve_parameters(
            "Rescorla Wagner", {"alpha_q(AB)": "0.05"})
        assert warnings == []
        assert params.alpha_overrides == {"q(AB)": 0.05}

    def test_ignored_keys_warn(self):
        params, warnings = resolve_parameters("Rescorla Wagner", {"rho": "1"})
        assert any("rho" in w for w in warnings)

    def test_unknown_key_warns(self):
        _, warnings = resolve_parameters("Rescorla Wagner", {"frobnicate": "1"})
        assert any("frobnicate" in w for w in warnings)

    def test_non_numeric_value_warns(self):
        params, warnings = resolve_parameters("Rescorla Wagner", {"alpha": "abc"})
        assert params.alpha == 0.15
        assert any("alpha" in w for w in warnings)

    def test_num_trials_is_integer(self):
        params, _ = resolve_parameters("Rescorla Wagner", {"num_trials": "250"})
        assert params.num_random_runs == 250

    def test_configural_cues_flag(self):
        params, _ = resolve_parameters("Rescorla Wagner", {"configural_cues": "true"})
        assert params.configural_cues is True

    def test_parse_stimulus_key_variants(self):
        assert str(parse_stimulus_key("A'^2")) == "A'^2"
        assert str(parse_stimulus_key("q(AB')")) == "q(AB')"
        with pytest.raises(ParseError):
            parse_stimulus_key("q(A)")
        with pytest.raises(ParseError):
            parse_stimulus_key("ab")
