import pytest

from hrng.errors import InvalidArity
from hrng.gas import (
    DEFAULT_SCHEDULE,
    GasReport,
    GasSchedule,
    OpCounts,
    VerifierMode,
    closed_form,
    compare_report,
    expected_counts,
    price,
)

NON, OPT = VerifierMode.NON_OPTIMIZED, VerifierMode.OPTIMIZED


def test_schedule_defaults():
    s = DEFAULT_SCHEDULE
    assert (s.addmod_cost, s.mulmod_cost, s.ecadd_cost, s.ecmul_cost) == (8, 8, 150, 6000)


def test_price_examples():
    assert price(OpCounts(ecadd=1, ecmul=2)) == 12_150
    assert price(OpCounts()) == 0
    assert price(OpCounts(addmod=2)) == 16
    assert price(OpCounts(mulmod=1), GasSchedule(mulmod_cost=5)) == 5


def test_closed_form_examples():
    assert closed_form(NON, 1) == 12_150
    assert closed_form(OPT, 12) == 13_976
    assert closed_form(NON, 12) == 145_888
    assert closed_form(OPT, 12) / closed_form(NON, 12) == pytest.approx(0.0958, abs=5e-5)
    with pytest.raises(InvalidArity):
        closed_form(OPT, 0)


@pytest.mark.parametrize("mode", [NON, OPT])
def test_closed_form_equals_priced_counts(mode):
    for ell in range(1, 65):
        assert price(expected_counts(mode, ell)) == closed_form(mode, ell)


def test_comparison_series():
    rows = compare_report(range(1, 41))
    nonopt = [r.gas_nonopt for r in rows]
    opt = [r.gas_opt for r in rows]
    assert {b - a for a, b in zip(nonopt, nonopt[1:])} == {12_158}
    assert {b - a for a, b in zip(opt, opt[1:])} == {166}
    assert rows[0].gas_opt == rows[0].gas_nonopt
    assert all(r.gas_opt < r.gas_nonopt for r in rows[1:])
    # continuous crossover: 12158 l - 8 = 166 l + 11984  ->  l = 1
    assert (11984 + 8) / (12158 - 166) == 1.0
    with pytest.raises(ValueError):
        compare_report([])


def test_report_json_roundtrip():
    rep = GasReport.from_counts(OPT, 3, OpCounts(3, 2, 4))
    assert rep.matches_closed_form
    assert GasReport.from_json(rep.to_json()) == rep


def test_mode_parse():
    assert VerifierMode.parse("optimized") is OPT
    assert VerifierMode.parse("Non-Optimized") is NON
    with pytest.raises(ValueError):
        VerifierMode.parse("fast")


def test_custom_schedule_round_trip(tmp_path):
    from hrng import SystemConfig, run_round, verify_transcript
    from hrng.config import parse_config

    loaded = parse_config("system:\n  gas_schedule: {ecmul_cost: 40000, ecadd_cost: 500}\n")
    cfg = loaded.system
    assert cfg.gas_schedule.ecmul_cost == 40000 and cfg.gas_schedule.addmod_cost == 8
    tr = run_round(cfg)
    assert tr.gas_report.total_gas == 3 * 500 + 2 * 40000 + 4 * 8
    assert tr.gas_report.matches_closed_form
    assert verify_transcript(tr)
    assert SystemConfig.from_dict(cfg.to_dict()) == cfg
