import json

import pytest

from factdom import __version__
from factdom.cli import main
from factdom.search import (
    CertificateGap,
    dominance_chain,
    explore_gaps,
    global_min_r,
    n_min,
    verify_twin_theorem,
)
from factdom.serialize import (
    chain_report_from_json,
    chain_report_to_json,
    gap_record_from_json,
    gap_record_to_json,
    search_report_from_json,
    search_report_to_json,
    twin_report_from_json,
    twin_report_to_json,
)
from factdom.valuation import primes_upto


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


# ---------------------------------------------------------------------------
# serialization round-trips
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def ctx():
    return primes_upto(2000)


def test_search_report_round_trip(ctx):
    for report in (n_min(7, ctx), global_min_r(11, ctx)):
        assert search_report_from_json(search_report_to_json(report)) == report


def test_gap_record_round_trip(ctx):
    for record in explore_gaps(40, ctx):
        assert gap_record_from_json(gap_record_to_json(record)) == record


def test_twin_report_round_trip(ctx):
    report = verify_twin_theorem(5, ctx)
    assert twin_report_from_json(twin_report_to_json(report)) == report


def test_chain_report_round_trip(ctx):
    report = dominance_chain(50, 3, ctx)
    assert chain_report_from_json(chain_report_to_json(report)) == report


def test_cli_json_payload_round_trips_to_library_report(capsys, ctx):
    code, payload, _ = run_json(capsys, "nmin", "--p", "5", "--sieve-limit", "2000")
    assert code == 0
    assert payload["tool_version"] == __version__
    assert payload["subcommand"] == "nmin"
    assert search_report_from_json(payload["result"]) == n_min(5, ctx)


# ---------------------------------------------------------------------------
# envelopes and formats
# ---------------------------------------------------------------------------


def test_valuation_envelope(capsys):
    code, payload, _ = run_json(
        capsys, "valuation", "--n", "100", "--p", "2", "--sieve-limit", "1000"
    )
    assert code == 0
    assert payload["params"] == {"n": 100, "p": 2}
    assert payload["result"]["nu"] == 97
    assert payload["result"]["floor_sum"] == payload["result"]["digit_form"]


def test_valuation_zero_when_n_below_p(capsys):
    code, payload, _ = run_json(
        capsys, "valuation", "--n", "4", "--p", "5", "--sieve-limit", "100"
    )
    assert code == 0
    assert payload["result"]["nu"] == 0


def test_factorize_small(capsys):
    code, payload, _ = run_json(capsys, "factorize", "--n", "10", "--sieve-limit", "1000")
    assert code == 0
    assert payload["result"]["factors"] == [[2, 8], [3, 4], [5, 2], [7, 1]]
    assert payload["result"]["reconstruction_checked"] is True
    code, payload, _ = run_json(capsys, "factorize", "--n", "2", "--sieve-limit", "100")
    assert code == 0
    assert payload["result"]["factors"] == [[2, 1]]


def test_n0_relaxed_mode(capsys):
    code, payload, _ = run_json(
        capsys, "n0", "--p", "2", "--mode", "paper-relaxation", "--sieve-limit", "100"
    )
    assert code == 0
    assert payload["result"]["threshold"] == 21
    assert payload["certificate"]["mode"] == "paper-relaxation"


def test_rmin_exact_value(capsys):
    code, payload, _ = run_json(capsys, "rmin", "--p", "11", "--sieve-limit", "1000")
    assert code == 0
    assert payload["result"]["value"] == {"argmin": 117, "min": {"num": "25", "den": "27"}}


def test_csv_and_table_render(capsys):
    code, out, _ = run_cli(
        capsys, "--format", "csv", "valuation", "--n", "5", "--p", "3", "--sieve-limit", "100"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    assert "result.nu,1" in lines
    code, out, _ = run_cli(
        capsys, "--format", "table", "valuation", "--n", "5", "--p", "3", "--sieve-limit", "100"
    )
    assert code == 0
    assert any(line.split() == ["result.nu", "1"] for line in out.splitlines())


def test_upto_produces_report_list(capsys):
    code, payload, _ = run_json(
        capsys, "verify-twin", "--upto", "20", "--sieve-limit", "3000"
    )
    assert code == 0
    assert [entry["p"] for entry in payload["result"]] == [3, 5, 11, 17]
    assert all(entry["verdict"] for entry in payload["result"])


def test_nmin_upto_lists_all_primes(capsys):
    code, payload, _ = run_json(capsys, "nmin", "--upto", "13", "--sieve-limit", "1000")
    assert code == 0
    reports = payload["result"]
    assert [r["p"] for r in reports] == [2, 3, 5, 7, 11, 13]
    assert [r["value"] for r in reports] == [4, 6, 15, 14, 66, 52]


def test_explore_gaps_subcommand(capsys):
    code, payload, _ = run_json(
        capsys, "explore-gaps", "--upto", "40", "--sieve-limit", "1000"
    )
    assert code == 0
    by_gap = {record["gap"]: record for record in payload["result"]}
    twin = by_gap[2]
    assert twin["fitted_poly"] == [
        {"num": "0", "den": "1"},
        {"num": "1", "den": "2"},
        {"num": "1", "den": "2"},
    ]
    assert twin["samples"] == [[3, 6], [5, 15], [11, 66], [17, 153], [29, 435]]


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_exit_zero_on_success(capsys):
    code, _, _ = run_cli(capsys, "nmin", "--p", "3", "--sieve-limit", "1000")
    assert code == 0


def test_exit_one_when_chain_fails(capsys):
    code, payload, _ = run_json(capsys, "chain", "--n", "3", "--m", "2", "--sieve-limit", "100")
    assert code == 1
    assert payload["result"]["holds"] is False


def test_exit_two_on_usage_errors(capsys):
    assert run_cli(capsys, "valuation", "--n", "4", "--p", "6", "--sieve-limit", "100")[0] == 2
    assert run_cli(capsys, "rmin", "--p", "7", "--sieve-limit", "100")[0] == 2
    assert run_cli(capsys, "nmin", "--sieve-limit", "100")[0] == 2  # neither --p nor --upto
    assert run_cli(capsys, "no-such-command")[0] == 2
    assert run_cli(capsys, "factorize", "--n", "50", "--sieve-limit", "10")[0] == 2


def test_exit_three_on_internal_assertion(capsys, monkeypatch):
    import factdom.cli as cli_module

    monkeypatch.setattr(cli_module, "legendre_digit_form", lambda n, p: -1)
    code, _, err = run_cli(capsys, "valuation", "--n", "10", "--p", "3", "--sieve-limit", "100")
    assert code == 3
    assert "internal" in err


def test_exit_four_on_certificate_gap(capsys, monkeypatch):
    import factdom.cli as cli_module

    def explode(*args, **kwargs):
        raise CertificateGap("forced for the exit-code contract test")

    monkeypatch.setattr(cli_module, "global_min_r", explode)
    code, _, err = run_cli(capsys, "rmin", "--p", "11", "--sieve-limit", "1000")
    assert code == 4
    assert "certificate gap" in err


# ---------------------------------------------------------------------------
# cache behaviour
# ---------------------------------------------------------------------------


def test_cache_transparency(capsys, tmp_path):
    cache = tmp_path / "cache.jsonl"
    args = ("nmin", "--p", "5", "--sieve-limit", "1000")
    code_plain, out_plain, _ = run_cli(capsys, *args)
    code_first, out_first, _ = run_cli(capsys, "--cache", str(cache), *args)
    code_second, out_second, _ = run_cli(capsys, "--cache", str(cache), *args)
    assert code_plain == code_first == code_second == 0
    assert out_plain == out_first == out_second
    entries = [json.loads(line) for line in cache.read_text().splitlines()]
    assert len(entries) == 1  # second run was served from the cache
    assert entries[0]["tool_version"] == __version__
    assert "created_at" in entries[0]


def test_cache_preserves_exit_code(capsys, tmp_path):
    cache = tmp_path / "cache.jsonl"
    args = ("--cache", str(cache), "chain", "--n", "3", "--m", "2", "--sieve-limit", "100")
    assert run_cli(capsys, *args)[0] == 1
    assert run_cli(capsys, *args)[0] == 1  # replayed from cache


def test_cache_skips_corrupt_lines_with_warning(capsys, tmp_path):
    cache = tmp_path / "cache.jsonl"
    cache.write_text("this is not json\n")
    code, out, err = run_cli(
        capsys, "--cache", str(cache), "nmin", "--p", "3", "--sieve-limit", "1000"
    )
    assert code == 0
    assert "corrupt cache line 1" in err
    assert json.loads(out)["result"]["value"] == 6


def test_cache_ignores_other_tool_versions(capsys, tmp_path):
    cache = tmp_path / "cache.jsonl"
    key = json.dumps(
        {"subcommand": "nmin", "params": {"p": 3}},
        sort_keys=True,
        separators=(",", ":"),
    )
    stale = {
        "key": key,
        "value": {"payload": {"result": {"value": -999}}, "exit_code": 0},
        "tool_version": "0.0.0",
        "created_at": "2020-01-01T00:00:00+00:00",
    }
    cache.write_text(json.dumps(stale) + "\n")
    code, payload, _ = run_json(
        capsys, "--cache", str(cache), "nmin", "--p", "3", "--sieve-limit", "1000"
    )
    assert code == 0
    assert payload["result"]["value"] == 6  # recomputed, not the stale -999


# ---------------------------------------------------------------------------
# config file via environment variable
# ---------------------------------------------------------------------------


def test_config_file_defaults_and_flag_override(capsys, tmp_path, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"format": "csv", "sieve_limit": 500}))
    monkeypatch.setenv("FACTDOM_CONFIG", str(config))
    code, out, _ = run_cli(capsys, "valuation", "--n", "5", "--p", "3")
    assert code == 0
    assert out.startswith("key,value")
    code, out, _ = run_cli(capsys, "--format", "json", "valuation", "--n", "5", "--p", "3")
    assert code == 0
    assert json.loads(out)["result"]["nu"] == 1


def test_config_file_unknown_key_is_usage_error(capsys, tmp_path, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"sieve": 100}))
    monkeypatch.setenv("FACTDOM_CONFIG", str(config))
    code, _, err = run_cli(capsys, "valuation", "--n", "5", "--p", "3")
    assert code == 2
    assert "unknown config keys" in err
