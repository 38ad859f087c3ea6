import json

import pytest

from tmcf import prefix_cache
from tmcf.cli import main, parse_map_spec
from tmcf.cf import AlphabetMapError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_plain(capsys):
    code, out, _ = run_cli(capsys, "gen", "--m", "2", "--len", "8")
    assert code == 0
    symbols = [int(line.split()[1]) for line in out.strip().splitlines()]
    assert symbols == [0, 1, 1, 0, 1, 0, 0, 1]


def test_gen_m3(capsys):
    code, out, _ = run_cli(capsys, "gen", "--m", "3", "--len", "9")
    assert code == 0
    symbols = [int(line.split()[1]) for line in out.strip().splitlines()]
    assert symbols == [0, 1, 2, 1, 2, 0, 2, 0, 1]


def test_gen_rejects_bad_modulus(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--m", "1", "--len", "4"])
    assert exc.value.code == 2


def test_gen_with_map_json(capsys):
    code, out, _ = run_cli(
        capsys, "gen", "--m", "2", "--len", "4", "--map", "0:1,1:2", "--format", "json-lines"
    )
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert records[0] == {"index": 0, "symbol": 0, "quotient": 1}
    assert [r["quotient"] for r in records] == [1, 2, 2, 1]


def test_gen_csv_format(capsys):
    code, out, _ = run_cli(capsys, "gen", "--m", "2", "--len", "3", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "index,symbol"
    assert lines[1:] == ["0,0", "1,1", "2,1"]


def test_gen_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "gen", "--m", "5", "--len", "64", "--format", "json-lines")
    code2, out2, _ = run_cli(capsys, "gen", "--m", "5", "--len", "64", "--format", "json-lines")
    assert code1 == code2 == 0
    assert out1 == out2


def test_gen_out_file(tmp_path, capsys):
    target = tmp_path / "terms.txt"
    code, out, _ = run_cli(capsys, "gen", "--m", "2", "--len", "4", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().splitlines() == ["0 0", "1 1", "2 1", "3 0"]


def test_parse_map_spec():
    amap = parse_map_spec("0:1,1:2", 2)
    assert amap.image == (1, 2)
    # unmapped symbols fall back to j + 1
    amap = parse_map_spec("0:7", 3)
    assert amap.image == (7, 2, 3)
    with pytest.raises(AlphabetMapError):
        parse_map_spec("0:1,1:1", 2)
    with pytest.raises(AlphabetMapError):
        parse_map_spec("0:1,0:2", 2)
    with pytest.raises(AlphabetMapError):
        parse_map_spec("5:1", 3)
    with pytest.raises(AlphabetMapError):
        parse_map_spec("junk", 2)


def test_cf_convergents_table(capsys):
    code, out, _ = run_cli(
        capsys, "cf", "--m", "2", "--map", "0:1,1:2", "--convergents", "5",
        "--digits", "30", "--format", "json-lines",
    )
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    last_convergent = [r for r in records if r["kind"] == "convergent"][-1]
    assert (last_convergent["p"], last_convergent["q"]) == (19, 27)
    decimal = [r for r in records if r["kind"] == "decimal"][0]
    assert decimal["value"].startswith("0.703042687325")
    assert len(decimal["value"]) == 32  # "0." + 30 digits


def test_cf_noninjective_map_usage_error(capsys):
    code, _, err = run_cli(capsys, "cf", "--map", "0:1,1:1")
    assert code == 2
    assert "injective" in err or "error" in err


def test_cf_infers_modulus_from_map(capsys):
    code, out, _ = run_cli(capsys, "cf", "--map", "0:2,1:1", "--digits", "6", "--format", "json-lines")
    assert code == 0
    record = json.loads(out.strip().splitlines()[-1])
    assert record["kind"] == "decimal"


def test_complexity_command(capsys):
    code, out, _ = run_cli(
        capsys, "complexity", "--m", "2", "--len", "16384", "--n-max", "5", "--format", "json-lines"
    )
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    counts = [r["count"] for r in records if r["kind"] == "p"]
    assert counts == [2, 4, 6, 10, 12]
    diagnostic = records[-1]
    assert diagnostic["violations"] == 0


def test_period_command(capsys):
    code, out, _ = run_cli(
        capsys, "period", "--m", "4", "--len", "20000", "--a-max", "40", "--b-max", "150",
        "--format", "json-lines",
    )
    assert code == 0
    record = json.loads(out.strip())
    assert record["found"] is False


def test_palindrome_command(capsys):
    code, out, _ = run_cli(
        capsys, "palindrome", "--m", "2", "--len", "5000", "--format", "json-lines"
    )
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    indices = [r["index"] for r in records if r["kind"] == "palindromic_prefix"]
    assert indices == [0, 3, 15, 63, 255, 1023, 4095]
    assert records[-1]["complete"] is True


def test_patterns_command(capsys):
    code, out, _ = run_cli(
        capsys, "patterns", "--m", "3", "--len", "10000", "--pattern", "1,1,0",
        "--k-max", "4", "--format", "json-lines",
    )
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    summary = [r for r in records if r["kind"] == "occurrence_summary"][0]
    assert summary["count"] == 0
    predicted = [r["index"] for r in records if r["kind"] == "predicted_011"]
    assert predicted[0] == 7


def test_verify_all_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify-all", "--m", "2", "--len", "20000", "--n-max", "50",
        "--a-max", "20", "--b-max", "100", "--digits", "10", "--format", "json-lines",
    )
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert all(r["status"] == "pass" for r in records)
    suites = {r["suite"] for r in records}
    assert {"equivalence", "congruences", "recursion", "aperiodicity",
            "palindromes", "complexity", "convergents", "summary"} <= suites


def test_verify_all_detects_injected_fault(capsys):
    code, out, _ = run_cli(
        capsys, "verify-all", "--m", "2", "--len", "5000", "--n-max", "30",
        "--a-max", "10", "--b-max", "50", "--digits", "8",
        "--inject-flip", "137", "--format", "json-lines",
    )
    assert code == 1
    records = [json.loads(line) for line in out.strip().splitlines()]
    failed = [r for r in records if r["status"] == "FAIL"]
    assert failed
    assert failed[0]["suite"] == "equivalence"
    assert "137" in failed[0]["detail"]


def test_verify_all_json_roundtrip(capsys):
    code, out, _ = run_cli(
        capsys, "verify-all", "--m", "3", "--len", "4000", "--n-max", "20",
        "--a-max", "10", "--b-max", "40", "--digits", "6", "--format", "json-lines",
    )
    assert code == 0
    for line in out.strip().splitlines():
        record = json.loads(line)
        assert json.loads(json.dumps(record)) == record
        assert set(record) == {"suite", "property", "status", "detail"}


def test_prefix_cache_roundtrip(tmp_path):
    path = tmp_path / "prefix.tmw"
    prefix_cache.write_prefix(path, 3, [0, 1, 2, 1, 2, 0])
    m, symbols = prefix_cache.read_prefix(path)
    assert (m, symbols) == (3, [0, 1, 2, 1, 2, 0])


def test_prefix_cache_wide_symbols(tmp_path):
    path = tmp_path / "wide.tmw"
    prefix_cache.write_prefix(path, 1000, [0, 999, 500])
    m, symbols = prefix_cache.read_prefix(path)
    assert (m, symbols) == (1000, [0, 999, 500])


def test_prefix_cache_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.tmw"
    bad.write_bytes(b"NOPE" + b"\x00" * 30)
    with pytest.raises(prefix_cache.CacheFormatError):
        prefix_cache.read_prefix(bad)
    truncated = tmp_path / "short.tmw"
    truncated.write_bytes(b"\x01\x02")
    with pytest.raises(prefix_cache.CacheFormatError):
        prefix_cache.read_prefix(truncated)
    # header promises more payload than present
    prefix_cache.write_prefix(bad, 2, [0, 1, 1, 0])
    data = bad.read_bytes()
    bad.write_bytes(data[:-2])
    with pytest.raises(prefix_cache.CacheFormatError):
        prefix_cache.read_prefix(bad)


def test_cache_dir_round_trip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(prefix_cache.ENV_CACHE_DIR, str(tmp_path))
    code, out1, _ = run_cli(capsys, "palindrome", "--m", "2", "--len", "2000", "--format", "json-lines")
    assert code == 0
    cache_file = prefix_cache.cache_path(tmp_path, 2)
    assert cache_file.is_file()
    stored_m, symbols = prefix_cache.read_prefix(cache_file)
    assert stored_m == 2 and len(symbols) == 2000
    # second run hits the cache and produces identical output
    code, out2, _ = run_cli(capsys, "palindrome", "--m", "2", "--len", "2000", "--format", "json-lines")
    assert code == 0
    assert out1 == out2


def test_cache_shorter_request_uses_stored(tmp_path, monkeypatch):
    monkeypatch.setenv(prefix_cache.ENV_CACHE_DIR, str(tmp_path))
    from tmcf.tm import tm_digit_sum_sequence

    full = tm_digit_sum_sequence(5).prefix(512)
    assert prefix_cache.store_prefix(5, full)
    assert prefix_cache.load_cached_prefix(5, 100) == full[:100]
    # storing a shorter prefix does not clobber the longer one
    assert not prefix_cache.store_prefix(5, full[:10])
    assert prefix_cache.load_cached_prefix(5, 512) == full


def test_cache_disabled_without_env(monkeypatch):
    monkeypatch.delenv(prefix_cache.ENV_CACHE_DIR, raising=False)
    assert prefix_cache.load_cached_prefix(2, 10) is None
    assert not prefix_cache.store_prefix(2, [0, 1])


def test_prefix_cache_four_byte_width(tmp_path):
    path = tmp_path / "huge.tmw"
    prefix_cache.write_prefix(path, 1 << 20, [0, (1 << 20) - 1, 12345])
    m, symbols = prefix_cache.read_prefix(path)
    assert (m, symbols) == (1 << 20, [0, (1 << 20) - 1, 12345])


def test_verify_all_byte_identical_runs(capsys):
    args = ["verify-all", "--m", "3", "--len", "3000", "--n-max", "20",
            "--a-max", "10", "--b-max", "40", "--digits", "6", "--format", "json-lines"]
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_cf_csv_does_not_crash(capsys):
    code, out, _ = run_cli(
        capsys, "cf", "--m", "2", "--convergents", "3", "--digits", "4", "--format", "csv"
    )
    assert code == 0
    assert out.splitlines()[0] == "kind,n,p,q"
