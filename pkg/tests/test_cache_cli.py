from fractions import Fraction

import pytest

from siegelgen.binquad import BQF
from siegelgen.cache import CacheError, cache_filename, cache_load, cache_store, dumps, loads
from siegelgen.cli import main
from siegelgen.config import RunConfig
from siegelgen.siegel import LiftSource


def test_cache_round_trip(tmp_path):
    src = LiftSource(label="10|^1", weight=10) * LiftSource(label="12|_1", weight=12)
    for t in (BQF(1, 1, 1), BQF(1, 0, 1), BQF(2, 1, 3), BQF(0, 0, 4)):
        src.coefficient(t)
    path = cache_store(src, tmp_path / "x.cache")
    fresh = LiftSource(label="10|^1", weight=10) * LiftSource(label="12|_1", weight=12)
    memo = cache_load(path, fresh)
    assert memo == src.memo == fresh.memo
    assert path.read_bytes() == dumps(memo, 22, src.label)


def test_cache_rejects_tampering():
    data = dumps({BQF(1, 1, 1): Fraction(3, 2)}, 20, "k")
    assert loads(data)[2] == {BQF(1, 1, 1): Fraction(3, 2)}
    with pytest.raises(CacheError):
        loads(data.replace(b"3/2", b"5/2"))
    with pytest.raises(CacheError):
        loads(data, weight=22)
    bad = dumps({BQF(2, 1, 1): Fraction(1)}, 20, "k")
    with pytest.raises(CacheError):
        loads(bad)


def test_cache_names_keep_labels_apart():
    names = {cache_filename(20, l) for l in ("20|^1", "20|_1", "10|_0 · 10|_1", "10|_1 · 10|_0")}
    assert len(names) == 4


def test_run_config_validation():
    assert RunConfig.from_env({"SIEGELGEN_N": "300", "SIEGELGEN_BITS": "160"}).N == 300
    assert RunConfig.from_env({"SIEGELGEN_N": "300"}, N=250).N == 250
    for bad in ({"bits": 64}, {"N2": 500}, {"P2": 200}):
        with pytest.raises(ValueError):
            RunConfig(**bad)


def test_cli_exit_codes(capsys):
    assert main(["boecherer", "--weight", "21"]) == 2
    assert main(["--bits", "64", "pivots", "--weights", "10"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2
    assert main(["verify-generators", "--max-weight", "18"]) == 0
    out = capsys.readouterr().out
    assert "products: -" in out and "FAILED" not in out


def test_cli_reports(capsys, tmp_path):
    assert main(["irreducibility", "--kmin", "20", "--kmax", "28"]) == 0
    lines = capsys.readouterr().out.splitlines()
    verdicts = {int(l.split()[0][2:]): l.split()[2] for l in lines}
    assert [k for k, v in verdicts.items() if v == "reducible"] == [24, 26]
    out = tmp_path / "pts.csv"
    assert main(["plot-pivots", "--weights", "20-30", "--out", str(out)]) == 0
    assert out.read_text().startswith("log_k,log_maxD") and out.with_suffix(".gp").exists()
    assert main(["eigenvalues", "--weight", "20", "--primes", "2,3"]) == 0
    csv_out = capsys.readouterr().out
    assert "20,20,0,2,-840960," in csv_out and "20,20,0,3,346935960," in csv_out


def test_thread_count_does_not_change_output(capsys):
    assert main(["pivots", "--weights", "20-30"]) == 0
    serial = capsys.readouterr().out
    assert main(["--threads", "3", "pivots", "--weights", "20-30"]) == 0
    assert capsys.readouterr().out == serial
    assert serial.startswith("weight,maxD\n20,13\n")
