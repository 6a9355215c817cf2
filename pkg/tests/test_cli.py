import subprocess
import sys

import numpy as np
import pytest

from cycldpc.cli import main, parse_snr
from cycldpc.io import read_alist, write_alist


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def eg15(tmp_path, H15):
    p = tmp_path / "eg15.alist"
    write_alist(H15, p)
    return p


@pytest.fixture
def eg63(tmp_path, H63):
    p = tmp_path / "eg63.alist"
    write_alist(H63, p)
    return p


class TestConstruct:
    def test_eg16(self, capsys, tmp_path):
        out_path = tmp_path / "h.alist"
        code, out, _ = run(capsys, "construct", "--kind", "eg", "--m", 2, "--q", 16, "--out", out_path)
        assert code == 0
        assert "shape: 255x255" in out and "rank: 80" in out and "row weights: 16" in out
        assert "rc: ok" in out and "girth: 6" in out
        assert "kind=eg\nm=2\nq=16\n" in out
        assert read_alist(out_path).shape == (255, 255)

    def test_pg4(self, capsys):
        code, out, _ = run(capsys, "construct", "--kind", "pg", "--q", 4)
        assert code == 0 and "shape: 21x21" in out and "rank: 10" in out

    def test_ls8(self, capsys):
        code, out, _ = run(capsys, "construct", "--kind", "ls-dispersion", "--q", 8, "--eta", 1, "--no-girth")
        assert code == 0 and "shape: 56x56" in out and "rank: 26" in out and "girth" not in out

    def test_manifest_round_trip(self, capsys, tmp_path):
        m = tmp_path / "code.txt"
        m.write_text("kind=bch\nn=15\nroots=1,3\n")
        echo = tmp_path / "echo.txt"
        code, out, _ = run(capsys, "construct", "--manifest", m, "--manifest-out", echo)
        assert code == 0 and "rank: 8" in out
        assert echo.read_text() == m.read_text()

    def test_unknown_manifest_key(self, capsys, tmp_path):
        m = tmp_path / "bad.txt"
        m.write_text("kind=eg\nq=4\nflavour=mild\n")
        code, _, err = run(capsys, "construct", "--manifest", m)
        assert code == 1 and "unknown manifest key" in err

    def test_missing_kind_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["construct"])
        assert exc.value.code == 2


class TestDecompose:
    def test_sections(self, capsys, tmp_path):
        m = tmp_path / "bch.txt"
        m.write_text("kind=bch\nn=2047\nroots=1,2,3,4\n")
        d = tmp_path / "sec"
        code, out, _ = run(capsys, "decompose", "--manifest", m, "--c", 89, "--out-dir", d, "--descendant", 0)
        assert code == 0
        assert len(list(d.glob("section_*.txt"))) == 89
        assert (d / "grid.txt").read_text().splitlines()[1].startswith("88+ 0 1")
        assert "section 0 code: (23,12)" in out
        assert "X^11 + X^9 + X^7 + X^6 + X^5 + X + 1" in out

    def test_cpm(self, capsys, eg15):
        code, out, err = run(capsys, "decompose", "--in", eg15, "--b", 1, "--l", 3)
        assert code == 0
        assert out.splitlines()[0] == "0 0 1 0 -1"
        assert "CPMs per row block: 4" in err

    def test_non_circulant(self, capsys, tmp_path):
        p = tmp_path / "x.alist"
        write_alist(np.array([[1, 1, 0], [1, 0, 1], [1, 1, 1]]), p)
        code, _, err = run(capsys, "decompose", "--in", p, "--c", 3)
        assert code == 1 and "not a circulant" in err


class TestMaskSplit:
    def test_split_eg34_class(self, capsys, tmp_path):
        m = tmp_path / "eg34.txt"
        m.write_text("kind=eg\nm=3\nq=4\nclass=0\n")
        grid = tmp_path / "grid.txt"
        run(capsys, "decompose", "--manifest", m, "--b", 1, "--l", 3, "--out", grid)
        code, out, err = run(capsys, "split", "--grid", grid, "--l", 3, "--e", 2)
        assert code == 0
        rows = out.splitlines()
        assert len(rows) == 42 and len(rows[0].split()) == 42
        assert "CPMs per row block: 2" in err

    def test_mask_grid(self, capsys, tmp_path, eg15):
        grid = tmp_path / "grid.txt"
        run(capsys, "decompose", "--in", eg15, "--b", 1, "--l", 3, "--out", grid)
        z = tmp_path / "z.txt"
        z.write_text("\n".join(" ".join("1" if (i + j) % 2 == 0 else "0" for j in range(5)) for i in range(5)))
        code, out, _ = run(capsys, "mask", "--grid", grid, "--l", 3, "--mask", z)
        assert code == 0
        assert out.splitlines()[0].split() == ["0", "-1", "1", "-1", "-1"]

    def test_mask_sections(self, capsys, eg15):
        code, out, _ = run(capsys, "mask", "--in", eg15, "--c", 3, "--sections", "0,1,2")
        assert code == 0 and "rank: 0" in out

    def test_mask_grid_needs_mask(self, capsys, tmp_path):
        g = tmp_path / "g.txt"
        g.write_text("0\n")
        with pytest.raises(SystemExit) as exc:
            main(["mask", "--grid", str(g), "--l", "3"])
        assert exc.value.code == 2


class TestAnalysis:
    def test_trapset(self, capsys, eg63, tmp_path):
        csv = tmp_path / "t.csv"
        code, out, _ = run(capsys, "trapset", "--in", eg63, "--kappa-max", 3)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "kappa=1 tau:count 8:63"
        assert lines[2].startswith("kappa=3 tau:count 18:")
        code, out, _ = run(capsys, "trapset", "--in", eg63, "--kappa-max", 2, "--filter", "elementary", "--csv", csv)
        assert csv.read_text().startswith("kappa,tau,elementary,codeword,vn_indices\n")

    @pytest.mark.parametrize("kind", ["eg15", "eg63"])
    def test_rank_methods_agree(self, capsys, kind, request):
        p = request.getfixturevalue(kind)
        _, a, _ = run(capsys, "rank", "--in", p, "--method", "ft")
        _, b, _ = run(capsys, "rank", "--in", p, "--method", "gauss")
        assert a == b

    def test_rank_ft_needs_circulant(self, capsys, tmp_path):
        p = tmp_path / "x.alist"
        write_alist(np.array([[1, 1], [0, 1]]), p)
        code, _, err = run(capsys, "rank", "--in", p, "--method", "ft")
        assert code == 1 and "circulant" in err

    def test_roots_match(self, capsys):
        code, out, _ = run(capsys, "roots", "--n", 15, "--seed", 1, "--section", 1)
        assert code == 0 and out.strip().endswith("MATCH")

    def test_roots_manifest(self, capsys, tmp_path):
        m = tmp_path / "c.txt"
        m.write_text("kind=bch\nn=63\nroots=1,3,5\n")
        code, out, _ = run(capsys, "roots", "--manifest", m, "--c", 7, "--section", 2)
        assert code == 0 and "MATCH" in out


class TestSimulate:
    def test_osmlgd_exhaustive(self, capsys, eg15):
        code, out, _ = run(capsys, "simulate", "--in", eg15, "--decoder", "osmlgd", "--exhaustive-weight", 2)
        assert code == 0 and out.strip() == "0 failures / 120 patterns"

    def test_snr_rows_and_determinism(self, capsys, eg63, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["simulate", "--in", eg63, "--snr", "3:1:6", "--frames", 200, "--seed", 4]
        run(capsys, *args, "--out", a, "--threads", 1)
        run(capsys, *args, "--out", b, "--threads", 4)
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert len(lines) == 2 + 4
        assert [l.split(",")[0] for l in lines[2:]] == ["3", "4", "5", "6"]

    def test_missing_snr(self, capsys, eg15):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--in", str(eg15)])
        assert exc.value.code == 2


def test_parse_snr():
    assert parse_snr("3:1:6") == [3.0, 4.0, 5.0, 6.0]
    assert parse_snr("0:0.5:1") == [0.0, 0.5, 1.0]
    assert parse_snr("2,4.5") == [2.0, 4.5]


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "rank", "--in", tmp_path / "missing.alist")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["rank", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--in", "x", "--snr", "6:1:3"])
    assert exc.value.code == 2


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "cycldpc", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in ("construct", "decompose", "mask", "split", "trapset", "rank", "roots", "simulate"):
        assert cmd in r.stdout
