import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycldpc.io import (
    MANIFEST_KEYS,
    FormatError,
    Manifest,
    matrix_from_text,
    parse_alist,
    parse_int_list,
    read_alist,
    read_manifest,
    vector_from_text,
    vector_to_text,
    write_alist,
)


def test_alist_layout():
    H = np.array([[1, 1, 0], [0, 1, 1]])
    text = write_alist(H)
    assert text.splitlines() == ["3 2", "2 2", "1 2 1", "2 2", "1 0", "1 2", "2 0", "1 2", "2 3"]
    assert np.array_equal(parse_alist(text), H)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_alist_round_trip(m, n, seed):
    H = (np.random.default_rng(seed).random((m, n)) < 0.4).astype(np.uint8)
    assert np.array_equal(parse_alist(write_alist(H)), H)


def test_alist_file(tmp_path, H15):
    p = tmp_path / "h.alist"
    write_alist(H15, p)
    assert np.array_equal(read_alist(p), H15)


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n2 2\n", "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n", "3 x\n", "1 1\n1 1\n1\n1\n5\n"],
)
def test_alist_malformed(text):
    with pytest.raises(FormatError):
        parse_alist(text)


def test_alist_row_lists_checked():
    text = write_alist(np.array([[1, 1, 0], [0, 1, 1]])).splitlines()
    text[-1] = "1 3"
    with pytest.raises(FormatError, match="row list"):
        parse_alist("\n".join(text))


class TestManifest:
    def test_round_trip(self):
        text = "kind=eg\nm=3\nq=4\nclass=1\norientation=columns\n"
        man = Manifest.from_text(text)
        assert man["m"] == 3 and man["class"] == 1
        assert Manifest.from_text(man.to_text()).values == man.values

    def test_comments_and_spaces(self):
        man = Manifest.from_text("# a code\nkind = bch  # inline\n\nn=15\nroots=1,3\n")
        assert man.values == {"kind": "bch", "n": 15, "roots": "1,3"}

    @pytest.mark.parametrize(
        "text,msg",
        [
            ("colour=red\n", "unknown manifest key"),
            ("kind=eg\nkind=pg\n", "duplicate"),
            ("kind=hexagon\n", "unknown kind"),
            ("q=four\n", "invalid value"),
            ("orientation=sideways\n", "orientation"),
            ("just words\n", "key=value"),
        ],
    )
    def test_rejections(self, text, msg):
        with pytest.raises(FormatError, match=msg):
            Manifest.from_text(text)

    def test_missing_key(self):
        with pytest.raises(FormatError, match="needs 'q'"):
            Manifest({"kind": "pg"})["q"]

    def test_all_keys_round_trip(self, tmp_path):
        vals = {k: (1 if t is int else "x") for k, t in MANIFEST_KEYS.items()}
        vals.update(kind="manual", orientation="rows")
        p = tmp_path / "m.txt"
        p.write_text(Manifest(vals).to_text())
        assert read_manifest(p).values == Manifest(vals).values


def test_text_helpers():
    assert parse_int_list("1, 2;3,") == [1, 2, 3]
    v = np.array([0, 1, 1, 0])
    assert np.array_equal(vector_from_text(vector_to_text(v)), v)
    assert matrix_from_text("1 0\n0 1\n").tolist() == [[1, 0], [0, 1]]
    with pytest.raises(FormatError):
        matrix_from_text("1 0\n1\n")
