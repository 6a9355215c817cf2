import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cycldpc.geometry import eg_circulant, eg_lines, pg_circulant  # noqa: E402


@pytest.fixture(scope="session")
def H15():
    return eg_circulant(eg_lines(2, 4)[0]).dense()


@pytest.fixture(scope="session")
def H63():
    return eg_circulant(eg_lines(2, 8)[0]).dense()


@pytest.fixture(scope="session")
def H21():
    return pg_circulant(4).dense()


@pytest.fixture(scope="session")
def small_graph():
    return np.array(
        [
            [1, 0, 1, 1, 0, 0, 0],
            [0, 1, 0, 1, 1, 0, 0],
            [0, 0, 1, 0, 1, 1, 0],
            [0, 0, 0, 1, 0, 1, 1],
            [1, 0, 0, 0, 1, 0, 1],
            [1, 1, 0, 0, 0, 1, 0],
            [0, 1, 1, 0, 0, 0, 1],
        ],
        dtype=np.uint8,
    )


@pytest.fixture(scope="session")
def eg64_array():
    """EG(2,64) circulant decomposed with c=3 (l=1365)."""
    from cycldpc.circulant import decompose

    return decompose(eg_circulant(eg_lines(2, 64)[0]), 3)


_BUNDLE = {}


def bundled_circulants():
    """Named circulant parity-check matrices shared by the acceptance runs."""
    if not _BUNDLE:
        from cycldpc.cyclic import circulant_parity_matrix, cyclic_code

        _BUNDLE["hamming7"] = circulant_parity_matrix(cyclic_code(7, roots=[1]))
        _BUNDLE["bch15"] = circulant_parity_matrix(cyclic_code(15, roots=[1, 3]))
        _BUNDLE["golay23"] = circulant_parity_matrix(
            cyclic_code(23, generator=[1, 1, 0, 0, 0, 1, 1, 1, 0, 1, 0, 1])
        )
        _BUNDLE["bch2047"] = circulant_parity_matrix(cyclic_code(2047, roots=[1, 2, 3, 4]))
        for q in (4, 8, 16, 64):
            _BUNDLE[f"eg{q * q - 1}"] = eg_circulant(eg_lines(2, q)[0])
        for q in (2, 4, 8):
            _BUNDLE[f"pg{q * q + q + 1}"] = pg_circulant(q)
    return dict(_BUNDLE)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
