from __future__ import annotations

import numpy as np
from hypothesis import settings, strategies as st

from revblocks import perm as P

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def perms(draw, min_n: int = 1, max_n: int = 6, even: bool = False):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return P.random_perm(n, np.random.default_rng(seed), even=even)


@st.composite
def perm_pairs(draw, min_n: int = 1, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    a, b = draw(st.integers(0, 2**32 - 1)), draw(st.integers(0, 2**32 - 1))
    return P.random_perm(n, np.random.default_rng(a)), P.random_perm(n, np.random.default_rng(b))


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


# ----------------------------------------------------- acceptance reporting

_RESULTS: dict[int, tuple[bool, str]] = {}
_RAN: set[int] = set()


def record(k: int, ok: bool, detail: str) -> None:
    _RESULTS[k] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call" and name.startswith("test_criterion_"):
        _RAN.add(int(name.split("_")[2]))


def pytest_terminal_summary(terminalreporter):
    if not _RAN:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RAN):
        ok, detail = _RESULTS.get(k, (False, "raised before reporting"))
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
