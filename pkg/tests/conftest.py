from __future__ import annotations

import numpy as np
import pytest


def long_textgrid(tiers, xmax=None, xmin=0.0) -> str:
    """Hand-written long-format TextGrid. ``tiers`` is [(name, [(a, b, text), ...]), ...]."""
    if xmax is None:
        xmax = max((b for _, ivs in tiers for _, b, _ in ivs), default=1.0)
    out = ['File type = "ooTextFile"', 'Object class = "TextGrid"', "",
           f"xmin = {xmin} ", f"xmax = {xmax} ", "tiers? <exists> ", f"size = {len(tiers)} ", "item []: "]
    for k, (name, ivs) in enumerate(tiers, 1):
        out += [f"    item [{k}]:", '        class = "IntervalTier" ', f'        name = "{name}" ',
                f"        xmin = {xmin} ", f"        xmax = {xmax} ", f"        intervals: size = {len(ivs)} "]
        for j, (a, b, text) in enumerate(ivs, 1):
            out += [f"        intervals [{j}]:", f"            xmin = {a} ", f"            xmax = {b} ",
                    f'            text = "{text}" ']
    return "\n".join(out) + "\n"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
