"""Smoke test for the `pbk` extension module.

Build the module first, then run with pytest or plain python:

    cargo build -p pbk-py --release --features extension-module
    PBK_LIB=target/release/libpbk.so python python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import math
import os
import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent


def _load():
    candidates = [os.environ.get("PBK_LIB")] + [
        str(ROOT / "target" / profile / name)
        for profile in ("release", "debug")
        for name in ("libpbk.so", "libpbk.dylib", "pbk.pyd")
    ]
    for path in filter(None, candidates):
        if os.path.exists(path):
            loader = importlib.machinery.ExtensionFileLoader("pbk", path)
            spec = importlib.util.spec_from_file_location("pbk", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    pytest.skip("pbk extension not built")


pbk = _load()


def test_kloosterman_level_one_matches_classical():
    for c in range(1, 30):
        h = pbk.kloosterman_generalized(2, 3, c)
        assert abs(h.real - pbk.kloosterman_classical(2, 3, c)) < 1e-9
        assert abs(h.imag) < 1e-9


def test_level_eleven_support():
    assert abs(pbk.kloosterman_generalized(1, 1, 7, level={11: 1})) < 1e-9


def test_oracle_values():
    assert pbk.lambda_oracle(2) == pytest.approx(-2 / math.sqrt(2))
    assert pbk.lambda_oracle(3) == pytest.approx(-1 / math.sqrt(3))


def test_petersson_dict():
    g = pbk.petersson2_geometric(1, 1, 2000)
    assert g["diagonal_term"] == pytest.approx(12 / (4 * math.pi))
    assert g["tail_majorant"] > 0
    assert all(t["c"] % 11 == 0 for t in g["partial_terms"])


def test_transforms():
    k = pbk.h_minus("family2", 5.0, 1.0)
    i = pbk.h_minus("family2", 5.0, 1.0, route="i-form")
    assert abs(k - i) <= 1e-6 * (1 + abs(k))
    assert pbk.f_infty_one("family2", 10.0) / 100 == pytest.approx(1 / (4 * math.pi), abs=2e-3)


def test_errors():
    with pytest.raises(ValueError):
        pbk.h_minus("family1", 100.0, 1.0, delta=1.0)
    with pytest.raises(ValueError):
        pbk.petersson2_geometric(1, 22, 2000)
    with pytest.raises(ValueError):
        pbk.h_minus("family3", 5.0, 1.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
