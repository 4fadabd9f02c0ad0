#!/usr/bin/env python3
"""Smoke test for the motex_py bindings.

Build the extension first:

    cargo build --release -p motex-py

then run this script from the workspace root:

    python3 python/smoke_test.py
"""

import os
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


def load_module():
    import importlib.util

    for profile in ("release", "debug"):
        so = os.path.join(ROOT, "target", profile, "libmotex_py.so")
        if os.path.exists(so):
            spec = importlib.util.spec_from_file_location("motex_py", so)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("build the bindings first: cargo build --release -p motex-py")


def main():
    mx = load_module()
    assert "B" in mx.presets() and "E-tau3" in mx.presets()

    # The exterior algebra on tau_3 has polynomial Ext on one generator of
    # tridegree (14, 1, 7).
    e = mx.Resolution("E-tau3")
    e.extend(42, 4)
    for k in (1, 2, 3):
        assert e.dim(14 * k, k, 7 * k) == 1, (k, "v3 power missing")
        assert e.dim(14 * k - 1, k, 7 * k) == 0
    assert e.generators() == [(0, 0, 0)] + [(14 * k, k, 7 * k) for k in (1, 2, 3)]

    # Low-degree Ext over B.
    b = mx.Resolution("B")
    b.extend(34, 10)
    assert b.dim(0, 1, 0) == 1          # h0
    assert b.dim(1, 1, 1) == 1          # h1
    assert b.dim(14, 1, 7) == 1         # v3
    assert b.dim(14, 4, 8) == 1         # d0
    assert b.dim(17, 4, 10) == 2        # e0 and h1^3 v3

    s, f, w, desc = b.product("h0", "h0")
    assert (s, f, w) == (0, 2, 0) and desc != "0"
    assert b.is_zero("h0 h1")
    assert not b.is_zero("h1^4")
    assert b.is_zero("tau h1^4"), "tau h1^4 must vanish over B"
    assert b.equal("e0^2", "d0 g")
    assert b.equal("h1^2 e0", "c0 u")

    # Massey product <h1, h0, h1> contains h0 h2.
    s, f, w, desc, indet = b.massey("h1", "h0", "h1")
    assert (s, f, w) == (3, 2, 2)
    assert "h0" in desc and "h2" in desc, desc

    # Checkpoint round trip.
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "b.motx")
        b.save(path)
        b2 = mx.Resolution.load(path)
        assert b2.gen_count() == b.gen_count()
        assert b2.dim(14, 1, 7) == 1

    print("smoke test: OK")


if __name__ == "__main__":
    main()
