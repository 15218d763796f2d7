"""Smoke test for the Python bindings.

Build and install first:
    pip install --no-build-isolation ./crates/py
"""

import json
from fractions import Fraction

import bimop

CONFIG = {
    "q": 1,
    "p": 2,
    "measures": [[
        {"type": "rect", "box": ["-1", "1", "-1", "1"], "density": {"0": "1"}},
        {"type": "rect", "box": ["0", "1", "-1", "2"], "density": {"0": "2", "1": "1/3"}},
    ]],
    "depth": 6,
}


def check_index():
    assert bimop.pos_of(2, 1) == 4
    assert bimop.pair_of(4) == (2, 1)
    assert bimop.n_plus(2, 1, 1) == 4
    assert bimop.n_plus(1, 1, 2) == 4
    assert not bimop.in_complement_j(2, 1, 1)
    assert bimop.n_minus_big(4, 2, 1) == 2
    assert bimop.n_plus_inverse(bimop.n_plus(7, 3, 2), 3, 2) == 7
    assert bimop.floor_f(Fraction(7, 2)) == 2
    try:
        bimop.floor_f(0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("floats must be refused")


def check_workspace():
    ws = bimop.Workspace.from_json(json.dumps(CONFIG))
    assert (ws.q, ws.p, ws.depth) == (1, 2, 6)
    h = ws.h()
    assert len(h) == 6 and all(isinstance(v, Fraction) for v in h)
    assert h[0] == 4
    t1 = ws.t(1)
    # row 0 of T_1 has its 1 in column n^+(0) = 1
    assert t1[0][:3] == [0, 1, 0]
    s = ws.s()
    assert all(s[i][i] == 1 for i in range(6))
    k = ws.kernel(3, (Fraction(1, 2), -1), "2,1/3")
    assert len(k) == 2 and len(k[0]) == 1
    outcomes = ws.verify("orthogonality,biorthogonality,recurrence,cd", seed=4)
    assert [o["status"] for o in outcomes] == ["pass"] * 4, outcomes


def check_errors():
    collinear = {
        "q": 1,
        "p": 1,
        "depth": 4,
        "measures": [[{"type": "discrete", "atoms": [
            {"x": "0", "y": "0", "w": "1"},
            {"x": "1", "y": "0", "w": "1"},
        ]}]],
    }
    try:
        bimop.Workspace.from_json(json.dumps(collinear))
    except bimop.BreakdownError as e:
        assert e.args[1] == 2
    else:
        raise AssertionError("expected a breakdown")
    try:
        bimop.Workspace.from_json('{"q": 1}')
    except bimop.ConfigError:
        pass
    else:
        raise AssertionError("expected a config error")


if __name__ == "__main__":
    check_index()
    check_workspace()
    check_errors()
    print("smoke test passed")
