"""Smoke test for the noninertial_py extension.

Build and run from the workspace root:

    cargo build -p noninertial-py --features extension-module
    cp target/debug/libnoninertial_py.so /tmp/noninertial_py.so
    PYTHONPATH=/tmp python3 crates/python/python/smoke_test.py
"""

import math

import noninertial_py as ni


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    bell = ni.XParams.bell()
    rho = ni.x_state(bell)
    assert rho.labels == ["A", "R"]
    assert close(ni.concurrence(rho), 1.0)
    assert close(ni.ppt(rho)["negativity"], 0.5)

    accelerated = ni.apply_unruh(rho, math.pi / 4)
    assert close(ni.concurrence(accelerated), math.cos(math.pi / 4))

    total = ni.evolve(bell, 0.0, ni.ChannelSpec.equal("amplitude", 0.5))
    assert total.labels == ["A", "R", "EA", "ER"]
    for part in ("AR", "EaEr", "REa"):
        assert close(ni.concurrence(ni.reduce(total, part)), 0.25), part
    diag = total.diagnostics()
    assert diag["min_eigenvalue"] > -1e-10

    kraus = ni.ChannelSpec("phase", 0.3, 0.0).kraus("A")
    assert len(kraus) == 2

    werner = ni.XParams.werner(0.8)
    c = ni.concurrence(ni.reduce(ni.evolve(werner, math.pi / 4, ni.ChannelSpec.equal("amplitude", 0.3)), "AR"))
    assert close(c, 0.025756554, 1e-8), c

    table = ni.sweep(bell, "phase", r_steps=5, p_steps=5, partitions=["AR"])
    assert table["header"] == ["r", "p", "C_AR", "N_AR"]
    assert len(table["rows"]) == 25
    for r, p, c_ar, _ in table["rows"]:
        assert close(c_ar, (1 - p) * math.cos(r))

    sd = ni.boundary(bell, "amplitude", "SD", "AR", "r", math.pi / 4)
    assert close(sd["value"], 0.5, 1e-6), sd

    report = ni.audit(bell, 0.5, 0.25, "amplitude")
    bad = [rec for rec in report["records"] if rec["status"] == "mismatch"]
    assert [(rec["equation_id"], rec["entry"]) for rec in bad] == [("r1ad", [1, 1])]

    general = ni.XParams(0.7, 0.9, 0.4)
    assert close(general.best_sign_min_eigenvalue(), -0.05, 1e-12)
    try:
        ni.x_state(general)
    except ValueError as e:
        assert "-0.05" in str(e)
    else:
        raise AssertionError("nonphysical parameters accepted")
    assert ni.x_state(general, allow_nonphysical=True).nonphysical

    m = ni.DensityMatrix([[0.5, 0.5], [0.5, 0.5]], ["R"])
    assert m.num_qubits == 1
    print("smoke test passed")


if __name__ == "__main__":
    main()
