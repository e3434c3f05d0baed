"""Smoke test for the cmc1 extension module.

Build and run:
    maturin develop -m crates/py/Cargo.toml --release && python crates/py/python/smoke_test.py
or copy target/release/libcmc1.so next to this script as cmc1.so.
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import cmc1  # noqa: E402


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    cat = cmc1.Family.catenoid_cousin(0.5)
    assert cat.type_label == "O(-2,-2)", cat.type_label
    ta = cat.total_absolute_curvature()
    assert close(ta["ta_over_4pi"], 0.5, 1e-6), ta
    assert close(ta["ta"], cat.gauss_bonnet_ta(), 1e-6)

    horo = cmc1.Family.horosphere()
    assert horo.flat and horo.total_absolute_curvature()["ta"] == 0.0

    z = complex(0.7, 0.4)
    assert close(abs(cat.gauss_map(z) - z**0.5), 0.0, 1e-12)
    mp = cat.metric_product(z)
    assert mp["residual"] <= 1e-12 and mp["positive"], mp
    assert cat.schwarzian(z)["residual"] <= 1e-5

    warped = cmc1.Family.warped_catenoid(2, 1, 0.5)
    mesh = warped.mesh(nr=8, ntheta=16, closed_form=True)
    assert len(mesh) == 8 * 17
    assert all(x * x + y * y + w * w < 1.0 for x, y, w in mesh.vertices)
    assert all(max(f) < len(mesh) for f in mesh.faces)
    survey = mesh.curvature_survey(count=20)
    assert survey["diagnostics"]["mean_curvature_max_err"] <= 1e-3, survey["diagnostics"]
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "warped.obj")
        mesh.write_obj(path)
        with open(path) as fh:
            assert sum(1 for line in fh if line.startswith("v ")) == len(mesh)

    table = cmc1.classify_table("4pi")
    assert table.splitlines()[1].startswith("O(0)"), table
    rejected = [b for b in cmc1.classify()["branches"] if b["rule"]]
    assert rejected and all(b["reason"] for b in rejected)

    for kind in ("trig", "product", "odd-product"):
        assert cmc1.fuzz_su2(kind, 2000)["violations"] == 0

    sweep = cmc1.threenoid_sweep(200)
    assert sweep["contradictions"] == sweep["cases"] == 200
    assert close(cmc1.odd_ends_bound_ta(3), 4 * math.pi, 1e-15)

    mu = 0.4
    theta = (mu * mu - 1) / 4
    lt = cmc1.log_term(mu, theta)
    assert lt["m"] == 1 and lt["coefficient"] == [-theta, 0.0], lt

    try:
        cmc1.Family.catenoid_cousin(1.0)
    except ValueError as e:
        assert "mu" in str(e)
    else:
        raise AssertionError("mu = 1 accepted")

    print("cmc1 smoke test ok")


if __name__ == "__main__":
    main()
