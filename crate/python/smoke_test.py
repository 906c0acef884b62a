"""Smoke test for the goodrep_py extension module.

Build and install first, e.g. `maturin build --release -m crates/py/Cargo.toml`
followed by `pip install` of the wheel, then run `python3 python/smoke_test.py`.
"""

import goodrep_py as g


def main():
    f3 = g.Field("GF(3)")
    assert f3.order == 3 and f3.characteristic == 3
    assert f3.elements() == ["0", "1", "2"]
    assert f3.inv("2") == "2"

    gf9 = g.Field("GF(3^2;modulus=[2,2,1])")
    assert gf9.mul("[0,1]", "[0,1]") == "[1,1]"

    m = g.Matrix(f3, [["1", "2"], ["0", "1"]])
    assert m.det() == "1"
    assert (m @ m.inverse()).rows() == [["1", "0"], ["0", "1"]]

    rep, family = g.upper_triangular(2, f3)
    assert rep.dim == 3 and rep.group_order() == 12
    assert all(rep.is_invariant(s) for s in family)
    cert = g.verify_free(rep, family)
    assert cert["status"] == "verified", cert["status"]
    assert g.verify_free(rep, family[:1])["status"] == "refuted"
    assert g.verify_free(rep, family, mode="sample:30", seed=4)["status"] == "evidence"

    back = g.Representation.from_json(rep.to_json())
    assert back.dim == rep.dim

    v4 = g.sym_power_rep(f3, 4)
    l4 = g.Subspace(f3, 5, [["1", "0", "0", "0", "0"], ["0", "1", "0", "0", "0"],
                            ["0", "0", "0", "1", "0"], ["0", "0", "0", "0", "1"]])
    assert g.check_invariant(v4, [l4])["status"] == "verified"

    w1 = g.nt_witness("nt-blocks:{1:1};0;0")
    family_json = w1["payload"]["evidence"]["outcome"]["certificate"]["family"]
    assert family_json["limit"] == [["-1", "0"], ["-1", "0"]]

    d = g.descend("GF(3^2;modulus=[2,2,1])", samples=10)
    assert d["payload"]["evidence"]["det_A"]["direct"] == "[2,2]"
    assert d["status"] == "verified"

    ok, certs = g.run_suite("pgl2")
    assert ok and certs[0]["status"] == "verified"

    print("goodrep_py smoke test passed (version %s)" % g.__version__)


if __name__ == "__main__":
    main()
