"""Smoke test for the `canoma` extension module.

Build and install the module first:

    pip install maturin
    cd crates/python && maturin develop --release

then run `python python/smoke_test.py`.
"""

import math

import canoma


def close(x, y, tol):
    return abs(x - y) <= tol


def main():
    p = canoma.SystemParams(snr_db=20.0, beta=2.0, rate=2.0)
    assert close(p.snr, 100.0, 1e-9)
    assert close(p.balanced_split, 0.2, 1e-15)
    assert close(p.sic_limit, 0.25, 1e-15)

    b1, b2, b21 = p.thresholds(0.2)
    assert close(b1, 0.0375, 1e-12) and close(b2, 0.15, 1e-12) and close(b21, 0.15, 1e-12)
    assert p.thresholds(0.3)[2] is None
    assert "infeasible" in p.feasibility(0.3)

    ca = p.union_outage(0.2, "CA-NOMA")
    assert close(ca, 1 + math.exp(-0.15) - 2 * math.exp(-0.09375), 1e-15)
    assert close(p.union_outage(scheme="OMA"), 1 - math.exp(-0.15), 1e-15)
    assert p.union_outage(0.5) == 1.0

    b = p.breakdown(0.2, "ca-noma")
    assert b.source == "analytic" and close(b.p_union, ca, 0)

    est = p.estimate_outage(0.2, "CA-NOMA", 200_000, seed=7, n_streams=4)
    assert est.source == "empirical"
    assert abs(est.p_union - ca) <= 3 * est.se_union, est
    again = p.estimate_outage(0.2, "CA-NOMA", 200_000, seed=7, n_streams=1)
    assert again.p_union == est.p_union

    m = canoma.SystemParams(snr_db=30.0).a_min_closed_form()
    assert close(m.a, 0.1062, 5e-4) and not m.clamped
    assert close(p.a_min_numeric(), 0.1931956, 1e-5)
    assert close(p.a_star_noma(), 0.1012222, 1e-5)

    pairs = p.sample_pairs(1000, seed=3)
    assert len(pairs) == 1000 and all(g1 <= g2 for g1, g2 in pairs)
    assert pairs == p.sample_pairs(1000, seed=3)

    report, csv_text = canoma.run_experiment("eval", {"samples": 0})
    assert "b21 = 0.15" in report
    assert csv_text.splitlines()[0] == "scheme,a,snr_db,beta,rate_bps_hz,p_analytic,p_empirical,se,n_samples,seed"

    _, rows = canoma.run_experiment("sweep-a", {"samples": 1000, "grid_points": 3, "seed": 5})
    lines = rows.splitlines()
    assert len(lines) == 4
    assert lines[1].split(",")[-1] == str(canoma.point_seed(5, 0))

    for bad in (lambda: p.thresholds(1.5), lambda: canoma.SystemParams(beta=-1.0), lambda: p.union_outage(0.2, "TDMA")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("canoma", canoma.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
