"""Smoke tests for the python module: exact closed-form anchors and a small
deterministic simulation. Runs standalone (python3 test_smoke.py) or under
pytest."""

import math

import whkernel as wk


def approx(a, b, tol=1e-10):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def test_distributions():
    d = wk.ServiceDistribution.exponential(2.0)
    approx(d.lst(0.0), 1.0, 1e-14)
    approx(d.lst(2.0), 0.5, 1e-14)
    approx(d.mean(), 0.5, 1e-14)
    e = wk.ServiceDistribution.erlang(2, 3.0)
    approx(e.lst(1.0), 0.5625, 1e-14)
    num, den = e.rational_form()
    approx(num[0], 9.0, 1e-12)
    approx(den[2], 1.0, 1e-12)
    h = wk.ServiceDistribution({"type": "hyperexp", "p": [0.5, 0.5], "mu": [1.0, 2.0]})
    approx(h.mean(), 0.75, 1e-13)


def test_constant_rate_queue():
    sol = wk.solve_queue(1.0, 2.0, wk.ServiceDistribution.exponential(2.0))
    delta = 0.5 * (1.0 + math.sqrt(17.0))
    approx(sol.delta, delta, 1e-12)
    approx(sol.A, 0.25 * delta * delta, 1e-12)
    approx(sol.phi_minus0() + sol.phi_plus0(), 1.0, 1e-12)
    approx(sol.v_minus(0.0), sol.A, 1e-12)


def test_insurance():
    sol = wk.solve_insurance(1.0, 1.0, 2.0, wk.ServiceDistribution.exponential(2.0))
    approx(sol.u_plus0(), 0.3596117967977924, 1e-12)
    approx(sol.psi_minus0(), 0.25, 1e-13)
    approx(1.0 - sol.u_plus(1.0), wk.ai_survival_hat(sol, 1.0), 1e-8)


def test_linear_rate():
    model = wk.classify(1.0, 2.0, 1.0)
    assert model.integer_sigma and model.K == 2
    ap = wk.series_solve(model)
    dr = wk.direct_solve(model)
    approx(ap.r1, dr.r1(), 1e-8)
    assert dr.route == "hermite-even"
    assert ap.v_minus_integer(0.5) > 0.0
    half = wk.series_solve(wk.classify(1.0, 2.0, 4.0))
    approx(half.phi_minus0() + half.r1 / 1.0, 1.0, 1e-10)


def test_special_functions():
    approx(wk.hermite(3, 2.0), 2.0, 1e-13)
    approx(wk.kummer_m(-0.5, 0.5, 0.0), 1.0, 1e-14)
    approx(wk.kummer_u(-1.0, 0.5, 3.0), 2.5, 1e-11)


def test_simulation_deterministic():
    cfg = wk.SimConfig()
    cfg.seed = 7
    cfg.replications = 4
    cfg.time_total = 5000.0
    cfg.burn_in = 200.0
    dist = wk.ServiceDistribution.exponential(2.0)
    a = wk.simulate_workload(1.0, dist, "constant", 2.0, cfg)
    b = wk.simulate_workload(1.0, dist, "constant", 2.0, cfg)
    assert a.phi_minus_hat == b.phi_minus_hat
    assert abs(a.phi_minus_hat - 0.6403882) < 6.0 * a.phi_minus_se

    cfg.paths = 20000
    est = wk.simulate_bankruptcy(1.0, 1.0, "constant", 2.0, dist, 0.0, cfg)
    assert abs(est.p_bankrupt - 0.3596118) < 5.0 * est.se + est.eps_tail


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except AssertionError as exc:
                print(f"FAIL {name}: {exc}")
                failures += 1
    raise SystemExit(1 if failures else 0)
