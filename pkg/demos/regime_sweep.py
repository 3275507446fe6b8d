"""Classify the stiff limit eps -> 0 from simulation sweeps alone.

For three exponent pairs the sign of 1 + gamma - beta predicts which
singular quantity survives the limit: the pressure, the transported memory
field, or both.  A sweep over eps plus log-log rate fits recovers the
prediction numerically.  Scaled-down version of the acceptance sweeps
(n = 128, shorter horizon) so it finishes in about a minute.
"""

from brinkflow import (
    LawParams, RunConfig, classify_limit, fit_rate, regime, sweep,
)

EPS = [1e-1, 1e-2, 1e-3, 1e-4]


def one_case(gamma, beta, f0):
    cfg = RunConfig(
        dim=1, n=128, t_end=0.5, epsilon=EPS[0], gamma=gamma, beta=beta,
        scenario="compression", scenario_params={"rho0": 0.6, "f0": f0},
    )
    params = LawParams(epsilon=1e-2, delta=0.0, gamma=gamma, beta=beta)
    print(f"\n== gamma = {gamma}, beta = {beta}  "
          f"(theory: {regime(params).value}) ==")
    table = sweep(cfg, "epsilon", EPS)
    for name in ("L1_p", "L1_big_lam", "excl_p", "excl_big_lam"):
        fit = fit_rate(table, name, drop_nonpositive=True)
        print(f"  slope[{name:<13}] = {fit.slope:+.3f}  (r^2 = {fit.r_squared:.4f})")
    mp = max(r.metrics["max_mp_residual"] for r in table.ok_rows())
    print(f"  max mp_residual over all runs/steps = {mp:.2e}")
    result = classify_limit(table, params)
    print(f"  verdict: {result.summary()}")


def main():
    one_case(3.0, 2.0, 200.0)   # pressure survives
    one_case(1.5, 3.0, 200.0)   # memory survives
    one_case(2.0, 3.0, 600.0)   # both survive, algebraically tied


if __name__ == "__main__":
    main()
