"""The stabilisation / causality tradeoff of the regularised inverse.

The constrained scheme divides by the square root of the noise spectrum,
which vanishes beyond the hard cutoff; the regularised inverse replaces
the bare division and is controlled by gamma.  Small gamma lets the
noise amplitude blow up, large gamma leaks the cross-correlation to
negative lags.  This demo measures both ends of the tradeoff.
"""

import numpy as np

from slnoise import (
    BathParams,
    DivisionByZeroSpectrum,
    SchemeId,
    TimeGrid,
    build_kernel_table,
    estimate_correlations,
    make_filters,
    seed_for,
    synthesize,
)


def main():
    bath = BathParams(beta=1.0, omega_c=25.0)
    grid = TimeGrid(dt=0.01, t_max=10.0)
    table = build_kernel_table(grid.freq(), bath)

    # the unregularised inverse is rejected outright: the spectrum has
    # exact zeros beyond the cutoff
    try:
        make_filters(SchemeId.CONSTRAINED, table, gamma=0.0)
    except DivisionByZeroSpectrum as exc:
        print(f"gamma = 0 rejected: {exc}")
    print()

    print("mean |nu| over 100 realizations (smaller is tamer):")
    for gamma in (0.001, 0.01, 0.1):
        fs = make_filters(SchemeId.CONSTRAINED, table, gamma=gamma)
        vals = [np.mean(np.abs(synthesize(fs, grid, seed_for(5, i, ())).nu_t))
                for i in range(100)]
        print(f"  gamma = {gamma:<6}: {np.mean(vals):8.2f}")
    print()

    # leakage: estimate the cross-correlation at negative lags with
    # common random numbers against a nearly-unregularised reference, so
    # the finite-ensemble noise cancels and only the gamma effect remains
    def estimate(gamma, n=200):
        fs = make_filters(SchemeId.CONSTRAINED, table, gamma=gamma)
        pairs = [synthesize(fs, grid, seed_for(5, i, ())) for i in range(n)]
        return estimate_correlations(pairs, max_lag=0.5)

    ref = estimate(1e-6)
    neg = ref.lags < 0
    print("acausal leakage of the estimated cross-correlation:")
    for gamma in (0.001, 0.01, 0.1):
        est = estimate(gamma)
        leak = np.mean(np.abs(est.est_etanu[neg] - ref.est_etanu[neg]))
        print(f"  gamma = {gamma:<6}: {leak:.4f}")
    print("\nleakage grows with gamma while the amplitude shrinks; a")
    print("compromise value (0.01 here) must be chosen per application")


if __name__ == "__main__":
    main()
