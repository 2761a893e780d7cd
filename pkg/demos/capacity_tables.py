"""Tabulate covering bounds, rate schedules, and the oracle inequality."""

from distreg import (
    HypothesisSpaceSpec,
    TheoryConstants,
    covering_bound,
    oracle_rhs,
    rate_schedule,
)

# a configuration whose derived constants are all positive
TC = TheoryConstants(d=1, q=1, R=1.0, M=0.01, beta=1.0, B_G=1.0, B_Q=1.0, f_sem=1.0, g_lip=1.0)


def main():
    print(f"capacity: n_q={TC.n_q} T1={TC.T1:.0f} T2={TC.T2:.0f} R_hat={TC.R_hat:.0f} C1={TC.C1}")

    print("\nlog covering bound, d=q=1, R=1")
    print(f"{'N':>3} " + " ".join(f"{f'eps={e}':>12}" for e in (0.5, 0.1, 0.02)))
    for N in (1, 2, 4, 8):
        spec = HypothesisSpaceSpec(R=1.0, N=N)
        row = [covering_bound(spec, 1, 1, e).value for e in (0.5, 0.1, 0.02)]
        print(f"{N:>3} " + " ".join(f"{v:>12.2f}" for v in row))

    # the exact schedule constants are astronomically conservative, so a
    # desk-scale table uses unit multipliers
    print("\nrate schedule with unit multipliers, beta=1")
    print(f"{'m':>6} {'N':>4} {'n_min':>10} {'restriction':>12}")
    for m in (64, 256, 1024, 4096):
        sched = rate_schedule(m, 1.0, TC, A4=0.9, A5=1e-18, A6=50.0)
        print(f"{m:>6} {sched.N:>4} {sched.n_min:>10} {str(sched.restriction_ok):>12}")

    print("\noracle inequality right-hand side (confidence mass <= 3)")
    for m, n in ((100, 10**9), (1000, 10**12), (10**6, 10**15)):
        rhs = oracle_rhs(m, n, 1, 0.01, TC, h_norm=1.0, h_dist=0.1)
        print(f"  m={m:<8} n={n:.0e}  rhs={rhs:.6g}")


if __name__ == "__main__":
    main()
