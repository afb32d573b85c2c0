"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Reference values are the tabulated design points for the reference codes
and ensembles; tolerances are fixed here, not tuned.  The two irregular
ensemble checks (ENSEMBLE-I/II) assert externally reported thresholds
that this solver does not reproduce; see the project notes for the
analysis.  They are intentionally left failing rather than loosened.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from gldpc.codes import (
    bd_profile,
    decoding_profile,
    family_profile,
    hamming_rate_bound,
    nu_hat,
    registry_get,
    varshamov_rate_bound,
)
from gldpc.de import bd_threshold, de_run, de_threshold, punctured_threshold
from gldpc.ensemble import EnsembleSpec, apply_channel, ensemble_rate, sample_graph
from gldpc.peeling import BDPD, PPD, ber_monte_carlo, decode, decoder_kind

from _helpers import mean_trace_deviation


def report(criterion, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion} failed: {detail}"


# --------------------------------------------------------------------------
# Decoding profiles against the tabulated fractions, with an independent
# enumeration oracle (numpy elimination, H derived by numpy RREF).
# --------------------------------------------------------------------------

def _np_rref_null_space(g_rows):
    a = np.array(g_rows, dtype=np.uint8)
    m, n = a.shape
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i, col]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(m):
            if i != r and a[i, col]:
                a[i] ^= a[r]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for bi, f in enumerate(free):
        basis[bi, f] = 1
        for i, p in enumerate(pivots):
            basis[bi, p] = a[i, f]
    return basis


def _np_rank(a):
    a = a.copy()
    m, n = a.shape
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i, col]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(r + 1, m):
            if a[i, col]:
                a[i] ^= a[r]
        r += 1
    return r


def _oracle_profile(code):
    h = _np_rref_null_space(code.generator.to_lists())
    K = code.K
    out = []
    for w in range(1, K + 1):
        if w > h.shape[0]:
            out.append(Fraction(0))
            continue
        good = sum(
            1
            for cols in itertools.combinations(range(K), w)
            if _np_rank(h[:, cols].T) == w
        )
        out.append(Fraction(good, math.comb(K, w)))
    return out


TABLE_II = {
    "R-I": (3, Fraction(4, 5), Fraction(0)),
    "R-II": (4, Fraction(4, 5), Fraction(0)),
    "R-III": (3, Fraction(28, 35), Fraction(0)),
    "R-IV": (4, Fraction(4, 5), Fraction(0)),
    "R-V": (4, Fraction(4, 5), Fraction(0)),
    "R-VI": (4, Fraction(64, 70), Fraction(32, 56)),
    "R-VII": (5, Fraction(54, 56), Fraction(21, 28)),
    "R-VIII": (3, Fraction(420, 455), Fraction(840, 1365)),
    "R-IX": (4, Fraction(12, 13), Fraction(8, 13)),
}


def test_acceptance_profiles_match_table():
    worst = ""
    ok = True
    for name, (d, p_d, p_d1) in TABLE_II.items():
        code = registry_get(name)
        prof = decoding_profile(code)
        oracle = _oracle_profile(code)
        if list(prof.exact) != oracle:
            ok, worst = False, f"{name}: profile disagrees with oracle"
            break
        if code.d != d or prof.exact[d - 1] != p_d or (d < code.K and prof.exact[d] != p_d1):
            ok, worst = False, f"{name}: computed {prof.exact[d-1:d+1]} want {p_d},{p_d1}"
            break
        if any(f != 1 for f in prof.exact[: d - 1]) or any(f != 0 for f in prof.exact[d + 1:]):
            ok, worst = False, f"{name}: profile not of the (d, d+1) form"
            break
    report("PROFILES-TABLE-II", ok, worst or "all nine codes match exactly as fractions")


def test_acceptance_headline_thresholds():
    spec = EnsembleSpec.regular(2, 7, 1.0, "R-III")
    ppd = de_threshold(spec).epsilon_star
    bd = bd_threshold(spec).epsilon_star
    ok = abs(ppd - 0.7025) <= 0.005 and abs(bd - 0.5135) <= 0.005
    report("HEADLINE-2-7", ok, f"ppd={ppd:.4f} (ref 0.7025), bd={bd:.4f} (ref 0.5135)")


TABLE_I = {6: 0.206, 7: 0.167, 8: 0.147, 15: 0.071}


def test_acceptance_table1_base_thresholds():
    details = []
    ok = True
    for K, ref in TABLE_I.items():
        spec = EnsembleSpec.regular(2, K, 0.0, None)
        thr = de_threshold(spec).epsilon_star
        cap = min(1.0 / (K - 1) + 0.01, 1.0)
        ok = ok and abs(thr - ref) <= 0.01 and thr <= cap
        details.append(f"(2,{K})={thr:.4f} (ref {ref})")
    report("TABLE-I", ok, "; ".join(details))


TABLE_IV = {
    0.8: (0.768, 0.0987),
    0.875: (0.788, 0.1287),
    0.9: (0.792, 0.1413),
    0.925: (0.797, 0.1530),
    0.95: (0.801, 0.1657),
    0.975: (0.806, 0.1773),
    1.0: (0.809, 0.1910),
}


def test_acceptance_table4_thresholds_and_gaps():
    details = []
    ok = True
    for nu, (ref_thr, ref_gap) in TABLE_IV.items():
        spec = EnsembleSpec.regular(2, 6, nu, "R-I")
        thr = de_threshold(spec).epsilon_star
        gap = 1.0 - ensemble_rate(spec, allow_infeasible=True) - thr
        ok = ok and abs(thr - ref_thr) <= 0.005 and abs(gap - ref_gap) <= 0.005
        details.append(f"nu={nu}: eps*={thr:.4f}/{ref_thr} gap={gap:.4f}/{ref_gap}")
    report("TABLE-IV", ok, "; ".join(details))


ENSEMBLE_I = EnsembleSpec(
    lam=((2, 0.2), (3, 0.7118), (5, 0.0882)),
    rho_p=((7, 1.0 - 0.6719),),
    rho_c=((7, 0.6719),),
    nu=0.6719,
    component=registry_get("R-III"),
)
ENSEMBLE_II = EnsembleSpec(
    lam=((3, 0.80), (6, 0.01), (8, 0.01), (10, 0.18)),
    rho_p=((15, 0.60),),
    rho_c=((15, 0.40),),
    nu=0.40,
    component=registry_get("R-VIII"),
)


def test_acceptance_irregular_ensemble_one():
    thr = de_threshold(ENSEMBLE_I, profile=family_profile(7, 3, 0.8, 0.0)).epsilon_star
    ok = abs(thr - 0.540) <= 0.005
    report("ENSEMBLE-I", ok, f"eps*={thr:.4f} (externally reported 0.540)")


def test_acceptance_irregular_ensemble_two():
    thr = de_threshold(ENSEMBLE_II).epsilon_star
    ok = abs(thr - 0.466) <= 0.005
    report("ENSEMBLE-II", ok, f"eps*={thr:.4f} (externally reported 0.466)")


def test_acceptance_lemma2_coincidence():
    ok = True
    for K in (7, 15):
        r0 = 1.0 - 2.0 / K
        for i in range(21):
            nu = i * 0.05
            if hamming_rate_bound(r0, nu, 3, K) != varshamov_rate_bound(r0, nu, 3, K):
                ok = False
    report("LEMMA2-COINCIDENCE", ok, "exact equality on the 0.05 grid for K=7 and K=15")


def _ci(bers):
    m = float(np.mean(bers))
    se = float(np.std(bers, ddof=1) / np.sqrt(len(bers))) if len(bers) > 1 else 0.0
    return m - 1.96 * se, m + 1.96 * se


def test_acceptance_ppd_matches_mlpd():
    n, trials = 10_000, 10
    ok = True
    details = []
    for J, K, comp in ((2, 6, "R-I"), (2, 8, "R-V")):
        spec = EnsembleSpec.regular(J, K, 1.0, comp)
        center = de_threshold(spec, tol=1e-3).epsilon_star
        grid = [round(float(x), 4) for x in np.linspace(center - 0.07, center + 0.07, 8)]
        per_eps_ppd = {eps: [] for eps in grid}
        per_eps_ml = {eps: [] for eps in grid}
        for i, eps in enumerate(grid):
            for t in range(trials):
                ss = np.random.SeedSequence(entropy=(77, i, t))
                s_graph, s_chan, s_dec = ss.spawn(3)
                g = sample_graph(spec, n, s_graph)
                pat = apply_channel(g, eps, 0.0, s_chan)
                for name, bucket in (("ppd", per_eps_ppd), ("mlpd", per_eps_ml)):
                    res = decode(g, pat, decoder_kind(name, spec), seed=s_dec,
                                 record_trace=False)
                    bucket[eps].append(res.unresolved_transmitted_bits / res.transmitted_bits)
        for eps in grid:
            lo1, hi1 = _ci(per_eps_ppd[eps])
            lo2, hi2 = _ci(per_eps_ml[eps])
            if not (lo1 <= hi2 and lo2 <= hi1):
                ok = False
                details.append(f"({J},{K}) eps={eps}: CIs disjoint")
        details.append(f"({J},{K}) waterfall around {center:.3f}: CIs overlap at 8 points")
    report("PPD-VS-MLPD", ok, "; ".join(details))


def test_acceptance_concentration():
    spec = EnsembleSpec.regular(2, 6, 0.5, "R-I")
    eps_star = de_threshold(spec, tol=1e-3).epsilon_star
    eps = eps_star - 0.05
    run = de_run(spec, eps)
    traces = []
    for seed in range(20):
        ss = np.random.SeedSequence(entropy=(1234, seed))
        s_graph, s_chan, s_dec = ss.spawn(3)
        g = sample_graph(spec, 100_000, s_graph)
        pat = apply_channel(g, eps, 0.0, s_chan)
        traces.append(decode(g, pat, decoder_kind("ppd", spec), seed=s_dec).trace)
    dev = mean_trace_deviation(traces, run.trajectory)
    report("CONCENTRATION", dev <= 0.01,
           f"sup deviation {dev:.5f} at eps={eps:.4f} over 20 seeds, n=1e5")


def test_acceptance_puncturing():
    base = EnsembleSpec.regular(2, 6, 0.8, "R-I")
    rate0 = ensemble_rate(base)
    ok = True
    details = []
    for xi in (0.1, 0.3, 0.5):
        spec = EnsembleSpec.regular(2, 6, 0.8, "R-I", xi=xi)
        thr = de_threshold(spec).epsilon_star
        ref = punctured_threshold(0.768, xi)
        rate = ensemble_rate(spec)
        ok = ok and abs(thr - ref) <= 0.005 and rate == pytest.approx(rate0 / (1 - xi), rel=1e-12)
        details.append(f"xi={xi}: de={thr:.4f} formula={ref:.4f}")
    report("PUNCTURING", ok, "; ".join(details))


def test_acceptance_dg_gap():
    # baseline: no generalized variables, minimum gap at nu=0
    gaps0 = {}
    for nu in (0.0, 0.1, 0.2, 0.3, 0.4, 0.5):
        spec = EnsembleSpec.regular(3, 6, nu, "R-I")
        thr = de_threshold(spec).epsilon_star
        gaps0[nu] = 1.0 - ensemble_rate(spec, allow_infeasible=True) - thr
    base_ok = abs(gaps0[0.0] - 0.0710) <= 0.005 and min(gaps0, key=gaps0.get) == 0.0
    # beta = 0.3 sweep over the mixed region (0.05 grid, feasible rates only)
    gaps = {}
    nu = 0.05
    while nu <= 0.601:
        spec = EnsembleSpec.regular(3, 6, round(nu, 4), "R-I", beta=0.3)
        rate = ensemble_rate(spec, allow_infeasible=True)
        if rate > 0:
            thr = de_threshold(spec).epsilon_star
            gaps[round(nu, 4)] = 1.0 - rate - thr
        nu += 0.05
    best_nu = min(gaps, key=gaps.get)
    dg_ok = abs(gaps[best_nu] - 0.0592) <= 0.005 and 0.05 < best_nu < 0.6
    report("DG-GAP", base_ok and dg_ok,
           f"beta=0: gap(0)={gaps0[0.0]:.4f} (ref 0.0710); "
           f"beta=0.3: min gap {gaps[best_nu]:.4f} at nu={best_nu} (ref 0.0592)")


def test_acceptance_bd_ppd_equivalence():
    spec = EnsembleSpec.regular(2, 6, 0.8, "R-I")
    comp = spec.component
    rng = np.random.default_rng(2718)
    ok = True
    for _ in range(100):
        g = sample_graph(spec, 1200, seed=int(rng.integers(1 << 30)))
        pat = apply_channel(g, float(rng.uniform(0.3, 0.9)), 0.0,
                            seed=int(rng.integers(1 << 30)))
        dseed = int(rng.integers(1 << 30))
        r_bd = decode(g, pat, BDPD(comp.d), seed=dseed)
        r_pp = decode(g, pat, PPD(bd_profile(comp.K, comp.d)), seed=dseed)
        same = (
            r_bd.success == r_pp.success
            and r_bd.iterations == r_pp.iterations
            and np.array_equal(r_bd.residual_vars, r_pp.residual_vars)
            and np.array_equal(r_bd.trace.e, r_pp.trace.e)
            and np.array_equal(r_bd.trace.r_hat, r_pp.trace.r_hat)
            and np.array_equal(r_bd.trace.r_bar, r_pp.trace.r_bar)
            and np.array_equal(r_bd.trace.l, r_pp.trace.l)
        )
        ok = ok and same
    report("BD-PPD-EQUIVALENCE", ok, "identical outcomes and traces on 100 random triples")


def test_acceptance_nu_hat_boundary():
    report("NU-HAT-K6", nu_hat(6) == pytest.approx(0.8), "nu_hat(6) = 0.8")


def test_acceptance_ber_sanity_below_waterfall():
    spec = EnsembleSpec.regular(2, 6, 1.0, "R-I")
    rows = ber_monte_carlo(spec, 10_000, [0.65], trials=10, decoder="ppd", master_seed=3)
    report("BER-BELOW-WATERFALL", rows[0]["ber"] <= 1e-3,
           f"BER={rows[0]['ber']:.2e} at eps=0.65 (threshold ~0.81)")
