"""Density evolution for peeling decoding, thresholds, and analytic bounds.

The residual degree distribution of the decoder concentrates (in the
blocklength) around the solution of a system of ODEs in the normalized
iteration time tau.  State layout, as one flat vector:

    [ left | r_p(1..K) | r_hat(1..K) | r_bar(1..K) ]

where `left` is l_i for i = 1..J on plain graphs and (l_r2, l_r3, l_g3)
when generalized variables are present.  r_hat (r_bar) tracks edges into
generalized check nodes currently tagged resolvable (not resolvable); the
split is carried for every degree, which reduces to the usual
(d, d+1)-window system when the profile vanishes above d+1 and handles
arbitrary profiles unchanged.

Writing M = P_p1 + sum_w w P_cw for the mean variables removed per
iteration and g = (a-1) M / e, the derivative families are

    dl_i    = -i l_i M / e
    dr_pj   = (r_p(j+1) - r_pj) j g            - P_p1 [j = 1]
    dr^_cj  = (p_j rbar_(j+1) + rhat_(j+1) - rhat_j) j g - j P_cj
    dr~_cj  = ((1 - p_j) rbar_(j+1) - rbar_j) j g

with selection probabilities P_p1 = r_p1/s, P_cj = (rhat_j/j)/s and
s = r_p1 + sum_j rhat_j/j.  The removed node's own edges are counted once,
in the tagged family (the resolvable node being removed is tagged); this
keeps sum(left) - sum(right) exactly conserved, which is asserted at
every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import DecodingProfile, bd_profile
from .ensemble import EnsembleSpec
from .errors import NumericalInstabilityError

DELTA_E = 1e-7  # residual edge mass below which the graph counts as exhausted
DELTA_S = 1e-9  # resolvable mass below which the decoder counts as stalled


@dataclass(frozen=True)
class StepControl:
    dt: float = 1e-4
    delta_e: float = DELTA_E
    delta_s: float = DELTA_S
    tau_max: float = 1.5
    record_every: int = 1


@dataclass
class DETrajectory:
    left_keys: tuple
    K: int
    d: int
    tau: np.ndarray
    e: np.ndarray
    s: np.ndarray
    left: np.ndarray
    r_p: np.ndarray
    r_hat: np.ndarray
    r_bar: np.ndarray

    @property
    def r_c(self) -> np.ndarray:
        return self.r_hat + self.r_bar

    def column_names(self) -> list[str]:
        names = ["tau", "e", "s"]
        names += [f"l_{k}" for k in self.left_keys]
        names += [f"r_p{j}" for j in range(1, self.K + 1)]
        names += [f"r_c{j}" for j in range(1, self.K + 1)]
        d0 = min(self.d, self.K)
        d1 = min(self.d + 1, self.K)
        names += [f"rhat_c{d0}", f"rbar_c{d0}", f"rhat_c{d1}", f"rbar_c{d1}"]
        return names

    def to_csv(self, header_lines=()) -> str:
        import io

        out = io.StringIO()
        for line in header_lines:
            out.write(f"# {line}\n")
        out.write(",".join(self.column_names()) + "\n")
        d0 = min(self.d, self.K) - 1
        d1 = min(self.d + 1, self.K) - 1
        rc = self.r_c
        fmt = lambda x: format(x, ".10g")
        for t in range(len(self.tau)):
            row = [fmt(self.tau[t]), fmt(self.e[t]), fmt(self.s[t])]
            row += [fmt(x) for x in self.left[t]]
            row += [fmt(x) for x in self.r_p[t]]
            row += [fmt(x) for x in rc[t]]
            row += [fmt(self.r_hat[t, d0]), fmt(self.r_bar[t, d0]),
                    fmt(self.r_hat[t, d1]), fmt(self.r_bar[t, d1])]
            out.write(",".join(row) + "\n")
        return out.getvalue()


@dataclass
class DERun:
    decodes: bool
    trajectory: DETrajectory | None


class _System:
    """Frozen coefficients of the ODE system for one (spec, profile) pair."""

    def __init__(self, spec: EnsembleSpec, profile: DecodingProfile | None, d: int | None):
        self.spec = spec
        self.K = spec.max_check_degree
        self.dg = spec.beta > 0.0
        if profile is None:
            if spec.component is not None:
                profile = spec.profile().truncated(spec.component.d)
            else:
                profile = DecodingProfile(self.K, (0.0,) * self.K)
        self.profile = profile
        self.d = d if d is not None else (
            spec.component.d if spec.component is not None else profile.d
        )
        self.p = np.array([profile.pw(j) for j in range(1, self.K + 1)])
        self.jarr = np.arange(1, self.K + 1, dtype=float)
        if self.dg:
            self.left_keys = ("r2", "r3", "g3")
            self.nl = 3
            self.iarr = None
        else:
            self.left_keys = tuple(range(1, spec.max_var_degree + 1))
            self.nl = spec.max_var_degree
            self.iarr = np.arange(1, self.nl + 1, dtype=float)

    def initial(self, eps: float) -> np.ndarray:
        spec = self.spec
        eps_eff = spec.xi + (1.0 - spec.xi) * eps  # punctured bits are erased bits
        K = self.K
        if self.dg:
            beta = spec.beta
            left = np.array([
                4.0 * beta * eps_eff * (1.0 - eps_eff) / 3.0,  # l_r2
                eps_eff * (1.0 - beta),                        # l_r3
                beta * eps_eff**2,                             # l_g3
            ])
            eps_right = eps_eff * (1.0 + beta * (1.0 - eps_eff) / 3.0)
        else:
            lam = np.zeros(self.nl)
            for deg, frac in spec.lam:
                lam[deg - 1] = frac
            left = eps_eff * lam
            eps_right = eps_eff
        rp = np.zeros(K)
        rc = np.zeros(K)
        for alpha, frac in spec.rho_p:
            for j in range(1, alpha + 1):
                rp[j - 1] += frac * math.comb(alpha - 1, j - 1) * eps_right**j * (
                    1.0 - eps_right) ** (alpha - j)
        for alpha, frac in spec.rho_c:
            for j in range(1, alpha + 1):
                rc[j - 1] += frac * math.comb(alpha - 1, j - 1) * eps_right**j * (
                    1.0 - eps_right) ** (alpha - j)
        return np.concatenate([left, rp, self.p * rc, (1.0 - self.p) * rc])

    def split(self, x: np.ndarray):
        nl, K = self.nl, self.K
        return x[:nl], x[nl:nl + K], x[nl + K:nl + 2 * K], x[nl + 2 * K:]

    def e_of(self, x: np.ndarray) -> float:
        return float(x[:self.nl].sum())

    def s_of(self, x: np.ndarray) -> float:
        left, rp, rhat, _ = self.split(x)
        return float(rp[0] + (rhat / self.jarr).sum())

    def rhs(self, x: np.ndarray) -> np.ndarray:
        left, rp, rhat, rbar = self.split(x)
        e = left.sum()
        if e <= 0.0:
            return np.zeros_like(x)
        s = rp[0] + (rhat / self.jarr).sum()
        if s <= 0.0:
            return np.zeros_like(x)  # stalled decoder: frozen state
        if self.dg:
            a = (2.0 * left[0] + 3.0 * left[1] + left[2]) / e
        else:
            a = (self.iarr * left).sum() / e
        pp1 = rp[0] / s
        pc = (rhat / self.jarr) / s
        m = pp1 + (self.jarr * pc).sum()
        g = (a - 1.0) / e * m
        rp_next = np.empty_like(rp)
        rp_next[:-1] = rp[1:]
        rp_next[-1] = 0.0
        rhat_next = np.empty_like(rhat)
        rhat_next[:-1] = rhat[1:]
        rhat_next[-1] = 0.0
        rbar_next = np.empty_like(rbar)
        rbar_next[:-1] = rbar[1:]
        rbar_next[-1] = 0.0
        drp = (rp_next - rp) * self.jarr * g
        drp[0] -= pp1
        drhat = (self.p * rbar_next + rhat_next - rhat) * self.jarr * g - self.jarr * pc
        drbar = ((1.0 - self.p) * rbar_next - rbar) * self.jarr * g
        if self.dg:
            dleft = np.array([
                2.0 * (left[2] - left[0]) / e * m,
                -3.0 * left[1] / e * m,
                -3.0 * left[2] / e * m,
            ])
        else:
            dleft = -(self.iarr * left) / e * m
        return np.concatenate([dleft, drp, drhat, drbar])


def de_initial(spec: EnsembleSpec, eps: float,
               profile: DecodingProfile | None = None, d: int | None = None) -> np.ndarray:
    """Post-channel state of the ODE system (flat vector)."""
    return _System(spec, profile, d).initial(eps)


def de_rhs(spec: EnsembleSpec, state: np.ndarray,
           profile: DecodingProfile | None = None, d: int | None = None) -> np.ndarray:
    """Right-hand side at a given state (flat vector in, flat vector out)."""
    return _System(spec, profile, d).rhs(np.asarray(state, dtype=float))


def de_run(spec: EnsembleSpec, eps: float,
           profile: DecodingProfile | None = None, d: int | None = None,
           control: StepControl = StepControl(), record: bool = True) -> DERun:
    """Integrate until the graph empties (success) or the decoder stalls.

    Classical RK4 with a fixed base step, halved when a component would
    cross the negativity floor.  Edge conservation between the two sides
    is asserted at every accepted step.
    """
    sys = _System(spec, profile, d)
    x = sys.initial(eps)
    tau = 0.0
    rows_tau, rows = [], []
    nl = sys.nl
    step_i = 0

    def maybe_record():
        if record and step_i % control.record_every == 0:
            rows_tau.append(tau)
            rows.append(x.copy())

    maybe_record()
    decodes = None
    while True:
        e = sys.e_of(x)
        s = sys.s_of(x)
        if e < control.delta_e:
            decodes = True
            break
        if s < control.delta_s:
            decodes = False
            break
        if tau > control.tau_max:
            raise NumericalInstabilityError("integration horizon exceeded")
        h = control.dt
        while True:
            k1 = sys.rhs(x)
            k2 = sys.rhs(x + 0.5 * h * k1)
            k3 = sys.rhs(x + 0.5 * h * k2)
            k4 = sys.rhs(x + h * k3)
            xn = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if xn.min() >= -1e-12:
                break
            h *= 0.5
            if h < 1e-12:
                xn = np.maximum(xn, 0.0)
                break
        if np.isnan(xn).any():
            raise NumericalInstabilityError("NaN state at tau=%.6f" % tau)
        d_left = xn[:nl].sum() - x[:nl].sum()
        d_right = xn[nl:].sum() - x[nl:].sum()
        if abs(d_left - d_right) > 1e-8:
            raise NumericalInstabilityError(
                f"edge conservation violated by {d_left - d_right:.3e} at tau={tau:.6f}"
            )
        x = np.maximum(xn, 0.0)
        tau += h
        step_i += 1
        maybe_record()

    trajectory = None
    if record:
        arr = np.asarray(rows)
        K = sys.K
        trajectory = DETrajectory(
            left_keys=sys.left_keys, K=K, d=sys.d,
            tau=np.asarray(rows_tau),
            e=arr[:, :nl].sum(axis=1),
            s=arr[:, nl] + (arr[:, nl + K:nl + 2 * K] / sys.jarr).sum(axis=1),
            left=arr[:, :nl],
            r_p=arr[:, nl:nl + K],
            r_hat=arr[:, nl + K:nl + 2 * K],
            r_bar=arr[:, nl + 2 * K:],
        )
    return DERun(decodes=bool(decodes), trajectory=trajectory)


@dataclass(frozen=True)
class ThresholdResult:
    epsilon_star: float
    tol: float
    iterations: int


def de_threshold(spec: EnsembleSpec,
                 profile: DecodingProfile | None = None, d: int | None = None,
                 tol: float = 1e-4, control: StepControl = StepControl()) -> ThresholdResult:
    """Bisect the largest erasure probability the ensemble survives.

    Decodability is monotone in epsilon for these systems, so plain
    bisection over [0, 1] applies; the result is the bracket midpoint
    after the bracket width drops below tol.
    """
    if tol < 1e-6:
        raise ValueError("tol below 1e-6 exceeds the integrator's resolution")
    sys_profile = profile
    lo, hi = 0.0, 1.0
    iters = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if de_run(spec, mid, sys_profile, d, control=control, record=False).decodes:
            lo = mid
        else:
            hi = mid
        iters += 1
    return ThresholdResult(epsilon_star=0.5 * (lo + hi), tol=tol, iterations=iters)


def bd_threshold(spec: EnsembleSpec, tol: float = 1e-4,
                 control: StepControl = StepControl()) -> ThresholdResult:
    """Threshold under the distance rule only (profile zeroed at and above d)."""
    if spec.component is None:
        return de_threshold(spec, None, None, tol, control)
    comp = spec.component
    return de_threshold(spec, bd_profile(spec.max_check_degree, comp.d), comp.d, tol, control)


def sc_bound(spec: EnsembleSpec) -> tuple[float, float]:
    """Stability-condition upper bound on the threshold.

    Returns (raw, capped) where capped = min(raw, 1).  Infinite (and thus
    non-informative) when there are no degree-2 variables or no parity
    checks of degree >= 2.
    """
    lam2 = dict(spec.lam).get(2, 0.0)
    rho_p_prime = sum(f * (j - 1) for j, f in spec.rho_p if j >= 2)
    if lam2 <= 0.0 or rho_p_prime <= 0.0:
        return math.inf, 1.0
    raw = 1.0 / (lam2 * rho_p_prime)
    return raw, min(raw, 1.0)


def punctured_threshold(eps_star: float, xi: float) -> float:
    """Threshold after puncturing a fraction xi: 1 - (1 - eps*)/(1 - xi).

    Reports 0 when the puncturing exceeds what the unpunctured margin
    supports (the formula would go negative).
    """
    if not 0.0 <= xi < 1.0:
        raise ValueError("xi must lie in [0, 1)")
    return max(0.0, 1.0 - (1.0 - eps_star) / (1.0 - xi))
