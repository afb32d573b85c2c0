"""Ensemble specification, finite Tanner-graph sampling, and the erasure channel.

Degree distributions are edge-perspective: lambda_i is the fraction of
edges touching degree-i variable nodes, rho_pj / rho_cj the fractions
touching degree-j single-parity-check / generalized-constraint nodes.
Sampling follows the configuration model (uniform stub pairing) with a
swap-repair pass that removes double edges, a uniformly random subset of
check nodes marked as generalized, and a uniformly random assignment of
code positions to each generalized node's edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .codes import ComponentCode, DecodingProfile, decoding_profile, registry_get
from .errors import InfeasibleRateError

_NU_TOL = 1e-9


@dataclass(frozen=True)
class SyntheticComponent:
    """Profile-only component for density-evolution experiments.

    Carries no matrices, so it cannot back an ML peeling decoder; `k` is
    needed only when a design rate is requested.
    """

    name: str
    K: int
    d: int
    profile: DecodingProfile
    k: int | None = None


@dataclass(frozen=True)
class EnsembleSpec:
    lam: tuple[tuple[int, float], ...]  # (degree, edge fraction), ascending
    rho_p: tuple[tuple[int, float], ...]
    rho_c: tuple[tuple[int, float], ...]
    nu: float
    component: ComponentCode | SyntheticComponent | None = None
    beta: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        for name, dd in (("lambda", self.lam), ("rho_p", self.rho_p), ("rho_c", self.rho_c)):
            for deg, frac in dd:
                if deg < 1 or not 0.0 <= frac <= 1.0 + 1e-12:
                    raise ValueError(f"bad {name} entry ({deg}, {frac})")
        if abs(sum(f for _, f in self.lam) - 1.0) > 1e-9:
            raise ValueError("lambda fractions must sum to 1")
        rho_sum = sum(f for _, f in self.rho_p) + sum(f for _, f in self.rho_c)
        if abs(rho_sum - 1.0) > 1e-9:
            raise ValueError("rho_p + rho_c fractions must sum to 1")
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError("nu must lie in [0, 1]")
        if not 0.0 <= self.beta < 1.0:
            raise ValueError("beta must lie in [0, 1)")
        if not 0.0 <= self.xi < 1.0:
            raise ValueError("xi must lie in [0, 1)")
        # nu must agree with the edge fractions (node-count identity).
        denom = sum(f / d for d, f in self.rho_p) + sum(f / d for d, f in self.rho_c)
        nu_from_dd = sum(f / d for d, f in self.rho_c) / denom
        if abs(nu_from_dd - self.nu) > _NU_TOL:
            raise ValueError(f"nu={self.nu} inconsistent with rho (implies {nu_from_dd})")
        if self.nu > 0.0 and self.component is None:
            raise ValueError("generalized nodes present but no component code given")
        if self.component is not None and self.max_check_degree > self.component.K:
            raise ValueError("check degree exceeds component blocklength")
        if self.beta > 0.0 and (self.lam != ((3, 1.0),)):
            raise ValueError("generalized variable nodes require the regular J=3 base")

    # -- shorthand constructors ------------------------------------------------

    @classmethod
    def regular(cls, J: int, K: int, nu: float,
                component: ComponentCode | SyntheticComponent | str | None = None,
                beta: float = 0.0, xi: float = 0.0) -> "EnsembleSpec":
        if isinstance(component, str):
            component = registry_get(component)
        return cls(
            lam=((J, 1.0),),
            rho_p=((K, 1.0 - nu),) if nu < 1.0 else (),
            rho_c=((K, nu),) if nu > 0.0 else (),
            nu=nu,
            component=component,
            beta=beta,
            xi=xi,
        )

    @classmethod
    def from_json_dict(cls, obj: dict) -> "EnsembleSpec":
        comp = obj.get("component")
        if isinstance(comp, str):
            comp = registry_get(comp)
        elif isinstance(comp, dict):
            comp = ComponentCode.from_generator("user", comp["generator"])
        if "J" in obj:
            return cls.regular(
                int(obj["J"]), int(obj["K"]), float(obj["nu"]), comp,
                beta=float(obj.get("beta", 0.0)), xi=float(obj.get("xi", 0.0)),
            )
        as_pairs = lambda lst: tuple((int(e["degree"]), float(e["fraction"])) for e in lst)
        return cls(
            lam=as_pairs(obj["lambda"]),
            rho_p=as_pairs(obj.get("rho_p", [])),
            rho_c=as_pairs(obj.get("rho_c", [])),
            nu=float(obj["nu"]),
            component=comp,
            beta=float(obj.get("beta", 0.0)),
            xi=float(obj.get("xi", 0.0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "EnsembleSpec":
        return cls.from_json_dict(json.loads(text))

    def to_json_dict(self) -> dict:
        comp: object = None
        if isinstance(self.component, ComponentCode):
            comp = (self.component.name if self.component.name.startswith("R-")
                    else {"generator": self.component.generator.to_lists()})
        elif isinstance(self.component, SyntheticComponent):
            comp = {"name": self.component.name, "K": self.component.K,
                    "d": self.component.d, "profile": list(self.component.profile.p)}
        return {
            "lambda": [{"degree": d, "fraction": f} for d, f in self.lam],
            "rho_p": [{"degree": d, "fraction": f} for d, f in self.rho_p],
            "rho_c": [{"degree": d, "fraction": f} for d, f in self.rho_c],
            "nu": self.nu,
            "component": comp,
            "beta": self.beta,
            "xi": self.xi,
        }

    # -- derived quantities ----------------------------------------------------

    @property
    def max_var_degree(self) -> int:
        return max(d for d, _ in self.lam)

    @property
    def max_check_degree(self) -> int:
        return max(d for d, f in tuple(self.rho_p) + tuple(self.rho_c) if f > 0)

    @property
    def vars_per_edge(self) -> float:
        return sum(f / d for d, f in self.lam)

    @property
    def checks_per_edge(self) -> float:
        return sum(f / d for d, f in self.rho_p) + sum(f / d for d, f in self.rho_c)

    @property
    def base_rate(self) -> float:
        """Design rate of the nu=0 base ensemble, 1 - J/K in the regular case."""
        return 1.0 - self.checks_per_edge / self.vars_per_edge

    def profile(self) -> DecodingProfile:
        if isinstance(self.component, SyntheticComponent):
            return self.component.profile
        if isinstance(self.component, ComponentCode):
            return decoding_profile(self.component)
        raise ValueError("spec has no component code")


def ensemble_rate(spec: EnsembleSpec, allow_infeasible: bool = False) -> float:
    """Design rate with all three mechanisms composed.

    Plain:       R(nu)      = R0 - nu (1-R0)(k-1)
    With beta:   R(nu,beta) = 1 - (1-R0)(1 + (k-1) nu)/(1 + beta)
    Puncturing scales either by 1/(1-xi).
    """
    r0 = spec.base_rate
    if spec.nu == 0.0:
        k = 1
    else:
        comp = spec.component
        if comp is None or comp.k is None:
            raise ValueError("rate needs the component's parity-check row count")
        k = comp.k
    rate = 1.0 - (1.0 - r0) * (1.0 + (k - 1) * spec.nu) / (1.0 + spec.beta)
    rate /= 1.0 - spec.xi
    if rate <= 0.0 and not allow_infeasible:
        raise InfeasibleRateError(f"design rate {rate:.4f} <= 0")
    return rate


KIND_RV = 0
KIND_GV = 1


@dataclass
class TannerGraph:
    """Finite bipartite multigraph in CSR form (guaranteed simple by sampling)."""

    n: int
    n_checks: int
    E: int
    var_deg: np.ndarray
    var_kind: np.ndarray  # KIND_RV / KIND_GV
    check_deg: np.ndarray
    check_is_gc: np.ndarray
    edge_var: np.ndarray
    edge_check: np.ndarray
    edge_pos: np.ndarray  # component-code position per edge, -1 on SPC edges
    var_ptr: np.ndarray
    var_adj: np.ndarray  # edge ids grouped by variable
    check_ptr: np.ndarray
    check_adj: np.ndarray  # edge ids grouped by check
    spec: EnsembleSpec = field(repr=False)

    def var_edges(self, v: int) -> np.ndarray:
        return self.var_adj[self.var_ptr[v]:self.var_ptr[v + 1]]

    def check_edges(self, c: int) -> np.ndarray:
        return self.check_adj[self.check_ptr[c]:self.check_ptr[c + 1]]

    def parity_row_count(self) -> int:
        """Rows the parity-check matrix would have: 1 per SPC, k per GC node."""
        n_gc = int(self.check_is_gc.sum())
        k = self.spec.component.k if n_gc else 1
        return (self.n_checks - n_gc) + n_gc * k


def _class_counts(total: int, weights: dict[int, float]) -> dict[int, int]:
    """Split `total` into per-degree counts: floors, residue to the largest degree."""
    degs = sorted(weights)
    wsum = sum(weights.values())
    counts = {d: int(total * (weights[d] / wsum)) for d in degs}
    counts[degs[-1]] += total - sum(counts.values())
    return counts


def sample_graph(spec: EnsembleSpec, n: int, seed) -> TannerGraph:
    """Draw one member of the ensemble; deterministic given the seed."""
    if n < spec.max_check_degree:
        raise ValueError("n must be at least the largest degree")
    rng = np.random.default_rng(seed)

    # Variable side: node counts per degree (n_i ~ n lambda_i/i).
    var_counts = _class_counts(n, {d: f / d for d, f in spec.lam})
    var_deg = np.repeat(
        np.fromiter(var_counts.keys(), dtype=np.int64),
        np.fromiter(var_counts.values(), dtype=np.int64),
    )
    E = int(var_deg.sum())

    # Check side: floor the per-degree counts, then top up with max-degree
    # nodes; a final residue of degree < max becomes one extra SPC node.
    rho_all = {}
    for d, f in tuple(spec.rho_p) + tuple(spec.rho_c):
        rho_all[d] = rho_all.get(d, 0.0) + f
    jmax = max(rho_all)
    # +1e-9 guards against 2099.999... when the exact value is integral
    check_counts = {d: int(E * f / d + 1e-9) for d, f in rho_all.items()}
    deficit = E - sum(d * c for d, c in check_counts.items())
    check_counts[jmax] += deficit // jmax
    residue = deficit % jmax
    extra_degree = residue if residue > 0 else None

    check_deg_list = []
    check_is_gc_list = []
    for d in sorted(check_counts):
        c_d = check_counts[d]
        frac_gc = 0.0
        if rho_all[d] > 0:
            rc = dict(spec.rho_c).get(d, 0.0)
            frac_gc = rc / rho_all[d]
        g_d = int(c_d * frac_gc + 1e-9)
        flags = np.zeros(c_d, dtype=bool)
        flags[rng.choice(c_d, size=g_d, replace=False)] = True
        check_deg_list.append(np.full(c_d, d, dtype=np.int64))
        check_is_gc_list.append(flags)
    if extra_degree is not None:
        check_deg_list.append(np.array([extra_degree], dtype=np.int64))
        check_is_gc_list.append(np.array([False]))
    check_deg = np.concatenate(check_deg_list)
    check_is_gc = np.concatenate(check_is_gc_list)
    n_checks = len(check_deg)

    # Uniform stub pairing, then swap-repair any double edges.
    edge_var = np.repeat(np.arange(n, dtype=np.int64), var_deg)
    edge_check = np.repeat(np.arange(n_checks, dtype=np.int64), check_deg)[
        rng.permutation(E)
    ]
    for _ in range(200):
        key = edge_var * n_checks + edge_check
        order = np.argsort(key, kind="stable")
        dup = np.zeros(E, dtype=bool)
        dup_pos = order[1:][key[order][1:] == key[order][:-1]]
        if dup_pos.size == 0:
            break
        dup[dup_pos] = True
        partners = rng.integers(0, E, size=int(dup.sum()))
        idx = np.flatnonzero(dup)
        for e, o in zip(idx, partners):
            edge_check[e], edge_check[o] = edge_check[o], edge_check[e]
    else:
        raise RuntimeError("could not repair double edges (degenerate parameters)")

    # Generalized variable nodes: a uniform subset of floor(beta n).
    var_kind = np.zeros(n, dtype=np.int8)
    if spec.beta > 0.0:
        n_gv = int(spec.beta * n)
        var_kind[rng.choice(n, size=n_gv, replace=False)] = KIND_GV

    # CSR adjacency.
    var_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(edge_var, minlength=n), out=var_ptr[1:])
    var_adj = np.argsort(edge_var, kind="stable").astype(np.int64)
    check_ptr = np.zeros(n_checks + 1, dtype=np.int64)
    np.cumsum(np.bincount(edge_check, minlength=n_checks), out=check_ptr[1:])
    check_adj = np.argsort(edge_check, kind="stable").astype(np.int64)

    # Component-code positions: a fresh uniform permutation per GC node.
    edge_pos = np.full(E, -1, dtype=np.int16)
    if spec.component is not None:
        K = spec.component.K
        for c in np.flatnonzero(check_is_gc):
            edges = check_adj[check_ptr[c]:check_ptr[c + 1]]
            edge_pos[edges] = rng.permutation(K)[: len(edges)]

    return TannerGraph(
        n=n, n_checks=n_checks, E=E,
        var_deg=var_deg, var_kind=var_kind,
        check_deg=check_deg, check_is_gc=check_is_gc,
        edge_var=edge_var, edge_check=edge_check, edge_pos=edge_pos,
        var_ptr=var_ptr, var_adj=var_adj,
        check_ptr=check_ptr, check_adj=check_adj,
        spec=spec,
    )


@dataclass
class ErasurePattern:
    """Channel outcome: per-variable unknown counts plus BER accounting.

    A regular variable carries one coded bit, a generalized variable two.
    Punctured bits behave as erasures but are excluded from BER both as
    numerator and denominator.
    """

    unknowns: np.ndarray  # unresolved information count per variable (0..2)
    gv_known_port: np.ndarray  # port index removed at init for one-known GVs, else -1
    transmitted_unknown_bits: np.ndarray  # erased (not punctured) bits per variable
    transmitted_bits: int
    total_bits: int
    epsilon: float
    xi: float

    @property
    def n_unknown_vars(self) -> int:
        return int(np.count_nonzero(self.unknowns))


def apply_channel(graph: TannerGraph, epsilon: float, xi: float, seed) -> ErasurePattern:
    """Erase each transmitted bit with probability epsilon; puncture first with xi.

    All-zero codeword assumed (BEC is symmetric), so received bits are 0.
    Generalized variables get two independent bit draws and fall into the
    three cases: both known (node gone), one known (node becomes a
    degree-2 regular variable; the resolved port's edge is dropped), both
    unknown (node stays generalized).
    """
    if not 0.0 <= epsilon < 1.0 or not 0.0 <= xi < 1.0:
        raise ValueError("epsilon and xi must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    n = graph.n
    gv = graph.var_kind == KIND_GV

    def draw_bits(count):
        punct = rng.random(count) < xi
        erased = ~punct & (rng.random(count) < epsilon)
        return punct, erased

    punct0, erased0 = draw_bits(n)
    unknown0 = punct0 | erased0
    unknowns = unknown0.astype(np.int8)
    transmitted_unknown = erased0.astype(np.int16)
    gv_known_port = np.full(n, -1, dtype=np.int8)
    total_bits = n
    punctured_bits = int(punct0.sum())
    if gv.any():
        punct1, erased1 = draw_bits(n)
        unknown1 = punct1 | erased1
        # second bit only exists on GV nodes
        unknowns[gv] += unknown1[gv].astype(np.int8)
        transmitted_unknown[gv] += erased1[gv].astype(np.int16)
        total_bits += int(gv.sum())
        punctured_bits += int(punct1[gv].sum())
        # one-known GVs: first bit known drops port 0, second known drops port 2
        one = gv & (unknowns == 1)
        gv_known_port[one & ~unknown0] = 0
        gv_known_port[one & ~unknown1] = 2
    return ErasurePattern(
        unknowns=unknowns,
        gv_known_port=gv_known_port,
        transmitted_unknown_bits=transmitted_unknown,
        transmitted_bits=total_bits - punctured_bits,
        total_bits=total_bits,
        epsilon=epsilon,
        xi=xi,
    )
