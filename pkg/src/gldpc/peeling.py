"""Peeling decoders on the erasure channel: degree-rule, probabilistic, and ML.

One iteration removes one resolvable check node (a degree-one parity
check or a generalized node currently tagged resolvable) together with
its attached unknown variables and their edges.  The three decoders
differ only in how a generalized node earns its tag:

  bd   -- residual degree at most d-1 (the distance rule),
  ppd  -- a Bernoulli draw from the decoding profile, taken once per
          iteration in which the node lost edges, never revoked,
  ml   -- the erased positions' parity-check columns are independent.

With a profile whose entries are all 0 or 1 the probabilistic decoder
consumes no randomness beyond the uniform pick from the resolvable set,
so it follows the exact same trajectory as the degree-rule decoder.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import ComponentCode, DecodingProfile, bd_profile
from .ensemble import (
    KIND_GV,
    EnsembleSpec,
    ErasurePattern,
    TannerGraph,
    apply_channel,
    sample_graph,
)


@dataclass(frozen=True)
class BDPD:
    d: int


@dataclass(frozen=True)
class PPD:
    profile: DecodingProfile


@dataclass(frozen=True)
class MLPD:
    code: ComponentCode


DecoderKind = BDPD | PPD | MLPD


def decoder_kind(name: str, spec: EnsembleSpec) -> DecoderKind:
    """Build a decoder for 'bdpd', 'ppd' or 'mlpd' from the spec's component."""
    comp = spec.component
    if name == "bdpd":
        return BDPD(comp.d if comp is not None else 2)
    if name == "ppd":
        return PPD(spec.profile() if comp is not None else bd_profile(spec.max_check_degree, 2))
    if name == "mlpd":
        if not isinstance(comp, ComponentCode):
            raise ValueError("ML decoding needs a component code with matrices")
        return MLPD(comp)
    raise ValueError(f"unknown decoder {name!r}")


class ResidualTrace:
    """Residual degree-distribution trajectory, one row per iteration.

    All columns are normalized by the original edge count E; tau = iter/E.
    Left columns are keyed by variable degree for plain graphs and by the
    classes (r2, r3, g3) when generalized variables are present.
    """

    def __init__(self, E, left_keys, K, d, rows):
        self.E = E
        self.left_keys = left_keys
        self.K = K
        self.d = d
        arr = np.asarray(rows, dtype=float)
        if arr.size == 0:
            arr = arr.reshape(0, 2 + len(left_keys) + 3 * K)
        self.tau = arr[:, 0]
        self.e = arr[:, 1]
        nl = len(left_keys)
        self.l = arr[:, 2 : 2 + nl]
        self.r_p = arr[:, 2 + nl : 2 + nl + K]
        self.r_hat = arr[:, 2 + nl + K : 2 + nl + 2 * K]
        self.r_bar = arr[:, 2 + nl + 2 * K : 2 + nl + 3 * K]

    @property
    def r_c(self) -> np.ndarray:
        return self.r_hat + self.r_bar

    @property
    def s(self) -> np.ndarray:
        """Normalized count of resolvable check nodes."""
        j = np.arange(1, self.K + 1, dtype=float)
        return self.r_p[:, 0] + (self.r_hat / j).sum(axis=1)

    @property
    def iterations(self) -> int:
        return len(self.tau) - 1

    def column_names(self) -> list[str]:
        names = ["iter", "tau", "e", "s"]
        names += [f"l_{k}" for k in self.left_keys]
        names += [f"r_p{j}" for j in range(1, self.K + 1)]
        names += [f"r_c{j}" for j in range(1, self.K + 1)]
        d0 = min(self.d, self.K)
        d1 = min(self.d + 1, self.K)
        names += [f"rhat_c{d0}", f"rbar_c{d0}", f"rhat_c{d1}", f"rbar_c{d1}"]
        return names

    def to_csv(self, header_lines=()) -> str:
        out = io.StringIO()
        for line in header_lines:
            out.write(f"# {line}\n")
        out.write(",".join(self.column_names()) + "\n")
        d0 = min(self.d, self.K) - 1
        d1 = min(self.d + 1, self.K) - 1
        rc = self.r_c
        s = self.s
        for t in range(len(self.tau)):
            row = [str(t), _fmt(self.tau[t]), _fmt(self.e[t]), _fmt(s[t])]
            row += [_fmt(x) for x in self.l[t]]
            row += [_fmt(x) for x in self.r_p[t]]
            row += [_fmt(x) for x in rc[t]]
            row += [
                _fmt(self.r_hat[t, d0]), _fmt(self.r_bar[t, d0]),
                _fmt(self.r_hat[t, d1]), _fmt(self.r_bar[t, d1]),
            ]
            out.write(",".join(row) + "\n")
        return out.getvalue()


def _fmt(x: float) -> str:
    return format(x, ".10g")


@dataclass
class DecodeResult:
    success: bool
    residual_vars: np.ndarray
    iterations: int
    unresolved_transmitted_bits: int
    transmitted_bits: int
    trace: ResidualTrace | None = None
    values: dict | None = None  # variable -> recovered bit (ML with values on)


class _UniformSet:
    """Set with O(1) insert/discard and O(1) uniform sampling (swap-with-last)."""

    def __init__(self, capacity: int):
        self.items: list[int] = []
        self.pos = np.full(capacity, -1, dtype=np.int64)

    def __len__(self):
        return len(self.items)

    def __contains__(self, x: int) -> bool:
        return self.pos[x] >= 0

    def add(self, x: int):
        if self.pos[x] < 0:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x: int):
        i = self.pos[x]
        if i < 0:
            return
        last = self.items[-1]
        self.items[i] = last
        self.pos[last] = i
        self.items.pop()
        self.pos[x] = -1

    def pop_random(self, rng) -> int:
        i = int(rng.integers(len(self.items)))
        x = self.items[i]
        last = self.items[-1]
        self.items[i] = last
        self.pos[last] = i
        self.items.pop()
        self.pos[x] = -1
        return x


def ppd_tagging_step(w: int, profile: DecodingProfile, rng) -> bool:
    """Decide whether a generalized node that just lost edges becomes resolvable.

    One Bernoulli(p_w) draw at the node's new residual degree w.  Degrees
    with p_w in {0, 1} are decided without consuming randomness, which
    keeps the degree-rule decoder on an identical random stream.
    """
    p = profile.pw(w)
    if p >= 1.0:
        return True
    if p <= 0.0:
        return False
    return bool(rng.random() < p)


def decode(
    graph: TannerGraph,
    pattern: ErasurePattern,
    kind: DecoderKind,
    seed=0,
    record_trace: bool = True,
    compute_values: bool = False,
) -> DecodeResult:
    """Run the peeling loop to completion.

    Success means every unknown variable was resolved; failure leaves the
    resolvable set empty with unknowns remaining.  The trace records the
    residual DD after every iteration (row 0 is the post-channel state).
    """
    rng = np.random.default_rng(seed)
    spec = graph.spec
    K = spec.max_check_degree
    E = graph.E
    dg = bool(spec.beta > 0.0)

    if isinstance(kind, BDPD):
        d = kind.d
        profile = None
        ml_code = None
    elif isinstance(kind, PPD):
        profile = kind.profile
        d = profile.d
        ml_code = None
    else:
        ml_code = kind.code
        d = ml_code.d
        profile = None
        h_cols = ml_code.parity_check.column_bits()
        h_rows = ml_code.k

    if compute_values and ml_code is None:
        raise ValueError("value recovery is only meaningful for the ML decoder")

    unknowns = pattern.unknowns.copy()
    edge_alive = unknowns[graph.edge_var] > 0
    # one-known generalized variables lost their resolved port at init
    if dg:
        for v in np.flatnonzero((graph.var_kind == KIND_GV) & (pattern.gv_known_port >= 0)):
            edges = graph.var_edges(v)
            edge_alive[edges[pattern.gv_known_port[v]]] = False
    resdeg = np.bincount(
        graph.edge_check[edge_alive], minlength=graph.n_checks
    ).astype(np.int64)

    # Left-side degree classes for the trace.
    if dg:
        left_keys = ("r2", "r3", "g3")
        Lcount = np.zeros(3, dtype=np.int64)  # edges in classes r2, r3, g3
        gvmask = graph.var_kind == KIND_GV
        Lcount[0] = 2 * int(((unknowns == 1) & gvmask).sum())
        Lcount[1] = 3 * int(((unknowns == 1) & ~gvmask).sum())
        Lcount[2] = 3 * int((unknowns == 2).sum())
        def left_index(v):
            return 2 if unknowns[v] == 2 else (0 if gvmask[v] else 1)
    else:
        left_keys = tuple(range(1, spec.max_var_degree + 1))
        Lcount = np.zeros(spec.max_var_degree + 1, dtype=np.int64)
        for deg in range(1, spec.max_var_degree + 1):
            nv = int(((graph.var_deg == deg) & (unknowns > 0)).sum())
            Lcount[deg] = deg * nv

    # Right-side classes indexed by residual degree 0..K; split by tag.
    Rp = np.zeros(K + 1, dtype=np.int64)
    Rhat = np.zeros(K + 1, dtype=np.int64)
    Rbar = np.zeros(K + 1, dtype=np.int64)
    tag = np.zeros(graph.n_checks, dtype=bool)
    is_gc = graph.check_is_gc
    psi = _UniformSet(graph.n_checks)

    check_edge_cache = [graph.check_edges(c) for c in range(graph.n_checks)]
    var_edge_cache = [graph.var_edges(v) for v in range(graph.n)]
    edge_var = graph.edge_var
    edge_check = graph.edge_check
    edge_pos = graph.edge_pos

    def ml_tag(c, w) -> bool:
        if w <= d - 1:
            return True
        if w > h_rows:
            return False
        pos = [int(edge_pos[e]) for e in check_edge_cache[c] if edge_alive[e]]
        return gf2.columns_independent([h_cols[p] for p in pos])

    # Initialization: tag generalized nodes, seed the resolvable set.
    for c in range(graph.n_checks):
        w = int(resdeg[c])
        if w == 0:
            continue
        if is_gc[c]:
            if ml_code is not None:
                t = ml_tag(c, w)
            elif profile is not None:
                t = ppd_tagging_step(w, profile, rng)
            else:
                t = w <= d - 1
            tag[c] = t
            (Rhat if t else Rbar)[w] += w
            if t:
                psi.add(c)
        else:
            Rp[w] += w
            if w == 1:
                psi.add(c)

    values: dict | None = {} if compute_values else None
    if compute_values:
        for v in np.flatnonzero(unknowns == 0):
            values[int(v)] = 0

    trace_rows = [] if record_trace else None
    e_alive = int(edge_alive.sum())

    def snapshot(it):
        row = [it / E, e_alive / E]
        if dg:
            row += [Lcount[0] / E, Lcount[1] / E, Lcount[2] / E]
        else:
            row += [Lcount[k] / E for k in left_keys]
        row += list(Rp[1:] / E)
        row += list(Rhat[1:] / E)
        row += list(Rbar[1:] / E)
        return row

    if record_trace:
        trace_rows.append(snapshot(0))

    it = 0
    touched: dict[int, int] = {}
    while len(psi) > 0:
        c = psi.pop_random(rng)
        it += 1
        if compute_values:
            _recover_values(c, graph, edge_alive, values, ml_code, check_edge_cache)
        touched.clear()
        for e in check_edge_cache[c]:
            if not edge_alive[e]:
                continue
            v = int(edge_var[e])
            if dg and unknowns[v] == 2:
                # generalized variable loses this one edge, becomes degree-2 regular
                unknowns[v] = 1
                Lcount[2] -= 3
                Lcount[0] += 2
                edge_alive[e] = False
                e_alive -= 1
                j = int(resdeg[c])
                resdeg[c] = j - 1
                if is_gc[c]:
                    (Rhat if tag[c] else Rbar)[j] -= j
                    (Rhat if tag[c] else Rbar)[j - 1] += j - 1
                else:
                    Rp[j] -= j
                    Rp[j - 1] += j - 1
                continue
            # resolve the variable: all its edges die
            Lcount[left_index(v) if dg else graph.var_deg[v]] -= (
                2 if dg and unknowns[v] == 1 and graph.var_kind[v] == KIND_GV
                else (3 if dg else graph.var_deg[v])
            )
            unknowns[v] = 0
            for e2 in var_edge_cache[v]:
                if not edge_alive[e2]:
                    continue
                edge_alive[e2] = False
                e_alive -= 1
                c2 = int(edge_check[e2])
                j = int(resdeg[c2])
                resdeg[c2] = j - 1
                if is_gc[c2]:
                    (Rhat if tag[c2] else Rbar)[j] -= j
                    (Rhat if tag[c2] else Rbar)[j - 1] += j - 1
                else:
                    Rp[j] -= j
                    Rp[j - 1] += j - 1
                if c2 != c:
                    touched[c2] = touched.get(c2, 0) + 1
        for c2 in touched:
            w = int(resdeg[c2])
            if w == 0:
                psi.discard(c2)
                continue
            if is_gc[c2]:
                if tag[c2]:
                    continue  # resolvable tags never revert
                if ml_code is not None:
                    t = ml_tag(c2, w)
                elif profile is not None:
                    t = ppd_tagging_step(w, profile, rng)
                else:
                    t = w <= d - 1
                if t:
                    tag[c2] = True
                    Rhat[w] += w
                    Rbar[w] -= w
                    psi.add(c2)
            else:
                if w == 1:
                    psi.add(c2)
        if record_trace:
            trace_rows.append(snapshot(it))

    residual = np.flatnonzero(unknowns > 0)
    success = residual.size == 0
    unresolved_bits = int(pattern.transmitted_unknown_bits[residual].sum())
    trace = None
    if record_trace:
        trace = ResidualTrace(E, left_keys, K, d, trace_rows)
    return DecodeResult(
        success=success,
        residual_vars=residual,
        iterations=it,
        unresolved_transmitted_bits=unresolved_bits,
        transmitted_bits=pattern.transmitted_bits,
        trace=trace,
        values=values,
    )


def _recover_values(c, graph, edge_alive, values, ml_code, check_edge_cache):
    """Fill in the removed check's unknown variables via parity solving."""
    edges = check_edge_cache[c]
    if not graph.check_is_gc[c]:
        acc = 0
        unknown_var = None
        for e in edges:
            v = int(graph.edge_var[e])
            if edge_alive[e]:
                unknown_var = v
            elif v in values:
                acc ^= values[v]
        if unknown_var is not None:
            values[unknown_var] = acc
        return
    known = {}
    erased = {}
    for e in edges:
        v = int(graph.edge_var[e])
        p = int(graph.edge_pos[e])
        if edge_alive[e]:
            erased[p] = v
        elif v in values:
            known[p] = values[v]
    for p in range(ml_code.K):
        if p not in known and p not in erased:
            known[p] = 0  # positions with no edge carry no constraint on this node
    sol = gf2.solve_erasures(ml_code.parity_check, known, set(erased))
    if sol is None:
        raise AssertionError("ML decoder removed a node with dependent positions")
    for p, v in erased.items():
        values[v] = sol[p]


def _ber_trial(spec, n, eps, decoder_name, master_seed, eps_index, trial):
    ss = np.random.SeedSequence(entropy=(int(master_seed), int(eps_index), int(trial)))
    s_graph, s_chan, s_dec = ss.spawn(3)
    graph = sample_graph(spec, n, s_graph)
    pattern = apply_channel(graph, eps, spec.xi, s_chan)
    kind = decoder_kind(decoder_name, spec)
    res = decode(graph, pattern, kind, seed=s_dec, record_trace=False)
    ber = (res.unresolved_transmitted_bits / res.transmitted_bits
           if res.transmitted_bits else 0.0)
    return ber, (not res.success)


def ber_monte_carlo(
    spec: EnsembleSpec,
    n: int,
    eps_grid,
    trials: int,
    decoder: str = "ppd",
    master_seed: int = 0,
    jobs: int = 1,
):
    """Estimate BER/BLER on an epsilon grid; deterministic per master seed.

    Each trial draws a fresh graph and channel realization from seeds
    derived as SeedSequence((master, eps_index, trial)), so runs with the
    same master seed see identical graphs and erasures across decoders.
    Returns one dict per epsilon with keys epsilon, ber, bler, stderr,
    trials, n, seed.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tasks = [
        (spec, n, float(eps), decoder, master_seed, i, t)
        for i, eps in enumerate(eps_grid)
        for t in range(trials)
    ]
    if jobs > 1:
        import concurrent.futures as cf

        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_ber_trial_star, tasks, chunksize=1))
    else:
        flat = [_ber_trial_star(t) for t in tasks]
    rows = []
    for i, eps in enumerate(eps_grid):
        chunk = flat[i * trials : (i + 1) * trials]
        bers = np.array([b for b, _ in chunk])
        blocks = np.array([f for _, f in chunk])
        stderr = float(bers.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
        rows.append(
            {
                "epsilon": float(eps),
                "ber": float(bers.mean()),
                "bler": float(blocks.mean()),
                "stderr": stderr,
                "trials": trials,
                "n": n,
                "seed": master_seed,
            }
        )
    return rows


def _ber_trial_star(args):
    return _ber_trial(*args)
