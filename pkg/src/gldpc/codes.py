"""Component block codes: the R-I..R-IX registry, decoding profiles, rate bounds.

A component code is a short binary linear block code placed at a
generalized constraint node.  Its decoding profile p_w (fraction of
weight-w erasure patterns that are ML-resolvable) is what the
probabilistic peeling decoder and the density evolution consume.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import gf2
from .errors import UnknownCodeError
from .gf2 import BitMatrix


@dataclass(frozen=True)
class DecodingProfile:
    """p[w] = fraction of weight-w erasure patterns the code resolves, w=1..K."""

    K: int
    p: tuple[float, ...]  # index w-1 -> p_w
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if len(self.p) != self.K:
            raise ValueError("profile length must equal the blocklength")
        if any(not 0.0 <= v <= 1.0 for v in self.p):
            raise ValueError("profile entries must lie in [0, 1]")

    def pw(self, w: int) -> float:
        """p_w with the natural boundary values p_0 = 1 and p_{>K} = 0."""
        if w <= 0:
            return 1.0
        if w > self.K:
            return 0.0
        return self.p[w - 1]

    @property
    def d(self) -> int:
        """Smallest w with p_w < 1, i.e. the minimum distance it encodes."""
        for w in range(1, self.K + 1):
            if self.p[w - 1] < 1.0:
                return w
        return self.K + 1

    def truncated(self, d: int) -> "DecodingProfile":
        """Copy with p_w forced to 0 for w >= d+2 (bounded analysis window)."""
        p = tuple(v if w <= d + 1 else 0.0 for w, v in enumerate(self.p, start=1))
        return DecodingProfile(self.K, p)


def bd_profile(K: int, d: int) -> DecodingProfile:
    """Bounded-distance profile: resolve everything below d, nothing at or above."""
    return DecodingProfile(K, tuple(1.0 if w <= d - 1 else 0.0 for w in range(1, K + 1)))


def family_profile(K: int, d: int, p_d: float, p_d1: float) -> DecodingProfile:
    """Synthetic profile (1,...,1,p_d,p_{d+1},0,...) for ensemble experiments."""
    p = [1.0] * (d - 1) + [p_d]
    if d < K:
        p.append(p_d1)
    p += [0.0] * (K - len(p))
    return DecodingProfile(K, tuple(p))


@dataclass(frozen=True)
class ComponentCode:
    """Binary linear block code with generator and derived parity-check matrix."""

    name: str
    generator: BitMatrix
    parity_check: BitMatrix = field(repr=False)
    K: int
    k: int  # parity-check rows (full row rank)
    d: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.K - self.k, self.K)

    @classmethod
    def from_generator(cls, name: str, rows) -> "ComponentCode":
        g = rows if isinstance(rows, BitMatrix) else BitMatrix.from_rows(rows)
        h = gf2.null_space(g)
        if h is None:
            raise ValueError(f"{name}: generator spans the full space, no parity checks")
        # Sanity: H really annihilates G.
        prod = gf2.mul_transposed(g, h)
        assert all(r == 0 for r in prod.row_bits)
        return cls(
            name=name,
            generator=g,
            parity_check=h,
            K=g.cols,
            k=h.rows,
            d=gf2.min_distance(g),
        )


@functools.lru_cache(maxsize=64)
def decoding_profile(code: ComponentCode) -> DecodingProfile:
    """Exact profile by enumerating every erasure pattern of every weight.

    p_w is a rational with denominator C(K, w); stored as float alongside
    the exact fractions (tabulated reference values are 4-decimal roundings).
    Cached per code: the Monte-Carlo driver asks for it once per trial.
    """
    K = code.K
    cols = code.parity_check.column_bits()
    exact = []
    for w in range(1, K + 1):
        if w > code.k:
            exact.append(Fraction(0))
            continue
        good = sum(
            1
            for idx in itertools.combinations(range(K), w)
            if gf2.columns_independent([cols[j] for j in idx])
        )
        exact.append(Fraction(good, math.comb(K, w)))
    return DecodingProfile(K, tuple(float(f) for f in exact), tuple(exact))


# Generator matrices of the reference codes (short high-distance codes of
# lengths 6, 7, 8 and 15; Hamming, Cordaro-Wagner, cyclic and quasi-cyclic).
_REGISTRY_GENERATORS: dict[str, tuple[str, ...]] = {
    "R-I": (  # (6,3) shortened Hamming, rate 1/2
        "100110",
        "010101",
        "001011",
    ),
    "R-II": (  # (6,2) Cordaro-Wagner, rate 1/3
        "111100",
        "001111",
    ),
    "R-III": (  # (7,4) Hamming, rate 4/7
        "1110000",
        "1001100",
        "0101010",
        "1101001",
    ),
    "R-IV": (  # (7,3), rate 3/7
        "0111100",
        "1101010",
        "1011001",
    ),
    "R-V": (  # (8,4) quasi-cyclic, rate 1/2
        "10010101",
        "01100101",
        "01011001",
        "01010110",
    ),
    "R-VI": (  # (8,3) cyclic, rate 3/8
        "10011001",
        "01010101",
        "00110011",
    ),
    "R-VII": (  # (8,2) Cordaro-Wagner, rate 1/4
        "10110111",
        "01001111",
    ),
    "R-VIII": (  # (15,11), rate 11/15
        "010101100000000",
        "000101001000000",
        "000101000100001",
        "000100100010000",
        "000100100001001",
        "000001100000100",
        "000001100000011",
        "000000110000001",
        "000011000000001",
        "001100000000001",
        "100101100000001",
    ),
    "R-IX": (  # (15,10), rate 2/3
        "011001010000000",
        "001001001000001",
        "001000010100010",
        "001001000010010",
        "001000010001001",
        "000001010000101",
        "000001100000011",
        "000010010000011",
        "001101010000011",
        "101000000000011",
    ),
}

REGISTRY_NAMES = tuple(_REGISTRY_GENERATORS)

_registry_cache: dict[str, ComponentCode] = {}
_user_registry: dict[str, ComponentCode] = {}


def registry_get(name: str) -> ComponentCode:
    """Look up a reference code (R-I..R-IX) or a user-registered one."""
    if name in _user_registry:
        return _user_registry[name]
    if name not in _REGISTRY_GENERATORS:
        raise UnknownCodeError(name)
    if name not in _registry_cache:
        rows = [[int(c) for c in row] for row in _REGISTRY_GENERATORS[name]]
        _registry_cache[name] = ComponentCode.from_generator(name, rows)
    return _registry_cache[name]


def register_code(name: str, generator_rows) -> ComponentCode:
    """Register a user code by generator matrix; H is derived as a null-space basis."""
    if name in _REGISTRY_GENERATORS:
        raise ValueError(f"{name} is reserved for a reference code")
    code = ComponentCode.from_generator(name, generator_rows)
    _user_registry[name] = code
    return code


def design_rate(r0: float, nu: float, k_avg: float) -> float:
    """Ensemble design rate R(nu) = R0 - nu (1-R0) (k_avg - 1).

    Every generalized node contributes k_avg parity rows where a single
    parity check contributes one.  May go negative; feasibility is the
    caller's concern.
    """
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")
    if k_avg < 1.0:
        raise ValueError("k_avg must be at least 1")
    return r0 - nu * (1.0 - r0) * (k_avg - 1.0)


def hamming_rate_bound(r0: float, nu: float, d: int, K: int) -> float:
    """Sphere-packing (converse) bound on the design rate for distance-d components."""
    _check_bound_args(nu, d, K)
    total = sum(math.comb(K, q) for q in range((d - 1) // 2 + 1))
    return r0 - nu * (1.0 - r0) * math.log2(0.5 * total)


def varshamov_rate_bound(r0: float, nu: float, d: int, K: int) -> float:
    """Varshamov (achievable) bound on the design rate for distance-d components.

    The ceiling term is evaluated in integer arithmetic so the documented
    coincidence with the sphere-packing bound at d=3, K=2^z-1 is exact.
    """
    _check_bound_args(nu, d, K)
    m = 1 + sum(math.comb(K - 1, q) for q in range(d - 1))
    # ceil(log2(m/2)) = ceil(log2(m)) - 1 for integer m >= 1
    rows = (m - 1).bit_length() - 1 if m > 1 else 0
    return r0 - nu * (1.0 - r0) * rows


def _check_bound_args(nu: float, d: int, K: int):
    if d <= 2:
        raise ValueError("rate bounds require minimum distance d > 2")
    if K < d:
        raise ValueError("blocklength must be at least the minimum distance")
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")


def nu_hat(K: int) -> float:
    """Smallest generalized-node fraction giving linear minimum-distance
    growth for degree-2 variable nodes: (K-2)/(K-1)."""
    if K < 2:
        raise ValueError("K must be at least 2")
    return (K - 2) / (K - 1)
