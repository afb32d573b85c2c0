"""Dense GF(2) linear algebra on bit-packed rows.

Rows are stored as Python integers (bit i = column i), so row XOR is a
single word-parallel operation and matrices up to a few hundred columns
stay cheap.  Everything here is pure and total on well-formed inputs;
these routines sit on the hot path of the Monte-Carlo decoders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateCodeError, InconsistentInputError


@dataclass(frozen=True)
class BitMatrix:
    """Binary matrix with bit-packed rows (bit i of a row = column i)."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix must have at least one row and column")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match packed rows")
        mask = (1 << self.cols) - 1
        if any(r & ~mask for r in self.row_bits):
            raise ValueError("row has bits set beyond the column count")

    @classmethod
    def from_rows(cls, rows) -> "BitMatrix":
        """Build from an iterable of 0/1 row sequences."""
        packed = []
        width = None
        for row in rows:
            bits = [int(b) & 1 for b in row]
            if width is None:
                width = len(bits)
            elif len(bits) != width:
                raise ValueError("ragged rows")
            packed.append(sum(b << i for i, b in enumerate(bits)))
        if not packed or width == 0:
            raise ValueError("empty matrix")
        return cls(len(packed), width, tuple(packed))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def column_bits(self) -> list[int]:
        """Columns packed as integers (bit i = row i)."""
        cols = [0] * self.cols
        for i, r in enumerate(self.row_bits):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return cols

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, tuple(self.column_bits()))


def rank(m: BitMatrix) -> int:
    """GF(2) rank by Gaussian elimination with first-nonzero pivoting."""
    return _rank_bits(list(m.row_bits), m.cols)


def _rank_bits(rows: list[int], cols: int) -> int:
    r = 0
    for col in range(cols):
        mask = 1 << col
        piv = -1
        for i in range(r, len(rows)):
            if rows[i] & mask:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i] & mask:
                rows[i] ^= rows[r]
        r += 1
        if r == len(rows):
            break
    return r


def columns_independent(column_bits: list[int]) -> bool:
    """True iff the given packed columns are linearly independent.

    Incremental elimination over a small basis; used by the ML peeling
    decoder where it runs once per re-tag event.
    """
    basis: list[int] = []
    for v in column_bits:
        for b in basis:
            low = b & -b
            if v & low:
                v ^= b
        if v == 0:
            return False
        basis.append(v)
    return True


def erasure_decodable(h: BitMatrix, erased) -> bool:
    """True iff the erased columns of the parity-check matrix are independent.

    A weight-w erasure pattern is ML-resolvable exactly in that case.  The
    empty pattern is always decodable.
    """
    idx = sorted(set(erased))
    if not idx:
        return True
    if idx[0] < 0 or idx[-1] >= h.cols:
        raise ValueError(f"erased column out of range 0..{h.cols - 1}")
    if len(idx) > h.rows:
        return False
    cols = h.column_bits()
    return columns_independent([cols[j] for j in idx])


def min_distance(g: BitMatrix) -> int:
    """Minimum Hamming weight over all nonzero codewords of the row span.

    Exhaustive enumeration of 2^rows combinations; fine for the short
    component codes used here (rows <= ~16).
    """
    if g.rows > 20:
        raise ValueError("generator too large for exhaustive enumeration")
    if _rank_bits(list(g.row_bits), g.cols) == 0:
        raise DegenerateCodeError("generator has rank 0 (only the zero codeword)")
    best = g.cols + 1
    # Gray-code walk: one row XOR per step.
    cw = 0
    prev = 0
    for m in range(1, 1 << g.rows):
        gray = m ^ (m >> 1)
        cw ^= g.row_bits[(gray ^ prev).bit_length() - 1]
        prev = gray
        if cw:
            w = cw.bit_count()
            if w < best:
                best = w
    return best


def null_space(m: BitMatrix) -> BitMatrix | None:
    """Basis of {x : m @ x = 0} as rows of a full-row-rank matrix.

    Returns None for a full-column-rank input (trivial null space).
    """
    rows = list(m.row_bits)
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        mask = 1 << col
        piv = -1
        for i in range(r, len(rows)):
            if rows[i] & mask:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
    free = [c for c in range(m.cols) if c not in pivots]
    if not free:
        return None
    basis = []
    for f in free:
        v = 1 << f
        for i, p in enumerate(pivots):
            if (rows[i] >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(len(basis), m.cols, tuple(basis))


def mul_transposed(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """a @ b.T over GF(2); both must share the column count."""
    if a.cols != b.cols:
        raise ValueError("column counts differ")
    out = []
    for ra in a.row_bits:
        bits = 0
        for j, rb in enumerate(b.row_bits):
            bits |= ((ra & rb).bit_count() & 1) << j
        out.append(bits)
    return BitMatrix(a.rows, b.rows, tuple(out))


def solve_erasures(h: BitMatrix, known: dict, erased) -> dict | None:
    """Complete an erasure pattern against H x = 0.

    `known` must assign a bit to every position outside `erased`.  Returns
    the unique full assignment when the erased columns are independent,
    None when they are dependent (pattern not ML-resolvable), and raises
    InconsistentInputError when the known bits already violate a check
    that involves no erased position beyond the dependent span.
    """
    erased_set = set(erased)
    idx = sorted(erased_set)
    if idx and (idx[0] < 0 or idx[-1] >= h.cols):
        raise ValueError(f"erased column out of range 0..{h.cols - 1}")
    for j in range(h.cols):
        if j not in erased_set and j not in known:
            raise ValueError(f"position {j} neither known nor erased")
    # Syndrome of the known part.
    known_vec = 0
    for j, bit in known.items():
        if bit & 1:
            known_vec |= 1 << j
    syndrome = [(r & known_vec).bit_count() & 1 for r in h.row_bits]
    if not idx:
        if any(syndrome):
            raise InconsistentInputError("known bits violate a parity check")
        return dict(known)
    # Eliminate on the erased columns with the syndrome as augmented column.
    cols = h.column_bits()
    aug = sum(s << i for i, s in enumerate(syndrome))
    rows_sub = []  # one int per erased column, plus the augmented bit on top
    width = len(idx)
    eq = []
    for i in range(h.rows):
        lhs = 0
        for t, j in enumerate(idx):
            if (cols[j] >> i) & 1:
                lhs |= 1 << t
        eq.append(lhs | (((aug >> i) & 1) << width))
    r = 0
    pivots = []
    for t in range(width):
        mask = 1 << t
        piv = -1
        for i in range(r, len(eq)):
            if eq[i] & mask:
                piv = i
                break
        if piv < 0:
            continue
        eq[r], eq[piv] = eq[piv], eq[r]
        for i in range(len(eq)):
            if i != r and eq[i] & mask:
                eq[i] ^= eq[r]
        pivots.append(t)
        r += 1
    for i in range(r, len(eq)):
        if eq[i] >> width:
            raise InconsistentInputError("known bits violate a parity check")
    if len(pivots) < width:
        return None
    out = dict(known)
    for row_i, t in enumerate(pivots):
        out[idx[t]] = (eq[row_i] >> width) & 1
    return out
