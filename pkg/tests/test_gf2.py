import itertools

import numpy as np
import pytest

from gldpc import gf2
from gldpc.errors import DegenerateCodeError, InconsistentInputError
from gldpc.gf2 import BitMatrix


def np_rank(rows):
    """Independent oracle: elimination on a numpy uint8 array."""
    a = np.array(rows, dtype=np.uint8) % 2
    m, n = a.shape
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if a[i, col]:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(m):
            if i != r and a[i, col]:
                a[i] ^= a[r]
        r += 1
    return r


HAMMING74_H = [
    [0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0, 1],
]  # column j+1 is the binary expansion of j+1


def test_rank_identity():
    assert gf2.rank(BitMatrix.identity(3)) == 3


def test_rank_zero_matrix():
    assert gf2.rank(BitMatrix(3, 7, (0, 0, 0))) == 0


def test_rank_hamming74():
    assert gf2.rank(BitMatrix.from_rows(HAMMING74_H)) == 3


def test_rank_matches_numpy_oracle():
    rng = np.random.default_rng(12345)
    for _ in range(200):
        m = int(rng.integers(1, 9))
        n = int(rng.integers(1, 9))
        rows = rng.integers(0, 2, size=(m, n))
        assert gf2.rank(BitMatrix.from_rows(rows)) == np_rank(rows)


def test_rank_equals_transpose_rank():
    rng = np.random.default_rng(99)
    for _ in range(100):
        rows = rng.integers(0, 2, size=(int(rng.integers(1, 10)), int(rng.integers(1, 10))))
        m = BitMatrix.from_rows(rows)
        assert gf2.rank(m) == gf2.rank(m.transpose())


def test_erasure_decodable_empty_pattern():
    h = BitMatrix.from_rows(HAMMING74_H)
    assert gf2.erasure_decodable(h, set())


def test_erasure_decodable_fano_line_dependent():
    h = BitMatrix.from_rows(HAMMING74_H)
    # columns whose labels are 001, 010, 011: they sum to zero
    assert not gf2.erasure_decodable(h, {0, 1, 2})


def test_erasure_decodable_all_pairs():
    h = BitMatrix.from_rows(HAMMING74_H)
    for pair in itertools.combinations(range(7), 2):
        assert gf2.erasure_decodable(h, set(pair))


def test_erasure_decodable_out_of_range():
    h = BitMatrix.from_rows(HAMMING74_H)
    with pytest.raises(ValueError):
        gf2.erasure_decodable(h, {7})


def test_erasure_decodable_downward_closed():
    h = BitMatrix.from_rows(HAMMING74_H)
    for size in (3, 4):
        for pattern in itertools.combinations(range(7), size):
            if gf2.erasure_decodable(h, set(pattern)):
                for sub in itertools.combinations(pattern, size - 1):
                    assert gf2.erasure_decodable(h, set(sub))


def test_min_distance_identity():
    assert gf2.min_distance(BitMatrix.identity(4)) == 1


def test_min_distance_degenerate():
    with pytest.raises(DegenerateCodeError):
        gf2.min_distance(BitMatrix(2, 4, (0, 0)))


def test_min_distance_repetition():
    assert gf2.min_distance(BitMatrix.from_rows([[1, 1, 1, 1, 1]])) == 5


def test_null_space_annihilates():
    rng = np.random.default_rng(7)
    for _ in range(50):
        rows = rng.integers(0, 2, size=(int(rng.integers(1, 6)), int(rng.integers(2, 10))))
        g = BitMatrix.from_rows(rows)
        h = gf2.null_space(g)
        if h is None:
            assert gf2.rank(g) == g.cols
            continue
        prod = gf2.mul_transposed(g, h)
        assert all(r == 0 for r in prod.row_bits)
        assert gf2.rank(h) == h.rows  # basis is full row rank
        assert h.rows == g.cols - gf2.rank(g)


def test_solve_erasures_all_zero_completion():
    h = BitMatrix.from_rows(HAMMING74_H)
    known = {j: 0 for j in range(7) if j not in (3, 4)}
    sol = gf2.solve_erasures(h, known, {3, 4})
    assert sol == {j: 0 for j in range(7)}


def test_solve_erasures_dependent_returns_none():
    h = BitMatrix.from_rows(HAMMING74_H)
    known = {j: 0 for j in (3, 4, 5, 6)}
    assert gf2.solve_erasures(h, known, {0, 1, 2}) is None


def test_solve_erasures_parity_completion():
    h = BitMatrix.from_rows([[1, 1, 1, 1, 1]])  # single parity check, K=5
    known = {0: 1, 1: 0, 2: 0, 3: 0}
    sol = gf2.solve_erasures(h, known, {4})
    assert sol[4] == 1  # odd parity forces the erased bit to 1


def test_solve_erasures_inconsistent_raises():
    h = BitMatrix.from_rows([[1, 1, 1, 1]])
    with pytest.raises(InconsistentInputError):
        gf2.solve_erasures(h, {0: 1, 1: 0, 2: 0, 3: 0}, set())


def test_solve_iff_decodable_and_recovers_codewords():
    rng = np.random.default_rng(2024)
    h = BitMatrix.from_rows(HAMMING74_H)
    code = gf2.null_space(h)  # generator of the code H checks
    for _ in range(300):
        # random codeword as ground truth
        cw = 0
        for row in code.row_bits:
            if rng.integers(2):
                cw ^= row
        w = int(rng.integers(0, 5))
        erased = set(int(x) for x in rng.choice(7, size=w, replace=False))
        known = {j: (cw >> j) & 1 for j in range(7) if j not in erased}
        dec = gf2.erasure_decodable(h, erased)
        sol = gf2.solve_erasures(h, known, erased)
        assert (sol is not None) == dec
        if sol is not None:
            assert sol == {j: (cw >> j) & 1 for j in range(7)}
            vec = sum(sol[j] << j for j in range(7))
            assert all((r & vec).bit_count() % 2 == 0 for r in h.row_bits)
