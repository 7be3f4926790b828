import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qamem import DomainError, hamming, multi_center_query, single_center_query
from qamem.query import hamming_row


def brute_weights(n, centers):
    """Direct per-basis-state evaluation, independent of the vectorised path."""
    out = []
    for x in range(2**n):
        total = 0.0
        for b, a in centers:
            d = sum(((x >> k) & 1) != ((b >> k) & 1) for k in range(n))
            total += a**d * (1 - a) ** (n - d)
        out.append(total / len(centers))
    return np.array(out)


@pytest.mark.parametrize("x,y,d", [(3, 3, 0), (3, 0, 2), (3, 4, 3)])
def test_hamming(x, y, d):
    assert hamming(x, y) == d


def test_hamming_row_matches_scalar():
    assert list(hamming_row(5, 19)) == [hamming(19, x) for x in range(32)]


def test_example1_query_amplitudes():
    r3 = math.sqrt(3)
    expected = np.array([r3, 3, 3, 3 * r3, 1, r3, r3, 3]) / 8
    np.testing.assert_allclose(single_center_query(3, 3, 0.25).amplitudes, expected, atol=1e-15)


def test_query_of_farthest_state_is_root_a_cubed():
    assert single_center_query(3, 3, 0.25).amplitudes[4] == pytest.approx(math.sqrt(0.25**3))


@pytest.mark.parametrize("a", [0.01, 0.1, 0.25, 0.4, 0.49])
def test_single_center_peak_at_center(a):
    q = single_center_query(4, 9, a)
    assert int(np.argmax(q.amplitudes)) == 9


def test_seven_qubit_query_normalised():
    q = single_center_query(7, 60, 0.15)
    assert abs(np.sum(q.amplitudes**2) - 1) < 1e-12
    np.testing.assert_allclose(q.amplitudes**2, brute_weights(7, [(60, 0.15)]), rtol=1e-12)


@pytest.mark.parametrize("a", [0.0, 0.5, 0.6, -0.1])
def test_width_out_of_range(a):
    with pytest.raises(DomainError):
        single_center_query(3, 3, a)


def test_center_out_of_range():
    with pytest.raises(DomainError):
        single_center_query(3, 8, 0.2)


def test_c2_example_profile():
    q = multi_center_query(3, [(2, 0.1), (4, 0.1)])
    expected = [0.285, 0.095, 0.607, 0.202, 0.607, 0.202, 0.285, 0.095]
    np.testing.assert_allclose(q.amplitudes, expected, atol=5e-3)
    assert q.k == 2


def test_one_center_reduces_to_single():
    np.testing.assert_array_equal(multi_center_query(5, [(7, 0.3)]).amplitudes,
                                  single_center_query(5, 7, 0.3).amplitudes)


def test_seven_qubit_multi_center_normalised_and_order_free():
    centers = [(23, 0.1), (59, 0.1), (61, 0.1), (110, 0.1)]
    q = multi_center_query(7, centers)
    assert abs(np.sum(q.amplitudes**2) - 1) < 1e-12
    np.testing.assert_allclose(q.amplitudes**2, brute_weights(7, centers), rtol=1e-12)
    for perm in itertools.permutations(centers):
        assert np.max(np.abs(multi_center_query(7, list(perm)).amplitudes - q.amplitudes)) <= 1e-15


def test_multi_center_errors():
    with pytest.raises(DomainError):
        multi_center_query(3, [])
    with pytest.raises(DomainError):
        multi_center_query(3, [(1, 0.2), (1, 0.3)])
    with pytest.raises(DomainError):
        multi_center_query(3, [(1, 0.2), (2, 0.5)])


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 8), data=st.data())
def test_profiles_normalised_nonnegative(n, data):
    k = data.draw(st.integers(1, min(4, 2**n)))
    bs = data.draw(st.lists(st.integers(0, 2**n - 1), min_size=k, max_size=k, unique=True))
    widths = data.draw(st.lists(st.floats(0.001, 0.499), min_size=k, max_size=k))
    q = multi_center_query(n, list(zip(bs, widths)))
    assert np.all(q.amplitudes >= 0)
    assert abs(np.sum(q.amplitudes**2) - 1) < 1e-12


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), a=st.floats(0.001, 0.499), data=st.data())
def test_single_center_strictly_decreasing_in_distance(n, a, data):
    p = data.draw(st.integers(0, 2**n - 1))
    q = single_center_query(n, p, a)
    d = hamming_row(n, p)
    by_d = [q.amplitudes[d == k][0] for k in range(n + 1)]
    assert all(x > y for x, y in zip(by_d, by_d[1:]))
    for k in range(n + 1):
        assert np.ptp(q.amplitudes[d == k]) == 0
