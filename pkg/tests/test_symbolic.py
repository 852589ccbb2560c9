from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from emptyfatou import EmptyWord, LiteralError, make_field
from emptyfatou.dynamics import PASS, make_phi
from emptyfatou.symbolic import (
    decode,
    exhaustive_bijectivity,
    format_word,
    itinerary,
    iterate,
    parse_word,
    periodic_point,
    shift,
)

Q2 = make_field(2)
PHI = make_phi(Q2)


def phi_mod(z: int, bits: int) -> tuple[int, int]:
    """Integer oracle for (z^2 - z)/(2 + z^8 - z^4) on Z_2: returns (image mod 2^(bits-1), bits-1).

    The denominator is exactly twice an odd number on Z_2, so halving top and bottom leaves
    an odd denominator invertible modulo 2^(bits-1).
    """
    mod = 2**bits
    num = (z * z - z) % mod
    den = (2 + pow(z, 8, mod) - pow(z, 4, mod)) % mod
    assert den % 2 == 0 and den % 4 != 0 and num % 2 == 0
    bits -= 1
    return (num // 2) * pow(den // 2, -1, 2**bits) % 2**bits, bits


def itinerary_oracle(z: int, depth: int, bits: int = 40) -> tuple[int, ...]:
    out = []
    for _ in range(depth):
        out.append(z % 2)
        z, bits = phi_mod(z, bits)
    return tuple(out)


def as_int(x) -> int:
    return x.vec[0] * 2**x.shift % 2**x.prec


# words -----------------------------------------------------------------------

def test_word_helpers():
    assert parse_word("1,0,3", 4) == (1, 0, 3)
    assert format_word((1, 0, 3)) == "1,0,3"
    assert parse_word("", 2) == ()
    with pytest.raises(LiteralError):
        parse_word("1,2", 2)
    with pytest.raises(LiteralError):
        parse_word("a", 2)
    assert shift((5,)) == ()
    assert shift((1, 2, 3)) == (2, 3)
    with pytest.raises(EmptyWord):
        shift(())


# itineraries -----------------------------------------------------------------

def test_itinerary_examples():
    assert itinerary(PHI, Q2.zero, 8) == (0,) * 8
    K = make_field(3, f=2)
    phi = make_phi(K)
    for c in range(K.q):
        assert itinerary(phi, K.teichmuller(c), 5) == (c, 0, 0, 0, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_itinerary_matches_integer_oracle(z):
    assert itinerary(PHI, Q2.element(z), 20) == itinerary_oracle(z, 20)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 25))
def test_conjugacy_identity(z, k):
    x = Q2.element(z)
    assert itinerary(PHI, PHI.affine(x), k) == shift(itinerary(PHI, x, k + 1))


# decoding ------------------------------------------------------------------

def test_decode_examples():
    ball = decode(PHI, (0,) * 6)
    assert ball.center.is_zero() and ball.radius_log == 6
    K = make_field(2, f=2)
    phi = make_phi(K)
    for c in range(K.q):
        ball = decode(phi, (c,))
        assert ball.center == K.teichmuller(c) and ball.radius_log == 1
    assert decode(PHI, ()).radius_log == 0
    assert decode(PHI, (1, 0)).literal().startswith("{center: digits:[1")


def test_decode_all_words_of_length_four():
    centers = set()
    for w in product(range(2), repeat=4):
        ball = decode(PHI, w)
        z = as_int(ball.center) % 16
        assert itinerary_oracle(z, 4) == w
        centers.add(z)
    assert centers == set(range(16))


def test_ball_membership():
    ball = decode(PHI, (1, 1, 0, 1, 0))
    for tail in range(8):
        z = ball.center + Q2.element(tail).pi_shift(5)
        assert ball.contains(z)
        assert itinerary(PHI, z, 5) == (1, 1, 0, 1, 0)
    assert not ball.contains(ball.center + Q2.pi_power(4))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12))
def test_decode_roundtrip_unramified(w):
    K = make_field(2, f=2, precision=16)
    phi = make_phi(K)
    assert itinerary(phi, decode(phi, tuple(w)).center, len(w)) == tuple(w)


def test_decode_rejects_bad_symbols():
    with pytest.raises(LiteralError):
        decode(PHI, (2,))


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2)])
def test_n1_regime_still_decodes(p, f):
    # outside the verified regime the coding is still a bijection at small depth
    phi = make_phi(make_field(p, f=f, precision=16), 2, 1)
    v = exhaustive_bijectivity(phi, 3)
    assert v.verdict == PASS and v.regime_flag == "experimental_n1"


@pytest.mark.parametrize("K,depth", [
    (make_field(2), 1),
    (make_field(2), 8),
    (make_field(3), 4),
    (make_field(2, e=2), 6),
    (make_field(2, f=2), 4),
])
def test_exhaustive_bijectivity(K, depth):
    v = exhaustive_bijectivity(make_phi(K), depth)
    assert v.verdict == PASS
    assert v.observed["distinct_balls"] == K.q**depth


def test_bijectivity_depth_zero():
    v = exhaustive_bijectivity(PHI, 0)
    assert v.observed["words"] == 1 and v.verdict == PASS


# periodic points -------------------------------------------------------------

def test_periodic_point_examples():
    assert periodic_point(PHI, (0,)).is_zero()
    z1 = periodic_point(PHI, (1,))
    assert z1.reduction() == 1
    assert (PHI.affine(z1) - z1).valuation_or_prec() >= Q2.pi_precision - 2
    with pytest.raises(ValueError):
        periodic_point(PHI, ())


def brute_periodic_count(k: int, D: int = 10) -> int:
    """Residues z mod 2^D with phi^k(z) = z mod 2^(D-k); one per fixed point of phi^k."""
    count = 0
    for z in range(2**D):
        x, bits = z, 40
        for _ in range(k):
            x, bits = phi_mod(x, bits)
        if (x - z) % 2 ** (D - k) == 0:
            count += 1
    return count


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_periodic_points_match_brute_force(k):
    assert brute_periodic_count(k) == 2**k
    found = set()
    for w in product(range(2), repeat=k):
        z = periodic_point(PHI, w)
        assert (iterate(PHI, z, k) - z).valuation_or_prec() >= Q2.pi_precision - k - 1
        assert itinerary(PHI, z, 3 * k) == w * 3
        found.add(as_int(z) % 2**10)
    assert len(found) == 2**k
