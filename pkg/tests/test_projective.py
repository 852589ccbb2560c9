import pytest
from hypothesis import given, settings, strategies as st

from emptyfatou import LiteralError, PrecisionExhausted, make_field, parse_element
from emptyfatou.errors import BothCoordinatesVanish
from emptyfatou.projective import (
    format_distance,
    infinity,
    normalize,
    parse_point,
    point,
    same_point,
    spherical_distance,
)

Q2 = make_field(2)
RAM = make_field(3, e=2)


def test_normalize_examples():
    K = RAM
    P = normalize(K.pi, K.pi_power(2))
    assert P.x == K.one and P.y == K.pi
    assert normalize(K.one, K.zero).is_infinity()
    P = normalize(K.element(3), K.one)
    assert P.x == K.element(3) and P.y == K.one
    with pytest.raises(BothCoordinatesVanish):
        normalize(K.zero, K.zero)
    # BothCoordinatesVanish is a precision failure
    assert issubclass(BothCoordinatesVanish, PrecisionExhausted)


@pytest.mark.parametrize("K", [Q2, RAM])
def test_distance_examples(K):
    zero, inf = point(K.zero), infinity(K)
    assert spherical_distance(zero, inf) == 0
    assert spherical_distance(point(K.pi), zero) == 1
    assert spherical_distance(normalize(K.one, K.pi), inf) == 1
    with pytest.raises(PrecisionExhausted):
        spherical_distance(zero, zero)


def test_format_distance():
    assert format_distance(0, Q2) == "p^(0) = 1"
    assert format_distance(3, RAM) == "p^(-3/2)"


def test_point_literals():
    assert parse_point(Q2, "inf").is_infinity()
    P = parse_point(Q2, "digits:[0,1]")
    assert P.in_unit_disk() and P.affine() == Q2.element(2)
    P = parse_point(Q2, "[digits:[1] : digits:[0,0,1]]")
    assert P.literal() == "[digits:[1] : digits:[0,0,1]]"
    assert same_point(P, normalize(Q2.one, Q2.element(4)))
    assert same_point(parse_point(Q2, "pi^-2*digits:[1]"), P)
    with pytest.raises(LiteralError):
        parse_point(Q2, "[1 : ]")


def test_affine_only_inside_unit_disk():
    P = normalize(Q2.one, Q2.element(4))
    assert not P.in_unit_disk()
    assert (P.x / P.y).valuation() == -2
    with pytest.raises(ValueError):
        P.affine()


FIELDS = [Q2, RAM, make_field(2, f=2, precision=12)]


@st.composite
def points(draw, K):
    kind = draw(st.sampled_from(["integral", "outside", "inf"]))
    if kind == "inf":
        return infinity(K)
    mod = K.p**K.precision
    vec = [draw(st.integers(0, mod - 1)) for _ in range(K.d)]
    if kind == "integral":
        return point(K.from_vector(vec))
    vec[0] = vec[0] - vec[0] % K.p + 1  # a unit
    return normalize(K.one, K.from_vector(vec).pi_shift(draw(st.integers(1, 4))))


@st.composite
def triples(draw):
    K = draw(st.sampled_from(FIELDS))
    return K, draw(points(K)), draw(points(K)), draw(points(K))


def _dist(P, Q):
    try:
        return spherical_distance(P, Q)
    except PrecisionExhausted:
        return P.field.pi_precision


@settings(max_examples=200, deadline=None)
@given(triples())
def test_spherical_metric_is_ultrametric(data):
    K, P, Q, R = data
    pq, qr, pr = _dist(P, Q), _dist(Q, R), _dist(P, R)
    assert min(pq, qr, pr) >= 0
    assert pr >= min(pq, qr)
    if P.in_unit_disk() and Q.in_unit_disk() and pq < K.pi_precision:
        assert pq == (P.affine() - Q.affine()).valuation()


@settings(max_examples=100, deadline=None)
@given(triples(), st.integers(-3, 3), st.integers(1, 2**20))
def test_distance_is_scale_invariant(data, shift, odd):
    K, P, Q, _ = data
    lam = K.element(2 * odd + 1 if K.p == 2 else odd * K.p + 1).pi_shift(shift)
    assert _dist(normalize(P.x * lam, P.y * lam), Q) == _dist(P, Q)
