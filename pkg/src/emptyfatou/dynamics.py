"""The map family phi(z) = (z^q - z) / (pi + z^(q^m) - z^(q^n)), q = p^f, on P^1(K).

Besides evaluation and orbits this module holds the exact checkers for the
monomial estimates, the quotient estimate, local scaling and the mapping
properties, plus the constructive search for points witnessing that the
iterates are not equicontinuous.

Every checker returns a :class:`Verdict`.  Valuations that are only known as
lower bounds (the quantity vanished at working precision) are reported as
``None``; a strict inequality is only claimed when the known digits prove it,
otherwise the checker raises PrecisionExhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import count, islice, product

from emptyfatou.errors import (
    BadParameters,
    BothCoordinatesVanish,
    ExponentTooLarge,
    IndeterminatePoint,
    NotIntegral,
    OrbitError,
    PrecisionExhausted,
    WitnessNotFound,
)
from emptyfatou.field import Element, Field, format_element
from emptyfatou.projective import ProjectivePoint, distance_or_none, normalize

MAX_DEGREE = 2**16

VERIFIED = "verified"
EXPERIMENTAL = "experimental_n1"


@dataclass(frozen=True)
class PhiMap:
    field: Field
    m: int
    n: int

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def degree(self) -> int:
        return self.field.q**self.m

    @property
    def qn(self) -> int:
        return self.field.q**self.n

    @property
    def regime_flag(self) -> str:
        """n = 1 lies outside the range the scaling argument covers."""
        return VERIFIED if self.n >= 2 else EXPERIMENTAL

    def monomial(self, x: Element, k: int) -> Element:
        """M_k(x) = x^(p^(k f))."""
        for _ in range(k):
            x = x ** self.q
        return x

    def affine(self, z: Element) -> Element:
        """phi(z) for an element z, by direct division."""
        zq = z ** self.q
        zqn = self.monomial(zq, self.n - 1)
        zD = self.monomial(zqn, self.m - self.n)
        return (zq - z) / (zD - zqn + self.field.pi)

    def denominator(self, z: Element) -> Element:
        return self.field.pi + self.monomial(z, self.m) - self.monomial(z, self.n)

    def homogeneous(self, X: Element, Y: Element) -> tuple[Element, Element]:
        """The degree-p^(mf) homogeneous lift, unnormalized."""
        q, qn, D = self.q, self.qn, self.degree
        Xq = X ** q
        Xqn = self.monomial(Xq, self.n - 1)
        XD = self.monomial(Xqn, self.m - self.n)
        if Y.vec == self.field.one.vec and Y.shift == 0:
            return Xq - X, self.field.pi + XD - Xqn
        YD1 = Y ** (D - qn)
        YDq = YD1 * Y ** (qn - q)
        YD1m = YDq * Y ** (q - 1)  # Y^(D-1)
        YD = YD1m * Y
        return Xq * YDq - X * YD1m, self.field.pi * YD + XD - Xqn * YD1

    def __call__(self, P: ProjectivePoint) -> ProjectivePoint:
        return evaluate(self, P)

    def describe(self) -> str:
        p, f = self.field.p, self.field.f
        e = f"{p}^{f}" if f > 1 else f"{p}"
        return (f"phi(z) = (z^{self.q} - z)/(pi + z^{self.degree} - z^{self.qn})"
                f"  [q = {e}, m = {self.m}, n = {self.n}, degree {self.degree}]")


def make_phi(field: Field, m: int = 3, n: int = 2) -> PhiMap:
    if not m > n >= 1:
        raise BadParameters(f"need m > n >= 1 (got m={m}, n={n})")
    if field.q**m > MAX_DEGREE:
        raise ExponentTooLarge(f"p^(mf) = {field.q**m} exceeds {MAX_DEGREE}")
    return PhiMap(field, m, n)


def evaluate(phi: PhiMap, P: ProjectivePoint) -> ProjectivePoint:
    X, Y = phi.homogeneous(P.x, P.y)
    try:
        return normalize(X, Y)
    except BothCoordinatesVanish as exc:
        raise IndeterminatePoint(f"phi({P.literal()}) has no known digits left") from exc


@dataclass
class Orbit:
    points: list[ProjectivePoint]
    truncated_at: int | None = None  # index of the first point that could not be computed

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)


def orbit(phi: PhiMap, P: ProjectivePoint, steps: int, strict: bool = False) -> Orbit:
    """[P, phi P, ..., phi^steps P].

    With ``strict`` an indeterminate step raises OrbitError carrying the index;
    otherwise the orbit stops there and records ``truncated_at``.
    """
    points = [P]
    for i in range(1, steps + 1):
        try:
            P = evaluate(phi, P)
        except IndeterminatePoint as exc:
            if strict:
                raise OrbitError(i, exc) from exc
            return Orbit(points, truncated_at=i)
        points.append(P)
    return Orbit(points)


# ---------------------------------------------------------------------------
# checkers

PASS, FAIL, VACUOUS, REPORT = "pass", "fail", "vacuous", "report"


@dataclass
class Verdict:
    check_id: str
    inputs: dict
    observed: dict
    expected: str
    verdict: str
    regime_flag: str = VERIFIED

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL


def _val(x: Element) -> int | None:
    return None if x.is_zero() else x.valuation()


def _lower(x: Element) -> int:
    return x.valuation_or_prec()


def _require_integral(**elements: Element) -> None:
    for name, x in elements.items():
        if not x.is_integral():
            raise NotIntegral(f"{name} must lie in O_K")


def check_lemma_2_2(phi: PhiMap, x: Element) -> Verdict:
    """v(M_m(x) - M_n(x)) >= 2 for integral x."""
    _require_integral(x=x)
    diff = phi.monomial(x, phi.m) - phi.monomial(x, phi.n)
    inputs = {"x": format_element(x)}
    v = _val(diff)
    if v is None:
        if diff.prec < 2:
            raise PrecisionExhausted("difference vanishes below pi^2")
        return Verdict("lemma_2_2", inputs, {"v_diff": None, "note": "zero at precision"}, "v_diff >= 2",
                       VACUOUS, phi.regime_flag)
    return Verdict("lemma_2_2", inputs, {"v_diff": v}, "v_diff >= 2", PASS if v >= 2 else FAIL,
                   phi.regime_flag)


def check_lemma_2_3(phi: PhiMap, x: Element, y: Element) -> Verdict:
    """v(M_m diff) > v(M_n diff) > v(x - y), plus v(M_k diff) >= k + v(x - y) for k in {n, m}."""
    _require_integral(x=x, y=y)
    inputs = {"x": format_element(x), "y": format_element(y)}
    expected = "v_m > v_n > v_xy and v_k >= k + v_xy"
    d = x - y
    if d.is_zero():
        return Verdict("lemma_2_3", inputs, {"v_xy": None, "note": "x = y at precision"}, expected, VACUOUS,
                       phi.regime_flag)
    v_xy = d.valuation()
    if v_xy < 1:
        raise ValueError("precondition |x - y| < 1 violated")
    dn = phi.monomial(x, phi.n) - phi.monomial(y, phi.n)
    dm = phi.monomial(x, phi.m) - phi.monomial(y, phi.m)
    if dn.is_zero():
        raise PrecisionExhausted(f"M_n(x) - M_n(y) vanishes modulo pi^{dn.prec}")
    v_n = dn.valuation()
    if dm.is_zero() and dm.prec <= v_n:
        raise PrecisionExhausted(f"M_m(x) - M_m(y) vanishes modulo pi^{dm.prec}")
    chain = _lower(dm) > v_n > v_xy
    linear = v_n >= phi.n + v_xy and _lower(dm) >= phi.m + v_xy
    observed = {"v_xy": v_xy, "v_n": v_n, "v_m": _val(dm), "chain": chain, "linear_bound": linear}
    return Verdict("lemma_2_3", inputs, observed, expected, PASS if chain and linear else FAIL,
                   phi.regime_flag)


def check_lemma_2_5(x: Element, y: Element, u: Element, v: Element) -> Verdict:
    """|x/(1+u) - y/(1+v)| <= |x - y| when |u - v| <= |x - y|; equality when strict."""
    _require_integral(x=x, y=y)
    for name, w in (("u", u), ("v", v)):
        if _lower(w) < 1:
            raise ValueError(f"{name} must lie in pi O_K")
    inputs = {k: format_element(w) for k, w in (("x", x), ("y", y), ("u", u), ("v", v))}
    lhs = x / (1 + u) - y / (1 + v)
    dxy, duv = x - y, u - v
    observed = {"v_lhs": _val(lhs), "v_xy": _val(dxy), "v_uv": _val(duv)}
    expected = "v_lhs >= v_xy if v_uv >= v_xy; v_lhs == v_xy if v_uv > v_xy"
    if dxy.is_zero():
        # |x - y| = 0: the bound only applies when u = v too, and then lhs = 0
        if not duv.is_zero():
            return Verdict("lemma_2_5", inputs, observed, expected, VACUOUS)
        ok = lhs.is_zero() or lhs.valuation() >= dxy.prec
        return Verdict("lemma_2_5", inputs, observed, expected, VACUOUS if ok else FAIL)
    v_xy = dxy.valuation()
    v_uv_low = _lower(duv)
    if not duv.is_zero() and v_uv_low < v_xy:
        return Verdict("lemma_2_5", inputs, observed, expected, VACUOUS)
    if lhs.is_zero() and lhs.prec <= v_xy:
        raise PrecisionExhausted("left side vanishes before the comparison digit")
    v_lhs = _lower(lhs)
    ok = v_lhs >= v_xy
    if v_uv_low > v_xy:
        ok = ok and not lhs.is_zero() and v_lhs == v_xy
    elif duv.is_zero():
        raise PrecisionExhausted("cannot decide whether |u - v| < |x - y|")
    return Verdict("lemma_2_5", inputs, observed, expected, PASS if ok else FAIL)


def check_local_scaling(phi: PhiMap, x: Element, y: Element) -> Verdict:
    """v(phi x - phi y) = v(x - y) - 1 for integral x, y with 1 <= v(x - y) <= N - 2."""
    _require_integral(x=x, y=y)
    inputs = {"x": format_element(x), "y": format_element(y)}
    expected = "v_phi == v_xy - 1"
    d = x - y
    if d.is_zero():
        return Verdict("local_scaling", inputs, {"v_xy": None}, expected, VACUOUS, phi.regime_flag)
    v_xy = d.valuation()
    if not 1 <= v_xy <= phi.field.pi_precision - 2:
        raise ValueError(f"separation v = {v_xy} outside [1, N - 2]")
    dphi = phi.affine(x) - phi.affine(y)
    if dphi.is_zero() and dphi.prec <= v_xy - 1:
        raise PrecisionExhausted("phi(x) - phi(y) vanishes at working precision")
    v_phi = _val(dphi)
    holds = v_phi == v_xy - 1
    observed = {"v_xy": v_xy, "v_phi": v_phi, "holds": holds}
    if phi.regime_flag != VERIFIED:
        return Verdict("local_scaling", inputs, observed, expected, REPORT, phi.regime_flag)
    return Verdict("local_scaling", inputs, observed, expected, PASS if holds else FAIL, phi.regime_flag)


def check_outside_maps_in(phi: PhiMap, P: ProjectivePoint) -> Verdict:
    """phi sends every point outside O_K (including infinity) into pi O_K."""
    if P.in_unit_disk():
        raise ValueError("point lies in O_K")
    image = evaluate(phi, P)
    inputs = {"P": P.literal()}
    observed = {"image": image.literal(), "v_y": image.y.valuation_or_prec(), "v_x": _val(image.x)}
    ok = image.in_unit_disk() and _lower(image.x) >= 1
    return Verdict("outside_maps_in", inputs, observed, "image = [z : 1] with v(z) >= 1", PASS if ok else FAIL,
                   phi.regime_flag)


def check_maps_integral(phi: PhiMap, x: Element) -> Verdict:
    """phi(O_K) lies in O_K and the denominator has valuation exactly 1."""
    _require_integral(x=x)
    den = phi.denominator(x)
    v_den = _val(den)
    image = phi.affine(x)
    observed = {"v_den": v_den, "image_integral": image.is_integral()}
    ok = v_den == 1 and image.is_integral()
    return Verdict("maps_integral", {"x": format_element(x)}, observed, "v_den == 1 and phi(x) in O_K",
                   PASS if ok else FAIL, phi.regime_flag)


def check_m1_bound(phi: PhiMap, x: Element) -> Verdict:
    """v(x^q - x) >= 1 on O_K."""
    _require_integral(x=x)
    diff = x ** phi.q - x
    inputs = {"x": format_element(x)}
    v = _val(diff)
    if v is None:
        return Verdict("m1_bound", inputs, {"v_diff": None, "note": "zero at precision"}, "v_diff >= 1",
                       VACUOUS, phi.regime_flag)
    return Verdict("m1_bound", inputs, {"v_diff": v}, "v_diff >= 1", PASS if v >= 1 else FAIL,
                   phi.regime_flag)


# ---------------------------------------------------------------------------
# expansion witnesses


@dataclass
class Witness:
    P: ProjectivePoint
    Q: ProjectivePoint
    steps: int
    initial_distance_log: int
    final_distance_log: int
    precision: int  # pi-adic digits the witness was computed with
    separations: list[int] = dc_field(default_factory=list)


def unit_directions(field: Field):
    """Teichmuller units first, then units with a nonzero first digit in base-q order."""
    q = field.q
    for a in range(1, q):
        yield field.teichmuller(a)
    for length in count(2):
        for tail in product(range(q), repeat=length - 1):
            if tail[-1] == 0:
                continue
            for a in range(1, q):
                yield field.from_digits((a,) + tail)


def perturb(P: ProjectivePoint, delta_log: int, unit: Element) -> ProjectivePoint:
    """A point at spherical distance exactly |pi|^delta_log from P along ``unit``."""
    step = unit.pi_shift(delta_log)
    if P.in_unit_disk():
        return normalize(P.x + step * P.y, P.y)
    return normalize(P.x, P.y + step * P.x)


def _lift_point(P: ProjectivePoint, field: Field) -> ProjectivePoint:
    return ProjectivePoint(P.x.lift(field), P.y.lift(field))


def _chase(phi: PhiMap, P: ProjectivePoint, Q: ProjectivePoint, max_steps: int):
    """Iterate both points until they are |pi| apart; returns (steps, separations, exhausted)."""
    separations = []
    for step in range(max_steps + 1):
        k = distance_or_none(P, Q)
        if k is None:
            return None, separations, True
        separations.append(k)
        if k <= 1:
            return step, separations, False
        if step == max_steps:
            break
        try:
            P, Q = evaluate(phi, P), evaluate(phi, Q)
        except IndeterminatePoint:
            return None, separations, True
    return None, separations, False


def find_expansion_witness(phi: PhiMap, P: ProjectivePoint, delta_log: int, max_steps: int,
                           attempts: int, precision_limit: int | None = None) -> Witness:
    """Find Q with rho(P, Q) <= |pi|^delta_log and n <= max_steps with rho(phi^n P, phi^n Q) >= |pi|.

    The search runs at the field's precision.  When every direction ran out of
    digits before separating and ``precision_limit`` (base-p digits) allows it,
    the points are re-read as exact representatives in a field with doubled
    precision and the search repeats.
    """
    if delta_log < 1:
        raise ValueError("delta_log must be >= 1")
    best = None
    while True:
        field = phi.field
        exhausted = False
        for unit in islice(unit_directions(field), attempts):
            Q = perturb(P, delta_log, unit)
            steps, seps, ran_out = _chase(phi, P, Q, max_steps)
            if seps:
                best = min(best, seps[-1]) if best is not None else seps[-1]
            if steps is not None:
                return Witness(P, Q, steps, seps[0], seps[-1], field.pi_precision, seps)
            exhausted = exhausted or ran_out
        if not exhausted or precision_limit is None or field.precision >= precision_limit:
            break
        bigger = field.with_precision(min(2 * field.precision, precision_limit))
        phi = PhiMap(bigger, phi.m, phi.n)
        P = _lift_point(P, bigger)
    raise WitnessNotFound(
        f"no separation to |pi| within {max_steps} steps from {P.literal()} (best rho_log {best})",
        best_distance_log=best,
    )

