"""The projective line P^1(K) with the spherical metric.

Distances are reported as the integer ``k`` with ``rho = p^(-k/e)``, i.e. the
pi-adic valuation of the cross term ``x1*y2 - x2*y1`` of normalized points.
"""

from __future__ import annotations

from dataclasses import dataclass

from emptyfatou.errors import BothCoordinatesVanish, LiteralError, PrecisionExhausted
from emptyfatou.field import Element, Field, format_element, parse_element


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A normalized pair [x : y]: both coordinates integral, at least one a unit."""

    x: Element
    y: Element

    @property
    def field(self) -> Field:
        return self.x.field

    def is_infinity(self) -> bool:
        return self.y.is_zero()

    def in_unit_disk(self) -> bool:
        """True for points of O_K, i.e. [z : 1] with z integral."""
        return self.y.valuation_or_prec() == 0

    def affine(self) -> Element:
        """z with [z : 1] = self; only for points of O_K."""
        if not self.in_unit_disk():
            raise ValueError("point lies outside O_K")
        return self.x / self.y

    def literal(self) -> str:
        return f"[{format_element(self.x)} : {format_element(self.y)}]"

    def __repr__(self):
        return f"ProjectivePoint{self.literal()}"


def normalize(x: Element, y: Element) -> ProjectivePoint:
    """Canonical representative: [z : 1] when |x| <= |y|, else [1 : w] with |w| < 1.

    Either way max(|x|, |y|) = 1, and every point has exactly one literal.
    """
    if x.is_zero() and y.is_zero():
        raise BothCoordinatesVanish("both homogeneous coordinates vanish at working precision")
    t = min(x.valuation_or_prec(), y.valuation_or_prec())
    if t:
        x, y = x.pi_shift(-t), y.pi_shift(-t)
    one = x.field.one
    if not y.is_zero() and y.valuation() == 0:
        return ProjectivePoint(x / y, one)
    return ProjectivePoint(one, y / x)


def point(z: Element) -> ProjectivePoint:
    """The point [z : 1] (normalized, so z may be non-integral)."""
    return normalize(z, z.field.one)


def infinity(field: Field) -> ProjectivePoint:
    return ProjectivePoint(field.one, field.zero)


def spherical_distance(P: ProjectivePoint, Q: ProjectivePoint) -> int:
    """The k with rho(P, Q) = p^(-k/e).

    Both points are normalized, so the denominators are 1.  Raises
    PrecisionExhausted when the points are indistinguishable at precision.
    """
    cross = P.x * Q.y - Q.x * P.y
    if cross.is_zero():
        raise PrecisionExhausted(f"points agree modulo pi^{cross.prec}")
    return cross.valuation()


def distance_or_none(P: ProjectivePoint, Q: ProjectivePoint) -> int | None:
    try:
        return spherical_distance(P, Q)
    except PrecisionExhausted:
        return None


def same_point(P: ProjectivePoint, Q: ProjectivePoint) -> bool:
    """Indistinguishable at working precision (rho vanishes mod the known digits)."""
    return distance_or_none(P, Q) is None


def format_distance(k: int, field: Field) -> str:
    return f"p^(-{k}/{field.e})" if k else "p^(0) = 1"


def _split_pair(body: str) -> tuple[str, str] | None:
    # the separating colon is the one at bracket depth 0 not belonging to "digits:"
    depth = 0
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == ":" and depth == 0 and not body[:i].endswith("digits"):
            return body[:i], body[i + 1:]
    return None


def parse_point(field: Field, text: str) -> ProjectivePoint:
    """``inf``, an element literal z (meaning [z : 1]), or ``[<elem> : <elem>]``."""
    text = text.strip()
    if text.lower() in ("inf", "infinity", "oo"):
        return infinity(field)
    compact = text.replace(" ", "")
    if compact.startswith("[") and compact.endswith("]"):
        pair = _split_pair(compact[1:-1])
        if pair is None:
            raise LiteralError(f"bad point literal {text!r}")
        return normalize(parse_element(field, pair[0]), parse_element(field, pair[1]))
    try:
        return point(parse_element(field, text))
    except LiteralError:
        raise LiteralError(f"bad point literal {text!r}") from None
