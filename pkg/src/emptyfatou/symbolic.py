"""Coding of (O_K, phi) by the one-sided full shift over the residue field.

A point z gets the itinerary ``w_i = reduction(phi^i(z))``.  Words are plain
tuples of residue codes; the inverse direction (cylinder -> ball) is computed
greedily one pi-adic digit at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from emptyfatou.errors import DecodeAmbiguous, DecodeEmpty, EmptyWord, LiteralError, PrecisionExhausted
from emptyfatou.field import Element, format_element
from emptyfatou.dynamics import FAIL, PASS, PhiMap, Verdict

Word = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CodedBall:
    """The ball center + pi^radius_log O_K."""

    center: Element
    radius_log: int

    def contains(self, z: Element) -> bool:
        d = z - self.center
        return d.valuation_or_prec() >= self.radius_log

    def key(self) -> tuple[int, ...]:
        """Teichmuller digits of the center below the radius; identifies the ball."""
        return tuple(self.center.digits(self.radius_log))

    def literal(self) -> str:
        return f"{{center: {format_element(self.center)}, radius_log: {self.radius_log}}}"


def parse_word(text: str, alphabet: int) -> Word:
    text = text.strip()
    if not text:
        return ()
    try:
        w = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise LiteralError(f"bad word literal {text!r}") from None
    if any(not 0 <= a < alphabet for a in w):
        raise LiteralError(f"word symbols must lie in [0, {alphabet})")
    return w


def format_word(w: Word) -> str:
    return ",".join(map(str, w))


def shift(w: Word) -> Word:
    if not w:
        raise EmptyWord("shift of the empty word")
    return tuple(w[1:])


def itinerary(phi: PhiMap, z: Element, depth: int) -> Word:
    if depth > phi.field.pi_precision:
        raise PrecisionExhausted(f"depth {depth} exceeds {phi.field.pi_precision} pi-adic digits")
    out = []
    for i in range(depth):
        if i:
            z = phi.affine(z)
        out.append(z.reduction())
    return tuple(out)


def decode(phi: PhiMap, w: Word) -> CodedBall:
    """The ball of points whose itinerary starts with w.

    Digit k of the center is the unique Teichmuller digit a for which
    phi^k(center + [a] pi^k) reduces to w[k]; only k + 1 digits of the
    candidate influence that residue, so candidates are evaluated at that
    precision.
    """
    field = phi.field
    if len(w) > field.pi_precision:
        raise PrecisionExhausted(f"word of length {len(w)} exceeds {field.pi_precision} pi-adic digits")
    center = field.zero
    for k, target in enumerate(w):
        if not 0 <= target < field.q:
            raise LiteralError(f"symbol {target} outside [0, {field.q})")
        matches = []
        for a in range(field.q):
            digit = field.teichmuller(a).pi_shift(k)
            z = (center + digit).with_precision(k + 1)
            for _ in range(k):
                z = phi.affine(z)
            if z.reduction() == target:
                matches.append(digit)
        if not matches:
            raise DecodeEmpty(f"no digit at position {k} realises symbol {target} of {format_word(w)}")
        if len(matches) > 1:
            raise DecodeAmbiguous(f"{len(matches)} digits at position {k} realise symbol {target}")
        center = center + matches[0]
    return CodedBall(center, len(w))


def exhaustive_bijectivity(phi: PhiMap, depth: int) -> Verdict:
    """Decode every word of the given length and check the balls tile O_K."""
    q = phi.field.q
    if q**depth > 10**5:
        raise ValueError(f"{q}^{depth} words is beyond the exhaustive bound")
    keys = set()
    roundtrip_failures = 0
    words = 0
    for w in product(range(q), repeat=depth):
        ball = decode(phi, w)
        keys.add(ball.key())
        if itinerary(phi, ball.center, depth) != w:
            roundtrip_failures += 1
        words += 1
    observed = {"words": words, "distinct_balls": len(keys), "roundtrip_failures": roundtrip_failures,
                "radius_log": depth}
    ok = words == len(keys) == q**depth and roundtrip_failures == 0
    return Verdict("bijectivity", {"depth": depth}, observed,
                   f"{q**depth} disjoint balls of radius |pi|^{depth}", PASS if ok else FAIL, phi.regime_flag)


def periodic_point(phi: PhiMap, w: Word) -> Element:
    """The point with itinerary w repeated forever, to working precision.

    Decodes the periodic word to depth N - 1; the fixed point of phi^|w| in
    that cylinder agrees with the center to at least that many digits.
    """
    N = phi.field.pi_precision
    if not 1 <= len(w) <= (N - 2) // 2:
        raise ValueError(f"period {len(w)} outside [1, {(N - 2) // 2}]")
    reps = -(-N // len(w))
    return decode(phi, (tuple(w) * reps)[:N - 1]).center


def iterate(phi: PhiMap, z: Element, k: int) -> Element:
    for _ in range(k):
        z = phi.affine(z)
    return z
