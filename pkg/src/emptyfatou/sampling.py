"""Seeded random elements and points.

Every randomized suite draws from its own labeled substream of one root seed
(Philox counter-based generator), so adding or reordering suites never changes
the numbers another suite sees.
"""

from __future__ import annotations

import zlib

import numpy as np

from emptyfatou.field import Element, Field
from emptyfatou.projective import ProjectivePoint, infinity, normalize


def substream(seed: int, label: str) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed & (2**64 - 1), spawn_key=(zlib.crc32(label.encode()),))
    return np.random.Generator(np.random.Philox(ss))


def random_int(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrarily large bound."""
    nbytes = (bound.bit_length() + 7) // 8 + 8
    return int.from_bytes(rng.bytes(nbytes), "little") % bound


def random_integral(field: Field, rng: np.random.Generator) -> Element:
    mod = field.p**field.precision
    return field.from_vector([random_int(rng, mod) for _ in range(field.d)])


def random_residue(field: Field, rng: np.random.Generator, nonzero: bool = False) -> int:
    lo = 1 if nonzero else 0
    return int(rng.integers(lo, field.q))


def random_unit(field: Field, rng: np.random.Generator) -> Element:
    x = random_integral(field, rng)
    while x.reduction() == 0:
        x = random_integral(field, rng)
    return x


def random_in_residue_class(field: Field, rng: np.random.Generator, c: int) -> Element:
    return field.teichmuller(c) + random_integral(field, rng).pi_shift(1)


def random_pair_at_depth(field: Field, rng: np.random.Generator, depth: int,
                         residue: int | None = None) -> tuple[Element, Element]:
    """Integral x, y with v(x - y) exactly ``depth``."""
    if residue is None:
        x = random_integral(field, rng)
    else:
        x = random_in_residue_class(field, rng, residue)
    y = x + random_unit(field, rng).pi_shift(depth)
    return x, y


def random_outside_point(field: Field, rng: np.random.Generator, max_depth: int = 3) -> ProjectivePoint:
    """[1 : pi^j u] with 1 <= j <= max_depth and u a unit: a point of P^1(K) \\ O_K other than infinity."""
    j = int(rng.integers(1, max_depth + 1))
    return normalize(field.one, random_unit(field, rng).pi_shift(j))


def random_point(field: Field, rng: np.random.Generator, kind: str) -> ProjectivePoint:
    if kind == "integral":
        return normalize(random_integral(field, rng), field.one)
    if kind == "outside":
        return random_outside_point(field, rng)
    if kind == "infinity":
        return infinity(field)
    raise ValueError(kind)
