"""Exit criteria, one test each.  Every test prints a single PASS/FAIL line."""

import collections
import subprocess
import sys
import time

import pytest

from emptyfatou import WitnessNotFound, make_field
from emptyfatou.dynamics import PASS, check_lemma_2_5, find_expansion_witness, make_phi
from emptyfatou.projective import infinity
from emptyfatou.sampling import random_integral, random_pair_at_depth, random_point, random_unit, substream
from emptyfatou.symbolic import exhaustive_bijectivity, itinerary, shift
from emptyfatou.verify import RunConfig, count_periodic_points, run_verify

pytestmark = pytest.mark.acceptance

FIELDS = [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2), (5, 1, 1)]
SEED = 2024
SAMPLES = 500
M = 3


def field_id(t):
    return "p{}e{}f{}".format(*t)


def suite(pef, name):
    p, e, f = pef
    cfg = RunConfig(p=p, e=e, f=f, m=M, n=2, seed=SEED, samples=SAMPLES)
    start = time.perf_counter()
    records = [r for r in run_verify(cfg, [name]) if r["suite"] == name]
    return records, time.perf_counter() - start


@pytest.mark.parametrize("pef", FIELDS, ids=field_id)
def test_criterion_1_monomial_difference(pef, report):
    records, elapsed = suite(pef, "lemma_2_2")
    # the suite interleaves the |x^q - x| <= |pi| bound; keep the v >= 2 records
    main = [r for r in records if r["expected"] == "v_diff >= 2"]
    bad = [r for r in main if r["verdict"] != PASS and r["verdict"] != "vacuous"]
    low = [r for r in main if r["observed"]["v_diff"] is not None and r["observed"]["v_diff"] < 2]
    ok = len(main) >= SAMPLES and not bad and not low and elapsed < 5
    report(1, ok, f"{field_id(pef)}: {len(main)} x, {len(bad) + len(low)} violations, {elapsed:.2f}s")
    assert ok


@pytest.mark.parametrize("pef", FIELDS, ids=field_id)
def test_criterion_2_valuation_chain(pef, report):
    records, elapsed = suite(pef, "lemma_2_3")
    N = make_field(*pef).pi_precision
    depths = [r["observed"]["v_xy"] for r in records]
    bad = [r for r in records if r["verdict"] != PASS]
    chain = all(r["observed"]["chain"] and r["observed"]["linear_bound"] for r in records if r["verdict"] == PASS)
    ok = (len(records) == SAMPLES and not bad and chain and elapsed < 5
          and all(1 <= d <= N - M - 2 for d in depths))
    report(2, ok, f"{field_id(pef)}: {len(records)} pairs, {len(bad)} failures, {elapsed:.2f}s")
    assert ok


@pytest.mark.parametrize("pef", FIELDS, ids=field_id)
def test_criterion_3_unit_quotients(pef, report):
    K = make_field(*pef)
    rng = substream(SEED, "acceptance_quotients")
    start = time.perf_counter()
    verdicts = collections.Counter()
    strict = 0
    while sum(verdicts.values()) < SAMPLES:
        depth = int(rng.integers(0, K.pi_precision // 2))
        x, y = random_pair_at_depth(K, rng, depth)
        u = random_integral(K, rng).pi_shift(1)
        gap = max(1, depth + int(rng.integers(0, 4)))
        v = u if rng.random() < 0.1 else u + random_unit(K, rng).pi_shift(gap)
        if (u - v).valuation_or_prec() < depth:
            continue  # not admissible
        strict += (u - v).valuation_or_prec() > depth
        verdicts[check_lemma_2_5(x, y, u, v).verdict] += 1
    elapsed = time.perf_counter() - start
    ok = verdicts == {PASS: SAMPLES} and elapsed < 5
    report(3, ok, f"{field_id(pef)}: {dict(verdicts)} ({strict} strict), {elapsed:.2f}s")
    assert ok


@pytest.mark.parametrize("pef", FIELDS, ids=field_id)
def test_criterion_4_local_scaling(pef, report):
    records, elapsed = suite(pef, "local_scaling")
    N = make_field(*pef).pi_precision
    bad = [r for r in records if r["verdict"] != PASS or r["observed"]["v_phi"] != r["observed"]["v_xy"] - 1]
    per_depth = collections.Counter(r["observed"]["v_xy"] for r in records)
    ok = (not bad and sorted(per_depth) == list(range(1, N - 1)) and set(per_depth.values()) == {20}
          and elapsed < 10)
    report(4, ok, f"{field_id(pef)}: {len(records)} pairs over depths 1..{N - 2}, {len(bad)} failures, "
                  f"{elapsed:.2f}s")
    assert ok


@pytest.mark.parametrize("pef", FIELDS, ids=field_id)
def test_criterion_5_mapping(pef, report):
    records, elapsed = suite(pef, "mapping")
    inside = [r for r in records if "v_den" in r["observed"]]
    outside = [r for r in records if "image" in r["observed"]]
    bad = [r for r in records if r["verdict"] != PASS]
    has_inf = any(r["inputs"]["P"] == infinity(make_field(*pef)).literal() for r in outside)
    ok = (len(inside) == len(outside) == SAMPLES and has_inf and not bad
          and all(r["observed"]["v_den"] == 1 for r in inside) and elapsed < 10)
    report(5, ok, f"{field_id(pef)}: {len(inside)} inside, {len(outside)} outside, {len(bad)} failures, "
                  f"{elapsed:.2f}s")
    assert ok


def test_criterion_6_conjugacy_and_bijectivity(report):
    K = make_field(2)
    phi = make_phi(K, M, 2)
    start = time.perf_counter()
    v = exhaustive_bijectivity(phi, 8)
    rng = substream(SEED, "acceptance_conjugacy")
    mismatches = 0
    for _ in range(SAMPLES):
        z = random_integral(K, rng)
        if itinerary(phi, phi.affine(z), 20) != shift(itinerary(phi, z, 21)):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = (v.verdict == PASS and v.observed["distinct_balls"] == 256 and v.observed["roundtrip_failures"] == 0
          and mismatches == 0 and elapsed < 30)
    report(6, ok, f"{v.observed['distinct_balls']} disjoint balls, {mismatches} shift mismatches, {elapsed:.2f}s")
    assert ok


def test_criterion_7_periodic_points(report):
    phi = make_phi(make_field(2), M, 2)
    assert phi.field.pi_precision >= 20
    start = time.perf_counter()
    counts = {}
    ok = True
    for k in range(1, 5):
        v = count_periodic_points(phi, k)
        counts[k] = v.observed["points"]
        ok = ok and v.verdict == PASS and counts[k] == 2**k and not v.observed["failures"]
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 30
    report(7, ok, f"fixed points of phi^k: {counts}, {elapsed:.2f}s")
    assert ok


def test_criterion_8_witness_totality(report):
    K = make_field(2)
    phi = make_phi(K, M, 2)
    delta = 10
    rng = substream(SEED, "acceptance_witness")
    points = [("infinity", infinity(K))]
    points += [(kind, random_point(K, rng, kind)) for kind in ("integral", "outside") * 50][:99]
    start = time.perf_counter()
    found = collections.Counter()
    missing = collections.Counter()
    for kind, P in points:
        try:
            find_expansion_witness(phi, P, delta, delta + 3, 8, precision_limit=256)
            found[kind] += 1
        except WitnessNotFound:
            missing[kind] += 1
    elapsed = time.perf_counter() - start
    ok = not missing and elapsed < 30
    report(8, ok, f"found {dict(found)}, WitnessNotFound {dict(missing)} within {delta + 3} steps, "
                  f"{elapsed:.2f}s")
    assert ok


def test_criterion_9_determinism(report):
    argv = [sys.executable, "-m", "emptyfatou", "verify", "--p", "2", "--e", "1", "--f", "1", "--m", "3",
            "--n", "2", "--precision", "32", "--samples", "500", "--seed", "7"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    ok = first.returncode == second.returncode == 0 and first.stdout == second.stdout and first.stdout
    report(9, bool(ok), f"{len(first.stdout)} bytes, exit codes {first.returncode}/{second.returncode}, "
                        f"identical={first.stdout == second.stdout}")
    assert ok
