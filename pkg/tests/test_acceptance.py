"""Acceptance suite: one check per criterion, each printing a PASS or FAIL line.

Run ``pytest tests/test_acceptance.py -v`` for the summary block, or run this
file as a script to print only the criterion lines.
"""
import random
import sys
import time

from evendicycle.core import (
    enumerate_directed_separations,
    is_k_strongly_connected,
    is_strongly_connected,
    random_digraph,
)
from evendicycle.decomposition import validate_odd_dtd
from evendicycle.erdos_posa import (
    audit_global,
    count_pm_via_transversal,
    counterexample_family,
    extract_main,
    global_decompose,
    max_packing,
    min_transversal,
    verify_packing,
)
from evendicycle.evenness import (
    contains_even_dicycle,
    f7,
    find_weak_odd_bicycle,
    is_non_even,
    odd_bicycle,
    verify_butterfly_minor_model,
)
from evendicycle.matching import (
    enumerate_tight_cuts,
    has_pfaffian_orientation,
    heawood_graph,
    is_k_extendable,
    is_pfaffian_orientation,
    k33,
    m_direction,
    split,
    tight_cut_from_separation,
)
from evendicycle.routing import (
    integralize,
    menger,
    one_sided_even_dicycles,
    planar_shift,
)
from evendicycle import routing
from evendicycle.walls import cylindrical_grid, odd_bicycle_from_jump, vname

from helpers import (
    block_decomposition,
    brute_linkage,
    digraph_iso_classes,
    half_integral_family,
    planar_union,
    pm_count_by_permutation,
    random_matched_bipartite,
)

RESULTS: dict[int, str] = {}


def report(num: int, title: str, failures: list[str], detail: str, started: float) -> None:
    ok = not failures
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}  {title}: {detail} [{time.perf_counter() - started:.1f}s]"
    if failures:
        line += " | first failure: " + failures[0]
    RESULTS[num] = line
    print(line)
    assert ok, line


def test_criterion_01_non_even_iff_no_weak_odd_bicycle():
    start = time.perf_counter()
    bad, counts = [], []
    for n in range(1, 6):
        classes = digraph_iso_classes(n)
        counts.append(len(classes))
        for D in classes:
            if is_non_even(D).non_even != (find_weak_odd_bicycle(D) is None):
                bad.append(f"class {sorted(D.edges)}")
    if counts != [1, 3, 16, 218, 9608]:
        bad.append(f"isomorphism class counts {counts}")
    rng = random.Random(1)
    for _ in range(1000):
        D = random_digraph(6, rng.uniform(0.05, 0.6), rng)
        m = find_weak_odd_bicycle(D)
        if is_non_even(D).non_even != (m is None):
            bad.append(f"random {sorted(D.edges)}")
        elif m is not None and not verify_butterfly_minor_model(D, m.target, m):
            bad.append(f"model fails on {sorted(D.edges)}")
    report(1, "non-even iff no weak odd bicycle minor", bad,
           f"{sum(counts)} classes (n<=5) + 1000 random n=6", start)


def test_criterion_02_named_verdicts():
    start = time.perf_counter()
    bad = []
    for order in (3, 5, 7):
        B = odd_bicycle(order)
        if is_non_even(B).non_even:
            bad.append(f"odd bicycle {order} reported non-even")
        C = contains_even_dicycle(B)
        if C is None or C.length != 2:
            bad.append(f"odd bicycle {order}: no digon found")
    if not is_non_even(f7()).non_even:
        bad.append("F7 reported even")
    o = has_pfaffian_orientation(heawood_graph())
    if o is None or not is_pfaffian_orientation(heawood_graph(), o):
        bad.append("Heawood graph not Pfaffian")
    if has_pfaffian_orientation(k33()) is not None:
        bad.append("K33 reported Pfaffian")
    report(2, "odd bicycles, F7, Heawood, K33", bad, "3 odd bicycles + 3 named verdicts", start)


def test_criterion_03_perimeter_jumps():
    start = time.perf_counter()
    bad, total = [], 0
    B = odd_bicycle(3)
    for k in (3, 4, 5):
        G = cylindrical_grid(k)
        for p in range(2 * k):
            for q in range(2 * k):
                for jump in ([vname(1, p), vname(k, q)], [vname(k, q), vname(1, p)]):
                    total += 1
                    H = G.add_edges([tuple(jump)])
                    m = odd_bicycle_from_jump(G, jump)
                    if not verify_butterfly_minor_model(H, B, m):
                        bad.append(f"k={k} jump {jump}: model")
                    elif contains_even_dicycle(m.host(H)) is None:
                        bad.append(f"k={k} jump {jump}: host has no even dicycle")
    report(3, "odd bicycle from every perimeter jump", bad, f"{total} jumps over k=3,4,5", start)


def test_criterion_04_menger_and_integralize():
    start = time.perf_counter()
    bad = []
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(1, 8)
        D = random_digraph(n, rng.random() * 0.6, rng)
        X = set(rng.sample(D.vertices, rng.randint(0, n)))
        Y = set(rng.sample(D.vertices, rng.randint(0, n)))
        fam, cut = menger(D, X, Y)
        ok = (fam.validate(D) and cut.verify(D) and all(p[0] in X and p[-1] in Y for p in fam.paths)
              and len(fam) == cut.cardinality == brute_linkage(D, X, Y))
        if not ok:
            bad.append(f"menger on {sorted(D.edges)} X={sorted(X)} Y={sorted(Y)}")
    for _ in range(200):
        D, X, Y, half, k = half_integral_family(rng)
        out = integralize(D, X, Y, half)
        if not (len(out) == k and out.validate(D) and out.vertex_set() <= half.vertex_set()
                and all(p[0] in X and p[-1] in Y for p in out.paths)):
            bad.append(f"integralize k={k} on {sorted(D.edges)}")
    report(4, "Menger duality and integralize", bad, "200 + 200 instances", start)


def test_criterion_05_planar_shifting():
    start = time.perf_counter()
    bad, found = [], 0
    rng = random.Random(5)
    for _ in range(500):
        Ce, Co, rot = planar_union(rng)
        oracle = one_sided_even_dicycles(Ce, Co, rot)
        r = planar_shift(Ce, Co, rot)
        if (r is None) != (not oracle):
            bad.append(f"existence disagrees on Ce={Ce.vertices} Co={Co.vertices}")
            continue
        if r is None:
            continue
        found += 1
        U, _ = routing._union(Ce, Co)
        region = routing._regions(U, Co, rot)
        sides = {region[e] for e in r.dicycle.edges() if e in region}
        if not (r.dicycle.validate(U) and r.dicycle.is_even and len(sides) <= 1):
            bad.append(f"returned dicycle not one-sided for Ce={Ce.vertices} Co={Co.vertices}")
    report(5, "planar shifting", bad, f"500 planar unions, {found} shifted", start)


def _norm(B, shore):
    return shore if B.vertices[0] not in shore else frozenset(set(B.vertices) - shore)


def _cuts_match_separations(D) -> bool:
    B = split(D)
    cuts = {_norm(B, c.shore) for c in enumerate_tight_cuts(B) if c.nontrivial}
    seps = [s for s in enumerate_directed_separations(D, 1) if s.order == 1 and not s.is_trivial()]
    return cuts == {_norm(B, tight_cut_from_separation(D, s.side_a, s.side_b)) for s in seps}


def test_criterion_06_matching_round_trips():
    start = time.perf_counter()
    bad = []
    rng = random.Random(6)
    for _ in range(1000):
        D = random_digraph(rng.randint(1, 10), rng.uniform(0.05, 0.6), rng)
        E = m_direction(split(D))
        if E.vertices != D.vertices or E.edge_set != D.edge_set:
            bad.append(f"round trip on {sorted(D.edges)}")
    pool = [D for n in range(2, 6) for D in digraph_iso_classes(n)]
    for n in (6, 7, 8):
        pool += [random_digraph(n, rng.uniform(0.2, 0.8), rng) for _ in range(150)]
    ext = strong = 0
    for D in pool:
        for k in range(1, min(3, D.n - 1) + 1):
            ext += 1
            if is_k_extendable(split(D), k) != is_k_strongly_connected(D, k):
                bad.append(f"{k}-extendability on {sorted(D.edges)}")
        if is_strongly_connected(D):
            strong += 1
            if not _cuts_match_separations(D):
                bad.append(f"tight cuts on {sorted(D.edges)}")
    # Exhaustive coverage of n <= 8 would mean every digraph up to isomorphism on
    # 6, 7 and 8 vertices (about 1.5e6, 8.8e8 and 1.8e12 classes), which is out of
    # reach; the sampled part above is the evidence we can give.  The gap is
    # reported so the criterion is not passed on a narrower scope than asked.
    bad.append("exhaustive scope n <= 8 not covered: exhaustive up to n = 5, 150 samples each for n = 6, 7, 8")
    report(6, "split/M-direction round trips", bad,
           f"1000 round trips, {ext} extendability checks, {strong} strong digraphs for tight cuts", start)


def test_criterion_07_counterexample_family():
    start = time.perf_counter()
    bad, done = [], []
    for k in (2, 3, 4):
        D = counterexample_family(k, certify_up_to=0)
        packing = len(max_packing(D, 1, target=2))
        tau = len(min_transversal(D))
        if packing != 1 or tau < k:
            bad.append(f"k={k}: packing {packing}, transversal {tau}")
        done.append(f"k={k}: packing {packing}, transversal {tau}")
    report(7, "counterexample family", bad, "; ".join(done), start)


def test_criterion_08_extract_main():
    start = time.perf_counter()
    bad, kinds = [], {"packing": 0, "transversal": 0}
    rng = random.Random(8)
    built = 0
    while built < 100:
        got = block_decomposition(rng)
        if got is None:
            continue
        built += 1
        D, dec = got
        k = rng.randint(1, 3)
        r = extract_main(D, dec, k)
        kinds[r.kind] += 1
        if r.packing is not None:
            ok = verify_packing(D, r.packing, k, 4)
        else:
            ok = r.transversal.verify(D) and len(r.transversal) <= r.bound
        if not ok:
            bad.append(f"k={k} on {sorted(D.edges)}")
    report(8, "extract_main on built strong odd decompositions", bad,
           f"100 instances, {kinds['packing']} packings, {kinds['transversal']} transversals", start)


def test_criterion_09_global_decompose():
    start = time.perf_counter()
    bad, packings = [], 0
    rng = random.Random(9)
    for _ in range(50):
        n = rng.randint(2, 12)
        D = random_digraph(n, rng.uniform(0.1, 0.4), rng)
        k = rng.randint(1, 3)
        Z = frozenset(rng.sample(D.vertices, rng.randint(0, min(3, n))))
        res = global_decompose(D, k, Z)
        problems = audit_global(D, res)
        if res.packing is not None:
            packings += 1
            if not verify_packing(D, res.packing, k, 4):
                problems.append("packing")
        elif not validate_odd_dtd(D, res.decomposition, strong=True).ok:
            problems.append("strong odd validation")
        if problems:
            bad.append(f"n={n} k={k}: {problems[0]}")
    report(9, "global_decompose with the desk oracle", bad, f"50 instances, {packings} packings", start)


def test_criterion_10_count_pm():
    start = time.perf_counter()
    bad = []
    H = heawood_graph()
    r = count_pm_via_transversal(H)
    direct = pm_count_by_permutation(H)
    if not (direct == r.direct == r.stratified == 24):
        bad.append(f"Heawood: oracle {direct}, direct {r.direct}, stratified {r.stratified}")
    rng = random.Random(10)
    for _ in range(200):
        B = random_matched_bipartite(rng, rng.randint(1, 8), rng.uniform(0.1, 0.6))
        r = count_pm_via_transversal(B)
        expected = pm_count_by_permutation(B)
        if not (r.direct == r.stratified == expected):
            bad.append(f"{sorted(B.edges)}: {r.direct}/{r.stratified} vs {expected}")
    report(10, "matching counts through a transversal", bad, "Heawood = 24 + 200 random", start)


if __name__ == "__main__":
    tests = [v for name, v in sorted(globals().items()) if name.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
