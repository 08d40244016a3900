"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the summary lines are printed at
the end of the session) or ``python3 tests/test_acceptance.py``.
"""

import cmath
import random
import time
from fractions import Fraction as Q
from itertools import combinations, permutations, product

import pytest

from simplicial_holonomy import deligne as D
from simplicial_holonomy.chains import homology, normalized_complex, simplicial_abelian_homotopy, simplicial_chain_complex
from simplicial_holonomy.fixtures import boundary_complex, torus7, x_area_form
from simplicial_holonomy.forms import PolyMap, RationalForm, direct_partial, faa_di_bruno
from simplicial_holonomy.loopgroup import abelianize, check_principal_fibration, cyclic_group, loop_group, pi0_of_group, w_total, wbar
from simplicial_holonomy.poly import Poly, RationalFunction
from simplicial_holonomy.simpset import boundary_sphere, full_simplex, ordered_to_sset
from simplicial_holonomy.subdivision import CORPUS_DEPTH, barr_kock_check, identity_residuals, random_chain
from simplicial_holonomy.vanest import barycentric_refine, riemann_sum, taylor_antiderivative, unit_simplex, van_est

RESULTS: dict = {}


def record(key: str, ok: bool, seconds: float, limit: float, detail: str):
    ok = ok and seconds < limit
    RESULTS[key] = f"criterion {key:>3}: {'PASS' if ok else 'FAIL'}  ({seconds:.2f}s / {limit:.0f}s)  {detail}"
    print(RESULTS[key])
    return ok


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = [RESULTS[k] for k in sorted(RESULTS, key=lambda s: (int(s.rstrip("ab")), s))]
    if reporter is not None:
        reporter.write_sep("=", "acceptance criteria")
        for line in lines:
            reporter.write_line(line)


def test_criterion_01_subdivision_identities():
    t0 = time.perf_counter()
    rng = random.Random(0)
    failures, reached = [], {}
    for k in range(200):
        degree = k % 5
        depth = CORPUS_DEPTH[degree]
        reached[degree] = depth
        res = identity_residuals(random_chain(rng, degree), depth)
        failures += [(k, name) for name, ok in res.items() if not ok]
    dt = time.perf_counter() - t0
    shallow = {d: r for d, r in reached.items() if r < 4}
    detail = f"200 chains, identity failures={len(failures)}, depth per degree={reached}"
    if shallow:
        detail += f"; r<=4 not reached for degrees {sorted(shallow)} (term counts grow like ((k+1)!)^r)"
    ok = record("1", not failures and not shallow, dt, 10, detail)
    assert not failures, failures[:5]
    assert ok, RESULTS["1"]


def test_criterion_02_barr_kock():
    t0 = time.perf_counter()
    rng = random.Random(1)
    results = []
    for k in range(4):
        for _ in range(3):
            pts = [tuple(Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(max(k, 1))) for _ in range(k + 1)]
            results.append(barr_kock_check(pts))
    dt = time.perf_counter() - t0
    ok = record("2", all(results), dt, 5, f"{len(results)} simplices, all permutations of k+1 <= 4 vertices")
    assert ok


def test_criterion_03_homology_oracle():
    t0 = time.perf_counter()
    got = {}
    for name, K, top in (("sphere2", boundary_complex(3), 2), ("torus7", torus7(), 2)):
        C = normalized_complex(ordered_to_sset(K, top + 1), top + 1)
        Dc = simplicial_chain_complex(K, top + 1)
        hs = [homology(C, n) for n in range(top + 1)]
        same = hs == [homology(Dc, n) for n in range(top + 1)]
        got[name] = ([str(h) for h in hs], same)
    dt = time.perf_counter() - t0
    ok = got["sphere2"] == (["Z", "0", "Z"], True) and got["torus7"] == (["Z", "Z^2", "Z"], True)
    assert record("3", ok, dt, 5, f"{got}")


def test_criterion_04_kan_theorem():
    t0 = time.perf_counter()
    S1 = boundary_sphere(2, 3)
    S2 = boundary_sphere(3, 3)
    D2 = full_simplex(2, 3)
    A1 = abelianize(loop_group(S1, "0", depth=2))
    A2 = abelianize(loop_group(S2, "0", depth=2))
    AD = abelianize(loop_group(D2, "0", depth=2))
    rows = {
        "pi0(A S1)": (str(simplicial_abelian_homotopy(A1, 0)), str(homology(normalized_complex(S1, 2), 1))),
        "pi1(A S2)": (str(simplicial_abelian_homotopy(A2, 1)), str(homology(normalized_complex(S2, 3), 2))),
    }
    disk = [str(simplicial_abelian_homotopy(AD, i)) for i in range(2)]
    dt = time.perf_counter() - t0
    ok = rows["pi0(A S1)"] == ("Z", "Z") and rows["pi1(A S2)"] == ("Z", "Z") and disk == ["0", "0"]
    assert record("4", ok, dt, 30, f"{rows}, disk={disk}")


def test_criterion_05_pi0_loop_group():
    t0 = time.perf_counter()
    circle = pi0_of_group(loop_group(boundary_sphere(2, 2), "0", depth=1)).describe()
    disk = pi0_of_group(loop_group(full_simplex(2, 2), "0", depth=1)).describe()
    dt = time.perf_counter() - t0
    assert record("5", circle == "Z" and disk == "trivial", dt, 5, f"circle={circle}, disk={disk}")


def test_criterion_06_w_constructions():
    t0 = time.perf_counter()
    G = cyclic_group(2)
    recs = check_principal_fibration(G, 4)
    needed = [r for r in recs if r["name"].startswith(("free action", "orbit bijection"))]
    fib_ok = all(r["status"] == "pass" for r in needed)
    B = normalized_complex(wbar(G, 4), 4)
    W = normalized_complex(w_total(G, 4), 4)
    hb = [str(homology(B, n)) for n in (1, 2, 3)]
    hw = [str(homology(W, n)) for n in (1, 2, 3)]
    dt = time.perf_counter() - t0
    ok = fib_ok and hb == ["Z/2", "0", "Z/2"] and hw == ["0", "0", "0"]
    assert record("6", ok, dt, 60, f"fibration checks={fib_ok}, H(Wbar)={hb}, H(W)={hw}")


def _random_poly_form(rng, m, k):
    coeffs = {}
    for idx in combinations(range(m), k):
        terms = {e: Q(rng.randint(-5, 5), rng.randint(1, 3)) for e in product(range(3), repeat=m) if sum(e) <= 2 and rng.random() < 0.5}
        coeffs[idx] = RationalFunction(Poly(m, terms))
    return RationalForm(m, k, coeffs)


def test_criterion_07_van_est_inversion():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = 0
    for j in range(50):
        m = 1 + j % 3
        k = rng.randint(0, m)
        w = _random_poly_form(rng, m, k)
        bad += van_est(taylor_antiderivative(w)) != w
    dt = time.perf_counter() - t0
    assert record("7", bad == 0, dt, 10, f"50 forms, mismatches={bad}")


def test_criterion_08a_exact_riemann_sums():
    t0 = time.perf_counter()
    w = x_area_form()
    T = unit_simplex(2)
    sums = []
    for r in range(4):
        sums.append(riemann_sum(w, T, "exact"))
        T = barycentric_refine(T)
    dt = time.perf_counter() - t0
    assert record("8a", all(s == Q(1, 6) for s in sums), dt, 60, f"exact sums r=0..3: {[str(s) for s in sums]}")


def test_criterion_08b_taylor_convergence_ratio():
    t0 = time.perf_counter()
    w = x_area_form()
    T = unit_simplex(2)
    errors = []
    for r in range(7):
        errors.append(abs(riemann_sum(w, T, "taylor", check=False) - Q(1, 6)))
        if r < 6:
            T = barycentric_refine(T)
    ratios = []
    for r in range(3, 7):
        ratios.append(None if errors[r - 1] == 0 else float(errors[r] / errors[r - 1]))
    dt = time.perf_counter() - t0
    ok = all(x is not None and 0.517 <= x <= 0.817 for x in ratios)
    detail = f"errors r=0..6: {[str(e) for e in errors]}, ratios r=3..6: {ratios}"
    if not ok and all(e == 0 for e in errors[1:]):
        detail += " (Taylor sums are exact for r>=1, so the ratio is undefined)"
    assert record("8b", ok, dt, 60, detail)


def test_criterion_09_faa_di_bruno():
    t0 = time.perf_counter()
    rng = random.Random(9)
    bad = 0
    for _ in range(50):
        n, m = rng.randint(1, 2), rng.randint(1, 2)
        f = PolyMap(n, [RationalFunction(_rand_poly(rng, n, 2)) for _ in range(m)])
        g = RationalFunction(_rand_poly(rng, m, 3))
        beta = [0] * n
        for _ in range(rng.randint(1, 4)):
            beta[rng.randrange(n)] += 1
        x0 = [Q(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)]
        bad += faa_di_bruno(g, f, beta, x0) != direct_partial(g, f, beta, x0)
    dt = time.perf_counter() - t0
    assert record("9", bad == 0, dt, 10, f"50 pairs, |beta|<=4, mismatches={bad}")


def _rand_poly(rng, n, deg):
    return Poly(n, {e: Q(rng.randint(-4, 4), rng.randint(1, 3)) for e in product(range(deg + 1), repeat=n) if sum(e) <= deg and rng.random() < 0.6})


def test_criterion_10_monopole_suite():
    t0 = time.perf_counter()
    notes = {}
    ok = True
    for k in range(-2, 3):
        cover, c = D.monopole(k)
        recs = D.verify_cocycle_deg1(cover, c)
        exact = D.all_pass(recs) and all(r["method"] == "exact" for r in recs)
        ch = D.chern_number(cover, c, samples=256)
        ok &= exact and ch["chern"] == k and abs(ch["raw"] - k) <= 1e-6
        notes[k] = round(ch["raw"], 12)
    cover, c = D.monopole(1)
    path = D.equator_path()
    h = D.holonomy(cover, c, path)
    rng = random.Random(10)
    gauge_err = 0.0
    for _ in range(3):
        c2 = D.gauge_transform(cover, c, {"N": D.random_phase(rng, 2), "S": D.random_phase(rng, 2)})
        gauge_err = max(gauge_err, abs(D.holonomy(cover, c2, path) - h))
    center, radius = (Q(3, 10), Q(-1, 5)), Q(1, 2)
    hol = D.holonomy(cover, c, D.ChartPath(D.rational_circle(center, radius, "N"), [None] * 4))
    stokes = abs(hol - cmath.exp(1j * D.disk_flux(D.monopole_curvature(1), [float(v) for v in center], float(radius))))
    ok &= gauge_err <= 1e-9 and stokes <= 1e-6
    dt = time.perf_counter() - t0
    assert record("10", ok, dt, 30, f"chern raw={notes}, gauge err={gauge_err:.1e}, stokes err={stokes:.1e}")


def test_criterion_11_cech_deligne_algebra():
    t0 = time.perf_counter()
    cover = D.affine_cover(
        [[[1, 0], [0, 1]], [[2, 1], [1, 1]], [[1, -1], [0, 3]], [[0, 1], [-1, 2]]],
        [[0, 0], [1, 2], [-1, 0], [3, 1]],
    )
    rng = random.Random(11)
    checks = {}
    for q in range(3):
        c0 = {I: (D.random_phase(rng, 2) if q == 0 else D.random_form(rng, 2, q)) for I in cover.intersections(1)}
        dd = D.cech_delta(cover, D.cech_delta(cover, c0, 0, q), 1, q)
        if q == 0:
            checks[f"delta^2 q={q}"] = all(v.identity_status(cover.sample_points(I, rng, 10))[0] for I, v in dd.items())
        else:
            checks[f"delta^2 q={q}"] = all(v.is_zero() for v in dd.values())
    for level in (1, 2):
        for degree in range(level + 1):
            c = D.random_cochain(cover, rng, level, degree)
            checks[f"D^2 B{level} deg{degree}"] = D.is_zero_cochain(D.total_differential(cover, D.total_differential(cover, c)), cover, rng)
    cob = D.total_differential(cover, D.random_cochain(cover, rng, 2, 1))
    checks["coboundary passes deg2"] = D.all_pass(D.verify_cocycle_deg2(cover, cob))
    dt = time.perf_counter() - t0
    assert record("11", all(checks.values()), dt, 10, f"{sum(checks.values())}/{len(checks)} checks exact")


if __name__ == "__main__":
    import sys

    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all("PASS" in v for v in RESULTS.values()) else 1)
