"""Acceptance gate: one test per criterion, each exact (zero residual).

Every test records a PASS/FAIL line that is printed immediately and again
in the terminal summary.  Run directly with ``python tests/test_acceptance.py``.
"""

import random
import time
from pathlib import Path

import pytest

from dolbeault.bundles import E, ENDE, KINV, T, ConnectionData, OmegaP, dbar_valued, end_act
from dolbeault.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, main
from dolbeault.correspondence import (CorrespondenceContext, contracted_curvature, coro1_residual,
                                      identity_LRY, identity_pro2, identity_pro4, identity_thm1,
                                      identity_thm2)
from dolbeault.deformation import (BeltramiField, EndoField, contract, integrability_check,
                                   lie10_conn, lie10_scalar, mc_residual, phi_from_trivialization,
                                   psi_from_transition, second_residual)
from dolbeault.expr import poly
from dolbeault.extension import DeformationFamily, extend_bundle, extend_nq, extend_scalar, homotopy_h
from dolbeault.forms import Form
from dolbeault.randomgen import (random_beltrami, random_closed_form, random_closed_valued,
                                 random_connection, random_endo, random_form, random_valued,
                                 random_w, random_zt)
from dolbeault.scenario import parse_scenario, print_scenario, random_scenario

from builders import direct_context, geometric_context
from conftest import ACCEPTANCE_LINES

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def record(num, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] AC{num:<2} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _lry_input(rng, n, N, r):
    # mostly p >= 1 and q <= n - 2, where the Maurer-Cartan correction term can be nonzero
    word = rng.choice([(), (E,), (OmegaP(1),), (T,), (KINV, E), (ENDE,)])
    if rng.random() < 0.25:
        return random_valued(rng, word, n, N, r, rng.randint(0, n), rng.randint(0, n))
    return random_valued(rng, word, n, N, r, rng.randint(1, n), rng.randint(0, max(0, n - 2)))


def test_ac01_lry_exact():
    start = time.perf_counter()
    bad, corrected = 0, {}
    for n in (1, 2, 3):
        corrected[n] = 0
        for seed in range(100):
            rng, ctx = direct_context(1000 * n + seed, n, 2, 1 + seed % 2)
            s = _lry_input(rng, n, 2, ctx.r)
            bad += not identity_LRY(ctx, s).is_zero()
            corrected[n] += not contract(mc_residual(ctx.phi), s).is_zero()
    secs = time.perf_counter() - start
    ok = bad == 0 and corrected[2] > 0 and corrected[3] > 0 and secs < 60
    record(1, "conjugated connection identity on 300 off-shell scenarios", ok,
           f"{bad} nonzero residuals; correction term nonzero in "
           f"{corrected[1]}/{corrected[2]}/{corrected[3]} cases for n=1/2/3; {secs:.1f}s")


def test_ac02_pro2():
    bad = 0
    for seed in range(50):
        n, r = 1 + seed % 3, 1 + seed % 2
        rng, ctx = geometric_context(2000 + seed, n, 3, r)
        assert ctx.on_shell()
        sigma = random_valued(rng, (E,), n, 3, r, n, rng.randint(0, n))
        bad += not identity_pro2(ctx, sigma).is_zero()
    record(2, "(n,q) conjugation identity on 50 geometric scenarios, r in {1,2}", bad == 0,
           f"{bad} nonzero residuals")


def test_ac03_pro3():
    bad = caught = 0
    for seed in range(50):
        n, r = 1 + seed % 3, 1 + seed % 2
        rng = random.Random(3000 + seed)
        conn = random_connection(rng, n, 4, r)
        phi = phi_from_trivialization(random_zt(rng, n, 4))
        w = random_w(rng, n, 4, r)
        psi = psi_from_transition(w, conn, phi)
        bad += not integrability_check(w, conn, phi, psi).holds
        bump = random_endo(rng, r, n, 4, t_min=1)
        if bump.is_zero():
            bump = EndoField.zero(r, n, 4) + EndoField(tuple(
                tuple(Form.dzb(n, 4, 1).scale(poly("t", n, 4)) if i == j == 0 else Form.zero(n, 4)
                      for j in range(r)) for i in range(r)))
        res = integrability_check(w, conn, phi, psi + bump)
        caught += (not res.holds) and not res.witness.is_zero()
    record(3, "integrability at N=4 on 50 geometric scenarios; perturbations detected",
           bad == 0 and caught == 50, f"{bad} failures on-shell, {caught}/50 perturbations caught")


def test_ac04_mc_and_second_integrability():
    bad_mc = bad_29 = 0
    for seed in range(100):
        n, r = 1 + seed % 3, 1 + (seed // 3) % 2
        rng = random.Random(4000 + seed)
        conn = random_connection(rng, n, 4, r)
        phi = phi_from_trivialization(random_zt(rng, n, 4))
        bad_mc += not mc_residual(phi).is_zero()
        psi = psi_from_transition(random_w(rng, n, 4, r), conn, phi)
        bad_29 += not second_residual(conn, phi, psi).is_zero()
    record(4, "Maurer-Cartan and second integrability for 100 geometric families at order 4",
           bad_mc == 0 and bad_29 == 0, f"{bad_mc} MC residuals, {bad_29} second integrability residuals nonzero")


def _grid(seed_base, r, word):
    bad = cells = 0
    for n in (1, 2, 3):
        for p in range(n + 1):
            for q in range(n + 1):
                for k in range(3):
                    rng, ctx = direct_context(seed_base + 100 * n + 10 * p + q + 1000 * k, n, 2, r)
                    if word == ():
                        ctx = CorrespondenceContext(ctx.conn, ctx.phi)
                        s = random_form(rng, n, 2, p, q)
                        res = identity_thm1(ctx, s, p=p)
                    else:
                        conn = random_connection(rng, n, 2, r, chern=False)
                        ctx = CorrespondenceContext(conn, ctx.phi, ctx.psi_e)
                        s = random_valued(rng, (E,), n, 2, r, p, q)
                        res = identity_thm2(ctx, s, p=p)
                    bad += not res.is_zero()
                cells += 1
    return bad, cells


def test_ac05_thm1_grid():
    bad, cells = _grid(50000, 1, ())
    record(5, "scalar correspondence identity over every (p,q), n=1..3, off-shell phi", bad == 0,
           f"{cells} cells x 3 samples, {bad} nonzero residuals")


def test_ac06_thm2_grid():
    bad, cells = _grid(60000, 2, (E,))
    p0 = 0
    for n in (1, 2, 3):
        for q in range(n + 1):
            rng, ctx = direct_context(70000 + 10 * n + q, n, 2, 2)
            p0 += not identity_thm2(ctx, random_valued(rng, (E,), n, 2, 2, 0, q), p=0).is_zero()
    record(6, "bundle correspondence identity over every (p,q), r=2, generic theta and psi_E",
           bad == 0 and p0 == 0, f"{cells} cells x 3 samples, {bad} nonzero; (0,q) column {p0} nonzero")


def test_ac07_pro4_non_vacuous():
    checked = bad = 0
    seed = 0
    while checked < 30 and seed < 400:
        rng, ctx = geometric_context(7000 + seed, 2, 3, 1 + seed % 2)
        seed += 1
        if all(not f for row in contracted_curvature(ctx) for f in row):
            continue
        s = random_valued(rng, (E,), 2, 3, ctx.r, rng.randint(0, 2), rng.randint(0, 1))
        bad += not identity_pro4(ctx, s).is_zero()
        checked += 1
    theta = ((Form.dz(2, 1, 1).scale(poly("zb2", 2, 1)),),)
    example = CorrespondenceContext(ConnectionData(2, 1, 1, theta),
                                    BeltramiField.from_coeffs(2, 1, {(1, (1,)): poly("t", 2, 1)}))
    assert contracted_curvature(example)[0][0]
    s = random_valued(random.Random(1), (E,), 2, 1, 1, 1, 1)
    bad += not identity_pro4(example, s).is_zero()
    record(7, "(dbar - L)^2 = -i_phi Theta on n=2 with i_phi Theta != 0", bad == 0 and checked == 30,
           f"{checked + 1} non-vacuous instances, {bad} nonzero residuals")


def test_ac08_coro1():
    bad = caught = 0
    for seed in range(40):
        n = 1 + seed % 3
        rng, ctx = geometric_context(8000 + seed, n, 3, 1)
        bad += not coro1_residual(ctx).is_zero()
        if n >= 2:
            c = rng.choice([1, 2, -3])
            bump = EndoField(((Form.dzb(n, 3, 1).scale(poly(f"{c}*t*zb2", n, 3)),),))
            caught += not coro1_residual(CorrespondenceContext(ctx.conn, ctx.phi, ctx.psi_e + bump)).is_zero()
    perturbable = sum(1 for seed in range(40) if 1 + seed % 3 >= 2)
    record(8, "line-bundle residual on 40 geometric scenarios; perturbations detected",
           bad == 0 and caught == perturbable,
           f"{bad} nonzero on-shell, {caught}/{perturbable} perturbations caught (n>=2)")


def test_ac09_extension():
    start = time.perf_counter()
    N = 4
    phi = BeltramiField.from_coeffs(1, N, {(1, (1,)): poly("t", 1, N)})
    res = extend_scalar(DeformationFamily.from_series(phi), Form.dz(1, N, 1).scale(poly("z1", 1, N)), N)
    example_ok = res.sigma == Form.dz(1, N, 1).scale(poly("z1 + t*zb1", 1, N)) and \
        all(res.order_term(m).is_zero() for m in range(2, N + 1))
    bad = moving = 0
    for seed in range(50):
        n, r = 1 + seed % 3, 1 + seed % 2
        rng, ctx = geometric_context(9000 + seed, n, N, r)
        family = DeformationFamily.from_series(ctx.phi, ctx.psi_e)
        kind = seed % 3
        # q < n and a nonzero seed, so the right-hand sides are not forced to vanish
        q = rng.randint(0, n - 1) if n > 1 else 0
        if kind == 0:
            s0 = _nonzero(lambda: random_closed_form(rng, n, N, rng.randint(1, n), q))
            s = extend_scalar(family, s0, N).sigma
            bad += not (s.dbar() - lie10_scalar(ctx.phi, s)).is_zero()
        elif kind == 1:
            s0 = _nonzero(lambda: random_closed_valued(rng, n, N, r, rng.randint(0, n), q))
            s = extend_bundle(family, ctx.conn, s0, N).sigma
            bad += not (dbar_valued(s) - lie10_conn(ctx.conn, ctx.phi, s)
                        + end_act(ctx.psi_e.entries, s)).is_zero()
        else:
            s0 = _nonzero(lambda: random_closed_form(rng, n, N, n, q))
            s = extend_nq(family, s0, N).sigma
            bad += not (s.dbar() + contract(ctx.phi, s).partial()).is_zero()
        moving += any(s.t_coefficient(m) for m in range(1, N + 1))
    secs = time.perf_counter() - start
    record(9, "extension: worked line example and 50 random families at N=4",
           example_ok and bad == 0 and moving >= 25 and secs < 120,
           f"example {'exact' if example_ok else 'WRONG'}, {bad} nonzero residuals, "
           f"{moving}/50 with nonzero higher orders, {secs:.1f}s")


def _nonzero(draw):
    for _ in range(20):
        s = draw()
        if s:
            return s
    raise AssertionError("could not draw a nonzero closed seed")


def test_ac10_kernel_algebra():
    counts = dict.fromkeys(["d'^2", "dbar^2", "d'dbar+dbar d'", "graded comm", "Leibniz d'",
                            "Leibniz dbar", "Leibniz i_phi", "homotopy"], 0)
    bad = dict.fromkeys(counts, 0)
    rng = random.Random(10)
    for _ in range(1000):
        n = rng.randint(1, 3)
        p1, q1, p2, q2 = (rng.randint(0, n) for _ in range(4))
        a = random_form(rng, n, 1, p1, q1)
        b = random_form(rng, n, 1, p2, q2)
        phi = random_beltrami(rng, n, 1)
        sa = -1 if (p1 + q1) % 2 else 1
        checks = {
            "d'^2": a.partial().partial(),
            "dbar^2": a.dbar().dbar(),
            "d'dbar+dbar d'": a.partial().dbar() + a.dbar().partial(),
            "graded comm": a.wedge(b) - b.wedge(a).scale(-1 if (p1 + q1) * (p2 + q2) % 2 else 1),
            "Leibniz d'": a.wedge(b).partial() - a.partial().wedge(b) - a.wedge(b.partial()).scale(sa),
            "Leibniz dbar": a.wedge(b).dbar() - a.dbar().wedge(b) - a.wedge(b.dbar()).scale(sa),
            "Leibniz i_phi": contract(phi, a.wedge(b)) - contract(phi, a).wedge(b) - a.wedge(contract(phi, b)),
        }
        w = random_form(rng, n, 1, p1, rng.randint(1, n))
        dw = w.dbar()
        checks["homotopy"] = homotopy_h(w).dbar() + (homotopy_h(dw) if dw else dw) - w
        for key, res in checks.items():
            counts[key] += 1
            bad[key] += not res.is_zero()
    ok = all(v == 0 for v in bad.values()) and all(v >= 1000 for v in counts.values())
    record(10, "kernel algebra identities", ok,
           ", ".join(f"{k} {counts[k] - bad[k]}/{counts[k]}" for k in counts))


def test_ac11_cli(tmp_path, capsys):
    texts = [p.read_text() for p in sorted(SCEN.glob("*.json")) if p.name != "bad_axis.json"]
    texts += [print_scenario(random_scenario(1 + s % 3, 1 + s % 2, s % 4, s)) for s in range(20)]
    stable = 0
    for text in texts:
        sc = parse_scenario(text)
        printed = print_scenario(sc)
        stable += parse_scenario(printed) == sc and print_scenario(parse_scenario(printed)) == printed
    codes = (main(["verify", str(SCEN / "minimal.json")]),
             main(["verify", str(SCEN / "corrupted_psi.json")]),
             main(["verify", str(SCEN / "bad_axis.json")]))
    rand = tmp_path / "rand.json"
    capsys.readouterr()
    assert main(["random", "--n", "2", "--r", "2", "--N", "2", "--seed", "11"]) == EXIT_PASS
    rand.write_text(capsys.readouterr().out)
    identical = True
    for src in (rand, SCEN / "pro4_n2.json", SCEN / "extend_line.json"):
        outs = []
        for k in range(2):
            out = tmp_path / f"{src.stem}_{k}.json"
            main(["verify", str(src), "--json", str(out)])
            outs.append(out.read_bytes())
        identical &= outs[0] == outs[1]
    capsys.readouterr()
    ok = stable == len(texts) and codes == (EXIT_PASS, EXIT_FAIL, EXIT_INPUT) and identical
    record(11, "CLI round trip, exit codes and deterministic JSON", ok,
           f"round trip {stable}/{len(texts)}, exit codes {codes}, JSON byte-identical: {identical}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
