"""Acceptance criteria 1-8.

Each criterion yields one ``criterion N: PASS|FAIL`` line, shown in the
"acceptance criteria" section of the pytest summary. The module can also be
run directly: ``python3 tests/test_acceptance.py``.
"""

import io
import json
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from histarith import ReliableHistogram, build_histogram, check_bin, documents  # noqa: E402
from histarith.arithmetic import Op, combine, draw_histogram, moment, rect_cdf  # noqa: E402
from histarith.cli import main as cli_main  # noqa: E402
from histarith.core import Sample, basis_values, eval_curve, evaluate, integrate_moment  # noqa: E402
from histarith.oracle import compare, grid_cut_area, mc_sample, pairwise_combine  # noqa: E402
from histarith.special import kolmogorov_pvalue, sigma_correction, t_quantile  # noqa: E402

from conftest import interior_points, random_histogram, random_rect  # noqa: E402
from printed_forms import _regions, printed_cdf, printed_pdf  # noqa: E402

SEED = 20240611
# lines collected for the pytest terminal summary (see conftest.py)
REPORT_LINES = []


def report(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    REPORT_LINES.append(line)
    print(line, flush=True)
    return passed


# --- 1 ---------------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    for op in Op:
        rng = np.random.default_rng(SEED + 1)
        for i in range(100):
            r = random_rect(rng, i)
            c = rect_cdf(op, r)
            z = interior_points(*c.support, 32)
            g = np.array([grid_cut_area(op, r, v, n=2000) for v in z])
            worst = max(worst, float(np.max(np.abs(evaluate(c, z) - g))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-5 and elapsed < 60
    return report(1, ok, f"max |rect_cdf - grid| = {worst:.3g} (tol 1e-5), {elapsed:.1f} s (limit 60 s)")


# --- 2 ---------------------------------------------------------------------


def _max_cdf_err(op, r, k, formula=printed_cdf):
    e = _regions(op, r)
    return max(abs(formula(op, r, z) - grid_cut_area(op, r, z)) for z in np.linspace(e[k], e[k + 1], 9)[1:-1])


def _max_pdf_err(op, r, k, h=1e-4):
    e = _regions(op, r)
    out = 0.0
    for z in np.linspace(e[k], e[k + 1], 9)[1:-1]:
        fd = (grid_cut_area(op, r, z + h) - grid_cut_area(op, r, z - h)) / (2 * h)
        out = max(out, abs(printed_pdf(op, r, z) - fd))
    return out


def criterion_2():
    from histarith.arithmetic import Rect

    quo = Rect(1.0, 2.0, 4.0, 10.0)
    prod = Rect(1.0, 2.0, 3.0, 8.0)
    confirm = max(_max_cdf_err(Op.DIV, quo, 0), _max_cdf_err(Op.DIV, quo, 2))
    rng = np.random.default_rng(SEED + 2)
    for i in range(100):
        r = random_rect(rng, i)
        if r.ax <= 0 or r.ay <= 0:
            continue
        z0, z1, z2, z3 = _regions(Op.DIV, r)
        lo, hi = min(z1, z2), max(z1, z2)
        for z in np.linspace(z0, lo, 6)[1:-1]:
            confirm = max(confirm, abs(printed_cdf(Op.DIV, r, z) - grid_cut_area(Op.DIV, r, z)))
        for z in np.linspace(hi, z3, 6)[1:-1]:
            a, A, b, B = r.ax, r.bx, r.ay, r.by
            area = (A - a) * (B - b)
            upper = (area - 0.5 * (a * math.sqrt(z) - B / math.sqrt(z)) ** 2) / area
            confirm = max(confirm, abs(upper - grid_cut_area(Op.DIV, r, z)))
    product_cdf = min(_max_cdf_err(Op.MUL, prod, k) for k in range(3))
    product_pdf = min(_max_pdf_err(Op.MUL, prod, k) for k in range(3))
    quotient_mid = min(_max_cdf_err(Op.DIV, quo, 1), _max_pdf_err(Op.DIV, quo, 1))
    ok = confirm <= 1e-5 and min(product_cdf, product_pdf, quotient_mid) > 1e-2
    return report(
        2,
        ok,
        f"quotient outer regions confirmed to {confirm:.3g}; rejected with min margin "
        f"product cdf {product_cdf:.3g}, product pdf {product_pdf:.3g}, quotient middle {quotient_mid:.3g}",
    )


# --- 3 ---------------------------------------------------------------------


def criterion_3():
    start = time.perf_counter()
    worst_int = worst_top = 0.0
    min_pdf = np.inf
    for op in Op:
        rng = np.random.default_rng(SEED + 3)
        for _ in range(100):
            d = combine(random_histogram(rng), random_histogram(rng), op)
            worst_int = max(worst_int, abs(integrate_moment(d.pdf, 0) - 1.0))
            zb = d.breakpoints[-1]
            left_limit = float(np.dot(d.cdf.coeffs[-1], basis_values(zb)))
            worst_top = max(worst_top, abs(left_limit - 1.0), abs(eval_curve(d.cdf, zb) - 1.0))
            probes = rng.uniform(*d.support, 1024)
            min_pdf = min(min_pdf, float(np.min(evaluate(d.pdf, probes))))
    elapsed = time.perf_counter() - start
    ok = worst_int <= 1e-6 and worst_top <= 1e-9 and min_pdf >= 0 and elapsed < 30
    return report(
        3,
        ok,
        f"max |int pdf - 1| = {worst_int:.3g}, max |cdf(z_max) - 1| = {worst_top:.3g}, "
        f"min pdf = {min_pdf:.3g}, {elapsed:.1f} s (limit 30 s)",
    )


# --- 4 ---------------------------------------------------------------------


def criterion_4():
    worst = 0.0
    rng = np.random.default_rng(SEED + 4)
    for _ in range(100):
        hx, hy = random_histogram(rng), random_histogram(rng)
        ex, ey = hx.mean(), hy.mean()
        e = hx.edges
        inv_x = float(np.dot(hx.masses, np.log(e[1:] / e[:-1]) / np.diff(e)))
        expected = {Op.ADD: ex + ey, Op.SUB: ex - ey, Op.MUL: ex * ey, Op.DIV: ey * inv_x}
        for op, want in expected.items():
            got = moment(combine(hx, hy, op), 1)
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return report(4, worst <= 1e-9, f"max relative mean error {worst:.3g} over 100 pairs x 4 ops (tol 1e-9)")


# --- 5 ---------------------------------------------------------------------


def generator_pair(case):
    rng = np.random.default_rng(SEED + 500 + case)
    gx = random_histogram(rng, lo=0.5, hi=5.0, min_width=0.2)
    gy = random_histogram(rng, lo=0.5, hi=5.0, min_width=0.2)
    return gx, gy, draw_histogram(gx, 200, rng), draw_histogram(gy, 200, rng)


def criterion_5():
    per_op = {}
    for op in Op:
        good = 0
        worst_d, low_alpha = 0.0, 0
        for case in range(20):
            _, _, sx, sy = generator_pair(case)
            hx, hy = build_histogram(sx), build_histogram(sy)
            d = combine(hx, hy, op)
            D = compare(d, pairwise_combine(sx, sy, op)).D
            alpha = compare(d, mc_sample(hx, hy, op, 10**5, seed=case)).alpha
            worst_d = max(worst_d, D)
            low_alpha += alpha < 0.05
            good += D <= 0.02 and alpha >= 0.05
        per_op[op.value] = (good, worst_d, low_alpha)
    ok = all(v[0] >= 18 for v in per_op.values())
    detail = "; ".join(f"{k} {g}/20 (max D {w:.3f}, alpha<0.05 in {a})" for k, (g, w, a) in per_op.items())
    return report(5, ok, detail + " (need >= 18/20 each)")


# --- 6 ---------------------------------------------------------------------


def soundness_samples():
    kinds = ("uniform", "normal", "bimodal")
    sizes = (100, 1000, 5000)
    for i in range(50):
        rng = np.random.default_rng(SEED + 600 + i)
        kind, n = kinds[i % 3], sizes[(i // 3) % 3]
        if kind == "uniform":
            x = rng.uniform(0.0, 1.0, n)
        elif kind == "normal":
            x = rng.normal(0.0, 1.0, n)
        else:
            x = np.where(rng.random(n) < 0.5, rng.normal(-2.0, 0.5, n), rng.normal(2.0, 0.5, n))
        yield kind, n, x


def criterion_6():
    failures = []
    worst_gamma = 0.0
    for i, (kind, n, x) in enumerate(soundness_samples()):
        h = build_histogram(x)
        if documents.dumps(build_histogram(x)) != documents.dumps(h):
            failures.append(f"#{i} not deterministic")
        worst_gamma = max(worst_gamma, abs(h.gamma - math.prod(h.gammas.tolist())))
        if h.degenerate:
            continue
        v = Sample(x).values
        start = 0
        for j, b in enumerate(h.bins):
            group = v[start : start + b.count]
            start += b.count
            if not check_bin(group, b.lo, b.hi, 0.999).passed:
                failures.append(f"#{i} ({kind}, n={n}) bin {j}")
    ok = not failures and worst_gamma <= 1e-12
    detail = f"50 samples, product law error {worst_gamma:.3g}, failures: {failures or 'none'}"
    return report(6, ok, detail)


# --- 7 ---------------------------------------------------------------------


def criterion_7():
    checks = {
        "t(0.5,1)": abs(t_quantile(0.5, 1) - 1.0) <= 5e-4,
        "t(0.999,1e6)": abs(t_quantile(0.999, 10**6) - 3.2905) <= 1e-3,
        "KS(1.358)": abs(kolmogorov_pvalue(1.358 / math.sqrt(10**4), 10**4) - 0.0495) <= 1e-3,
    }
    grid = np.linspace(0.01, 0.999, 60)
    checks["t increasing in gamma"] = all(
        all(b > a for a, b in zip(t, t[1:])) for t in ([t_quantile(float(g), df) for g in grid] for df in (1, 2, 9, 100))
    )
    checks["t decreasing in df"] = all(
        t_quantile(g, df + 1) < t_quantile(g, df) for g in (0.9, 0.999) for df in range(1, 60)
    )
    a = [kolmogorov_pvalue(d, 500) for d in np.linspace(0.0, 0.2, 300)]
    checks["KS p non-increasing"] = all(y <= x for x, y in zip(a, a[1:]))
    q = [sigma_correction(0.999, n) for n in range(2, 300)]
    checks["q decreasing in n"] = all(y < x for x, y in zip(q, q[1:])) and min(q) >= 0
    failed = [k for k, v in checks.items() if not v]
    return report(7, not failed, f"{len(checks)} checks, failed: {failed or 'none'}")


# --- 8 ---------------------------------------------------------------------


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return cli_main([str(a) for a in argv], out=out, err=err), out.getvalue(), err.getvalue()


def criterion_8():
    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        rng = np.random.default_rng(SEED + 8)
        for name, (lo, hi) in {"x": (1.0, 2.0), "y": (0.5, 3.0)}.items():
            (tmp / f"{name}.csv").write_text("value\n" + "\n".join(map(repr, rng.uniform(lo, hi, 300).tolist())) + "\n")
        for name in "xy":
            code = _cli("build", "--input", tmp / f"{name}.csv", "--output", tmp / f"h{name}.json")[0]
            if code:
                problems.append(f"build {name} exit {code}")
        if problems:
            return report(8, False, f"problems: {problems}")
        for op in Op:
            path = tmp / f"{op.value}.json"
            if _cli("op", "--op", op.value, "--x", tmp / "hx.json", "--y", tmp / "hy.json", "--output", path)[0]:
                problems.append(f"op {op.value}")
                continue
            text = path.read_text()
            if documents.dumps(documents.loads(text)) != text:
                problems.append(f"result round trip {op.value}")
            code, out, _ = _cli("curve", "--dist", path, "--points", "128")
            d = documents.loads(text)
            for line in out.splitlines()[1:]:
                z, c, p = (float(t) for t in line.split("\t"))
                if c != eval_curve(d.cdf, z) or p != eval_curve(d.pdf, z):
                    problems.append(f"curve/eval mismatch {op.value} at {z!r}")
                    break
        for name in "xy":
            text = (tmp / f"h{name}.json").read_text()
            if documents.dumps(documents.loads(text)) != text:
                problems.append(f"histogram round trip {name}")
        code, out, _ = _cli(
            "oracle", "--op", "mul", "--x-sample", tmp / "x.csv", "--y-sample", tmp / "y.csv",
            "--compare", tmp / "mul.json", "--mc", 100000, "--seed", 0,
        )
        alpha = float(dict(line.split(": ") for line in out.splitlines())["alpha"]) if code == 0 else -1
        if alpha < 0.05:
            problems.append(f"pipeline alpha {alpha}")
        (tmp / "zero.json").write_text(documents.dumps(ReliableHistogram.from_edges([0.0, 1.0], [3])))
        code, _, err = _cli("op", "--op", "div", "--x", tmp / "zero.json", "--y", tmp / "hy.json")
        if code != 4 or "quotient requires strictly positive X support" not in err:
            problems.append(f"div domain exit {code}")
        if _cli("eval")[0] != 2:
            problems.append("usage exit")
        (tmp / "bad.json").write_text(json.dumps({**json.loads((tmp / "hx.json").read_text()), "n": -1}))
        if _cli("eval", "--dist", tmp / "bad.json", "--at", 1)[0] != 3:
            problems.append("data exit")
    return report(8, not problems, f"problems: {problems or 'none'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
