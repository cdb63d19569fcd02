"""End-to-end acceptance checks, one test per criterion.

Each test prints ``PASS``/``FAIL`` for its criterion; ``conftest.py`` repeats
the verdicts in the terminal summary.
"""

import io
import math
import subprocess
import sys
import warnings
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from oracles import matched, quartic_roots_exact, quartic_roots_numpy
from singcon.bessel import bessel_k, bessel_residual, invertibility_window, small_r_slope
from singcon.cli import run
from singcon.index import (
    ABELIAN,
    IRREDUCIBLE,
    GaugeTransformDegrees,
    SurfacePairTopology,
    asd_dimension,
    chern_weil_action,
    gauge_index_shift,
    gauge_shift_crosscheck,
    grading_mod4,
    mu_compose,
)
from singcon.knot_oracle import su2_grid_oracle
from singcon.knots import DegenerateAlphaWarning, TorusKnot, degenerate_alphas, irreducible_flat_set
from singcon.spectral import (
    oneform_indicial_roots,
    oneform_spectrum_gap,
    scalar_boundary_spectrum,
    select_kappa,
)

F = Fraction
GRID_ALPHAS = (F(1, 8), F(1, 4), F(1, 3), F(2, 5))


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException:
        print(f"FAIL criterion {number}: {title}")
        raise
    print(f"PASS criterion {number}: {title}")


def random_alphas(rng, n):
    out = []
    while len(out) < n:
        q = int(rng.integers(3, 1000))
        p = int(rng.integers(1, (q + 1) // 2))
        a = F(p, q)
        if 0 < a < F(1, 2):
            out.append(a)
    return out


def test_criterion_1_scalar_spectrum():
    rng = np.random.default_rng(1)
    with criterion(1, "scalar spectrum minimum and root-free window"):
        for alpha in random_alphas(rng, 200):
            # independent closed form from the normalized circle spectrum
            gamma = min(F(2), (1 - 2 * alpha) / alpha)
            for kappa in (1, 2, 5):
                roots = scalar_boundary_spectrum(alpha, kappa, 2 * kappa * gamma + 1)
                assert roots
                smallest = min(abs(r.zeta) for r in roots)
                assert isinstance(smallest, Fraction) and smallest == kappa * gamma
                assert all(abs(r.zeta) >= kappa * gamma for r in roots)


WORKED = [
    ((F(1, 4), 1, (0, 0)), [-3, -1, 1, 3]),
    ((F(1, 3), 1, (-1, -1)), [-2, 0, 0, 2]),
    ((F(1, 3), 3, (-1, -1)), [-4, -2, 2, 4]),
]


def test_criterion_2_oneform_quartic():
    rng = np.random.default_rng(2)
    with criterion(2, "1-form quartic roots and residuals"):
        for (alpha, kappa, mode), expected in WORKED:
            _, roots = oneform_indicial_roots(alpha, kappa, mode)
            ours = [r.zeta for r in roots for _ in range(r.multiplicity)]
            assert sorted(ours) == expected
            assert matched(ours, [complex(z) for z in quartic_roots_exact(alpha, kappa, *mode)], 1e-12)
            assert all(r.residual <= 1e-10 for r in roots)

        alphas = random_alphas(rng, 100)
        for i in range(10_000):
            alpha = alphas[i % 100]
            kappa = (1, 2, 5)[int(rng.integers(3))]
            mode = tuple(int(v) for v in rng.integers(-1000, 1001, size=2))
            _, roots = oneform_indicial_roots(alpha, kappa, mode)
            assert sum(r.multiplicity for r in roots) == 4
            for r in roots:
                assert r.residual <= 1e-10 * (1 + abs(r.zeta) ** 4)
            if i % 100 == 0:
                ours = [complex(r.zeta) for r in roots for _ in range(r.multiplicity)]
                assert matched(ours, quartic_roots_numpy(alpha, kappa, *mode), 1e-6)


def test_criterion_3_gap_certificate():
    with criterion(3, "kappa selection certifies the gap, halving breaks it"):
        violations = 0
        for alpha in GRID_ALPHAS:
            for tau in (1, 2, 5):
                kappa = select_kappa(alpha, tau, form_degree=1).kappa
                window = oneform_spectrum_gap(alpha, kappa, tau)
                assert window.status == "holds" and window.tail_certified
                if oneform_spectrum_gap(alpha, kappa / 2, tau).status == "violated":
                    violations += 1
        assert violations >= 1


def test_criterion_4_bessel_model():
    with criterion(4, "weight window and Bessel evaluation"):
        for alpha in GRID_ALPHAS:
            for kappa in (1, 2, 5):
                w = invertibility_window(alpha, kappa)
                g = min(F(2), (1 - 2 * alpha) / alpha)
                assert (w.delta_lo, w.delta_hi) == (-kappa * g + F(1, 2), kappa * g + F(1, 2))
        assert abs(bessel_k(F(1, 2), 1) - math.sqrt(math.pi / 2) * math.exp(-1)) <= 1e-8
        radii = np.linspace(0.5, 5, 46)
        for nu in (1, 2, 3):
            assert bessel_residual(nu, radii) <= 1e-6
            assert abs(small_r_slope(nu) + nu) <= 0.02 * nu


def asd_reference(k, l, b1, b2p, g):
    return 8 * k + 4 * l - 3 * (b2p - b1 + 1) - (2 * g - 2)


def test_criterion_5_index_calculus():
    rng = np.random.default_rng(5)
    with criterion(5, "index bookkeeping"):
        ks, ls = rng.integers(-10**6, 10**6, size=(2, 100_000))
        b1s, b2s, gs = rng.integers(0, 1000, size=(3, 100_000))
        expected = asd_reference(ks, ls, b1s, b2s, gs)
        for i in range(100_000):
            t = SurfacePairTopology(int(ks[i]), int(ls[i]), int(b1s[i]), int(b2s[i]), int(gs[i]))
            assert asd_dimension(t) == expected[i]

        assert all(gauge_shift_crosscheck(GaugeTransformDegrees(a, b)) for a in range(-50, 51) for b in range(-50, 51))

        mus = rng.integers(-10**6, 10**6, size=100_000)
        degs = rng.integers(-1000, 1001, size=(100_000, 2))
        for mu, (a, b) in zip(mus, degs):
            shifted = gauge_index_shift(int(mu), GaugeTransformDegrees(int(a), int(b)))
            assert grading_mod4(shifted) == grading_mod4(int(mu))

        xyz = rng.integers(-10**6, 10**6, size=(10_000, 3))
        kinds = rng.integers(0, 2, size=(10_000, 2))
        for (x, y, z), (kb, kc) in zip(xyz, kinds):
            gB, gC = (ABELIAN, IRREDUCIBLE)[kb], (ABELIAN, IRREDUCIBLE)[kc]
            x, y, z = int(x), int(y), int(z)
            assert mu_compose(mu_compose(x, y, gB), z, gC) == mu_compose(x, mu_compose(y, z, gC), gB)


def test_criterion_6_chern_weil():
    rng = np.random.default_rng(6)
    with criterion(6, "exact Chern-Weil action"):
        assert chern_weil_action(0, 1, F(1, 4), 0) == F(1, 2)
        assert chern_weil_action(0, 0, F(1, 4), 4) == F(-1, 4)
        for alpha in random_alphas(rng, 200):
            k, l, n = (int(v) for v in rng.integers(-100, 101, size=3))
            value = chern_weil_action(k, l, alpha, n)
            assert isinstance(value, Fraction)
            assert value == k + 2 * alpha * l - alpha * alpha * n


def _count(knot, alpha):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateAlphaWarning)
        return len(irreducible_flat_set(knot, alpha))


def test_criterion_7_knot_layer():
    t23, t25 = TorusKnot(2, 3), TorusKnot(2, 5)
    with criterion(7, "degenerate holonomies and flat connection transitions"):
        assert degenerate_alphas(t23) == pytest.approx([1 / 12, 5 / 12], abs=1e-9)
        assert degenerate_alphas(t25) == pytest.approx([1 / 20, 3 / 20, 7 / 20, 9 / 20], abs=1e-9)

        grid = [(i + 0.5) / 200 for i in range(100)]
        counts = []
        for alpha in grid:
            n = _count(t23, alpha)
            solutions = su2_grid_oracle(t23, alpha)
            assert len(solutions) == n
            for s in solutions:
                assert s.relation_error <= 1e-8 and s.trace_error <= 1e-8
            counts.append(n)

        # empty, then nonempty, then empty
        changes = [i for i in range(99) if counts[i] != counts[i + 1]]
        assert len(changes) == 2 and counts[0] == counts[-1] == 0 and counts[changes[0] + 1] > 0
        for i, target in zip(changes, (1 / 12, 5 / 12)):
            lo, hi = grid[i], grid[i + 1]
            while hi - lo > 1e-10:
                mid = (lo + hi) / 2
                lo, hi = (mid, hi) if _count(t23, mid) == counts[i] else (lo, mid)
            assert abs((lo + hi) / 2 - target) < 1e-6


CLI_VALID = ["spectrum", "--alpha", "1/4", "--kappa", "1", "--tau", "7"]


def test_criterion_8_cli_contract():
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "singcon", *args], capture_output=True, check=False)

    with criterion(8, "deterministic JSON and exit codes"):
        outputs = [cli(*CLI_VALID) for _ in range(3)]
        assert all(p.returncode == 0 for p in outputs)
        assert outputs[0].stdout == outputs[1].stdout == outputs[2].stdout
        for argv in (CLI_VALID, ["flat", "--knot", "2,3", "--alpha", "1/4"]):
            texts = set()
            for _ in range(3):
                buf = io.StringIO()
                assert run(argv, buf, io.StringIO()) == 0
                texts.add(buf.getvalue())
            assert len(texts) == 1
        assert cli("spectrum", "--alpha", "3/5", "--kappa", "1", "--tau", "1").returncode == 2
        assert cli("flat", "--knot", "4,6", "--alpha", "1/4").returncode == 2
