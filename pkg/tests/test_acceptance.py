"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a pass/fail line per criterion
in the terminal summary.
"""
import itertools
import math
import time

import numpy as np
import pytest

from leggettqm import canonical, cli, hvt, inequality, qcore
from leggettqm.canonical import CanonicalState

TOL = 1e-12
STATES = list(CanonicalState)
PHOTON_STATES = [CanonicalState.PSI_PLUS, CanonicalState.PSI_MINUS]


def criterion(n, title):
    return pytest.mark.criterion(str(n), title)


def analyzer_projector(theta):
    k = np.array([math.cos(theta), math.sin(theta)])
    return np.outer(k, k)


def full_trace_coincidence(kind, ta, tb):
    rho = canonical.make_density(kind).matrix
    return np.trace(rho @ np.kron(analyzer_projector(ta), analyzer_projector(tb))).real


@criterion(1, "reduced density matrices equal I/2 (1e-12)")
def test_reduced_density_matrices():
    for kind in STATES:
        rho = canonical.make_density(kind)
        for keep in ("first", "second"):
            reduced = qcore.partial_trace(rho, keep).matrix
            assert np.max(np.abs(reduced - 0.5 * np.eye(2))) <= TOL


@criterion(2, "reduced purity equals 0.5 (1e-12)")
def test_mixedness():
    for kind in STATES:
        rho = canonical.make_density(kind)
        for keep in ("first", "second"):
            reduced = qcore.partial_trace(rho, keep)
            assert abs(qcore.purity(reduced) - 0.5) <= TOL
            # rho_red^2 = rho_red / 2
            m = reduced.matrix
            assert np.max(np.abs(m @ m - 0.5 * m)) <= TOL


@criterion(3, "single-side averages vanish for 1000 random settings per state (<1e-12)")
def test_vanishing_single_side_averages():
    rng = np.random.default_rng(3)
    for kind in STATES:
        rho = canonical.make_density(kind)
        reduced = [qcore.partial_trace(rho, "first"), qcore.partial_trace(rho, "second")]
        for _ in range(1000):
            if kind is CanonicalState.SINGLET:
                obs = [qcore.spin_observable(rng.normal(size=3)) for _ in range(2)]
            else:
                obs = [qcore.photon_observable(t) for t in rng.uniform(0, 2 * math.pi, 2)]
            for r, o in zip(reduced, obs):
                assert abs(qcore.expectation(r, o)) < TOL


@criterion(4, "joint probabilities match the full-trace oracle on a 1000-point grid (1e-12)")
def test_closed_form_joint_probabilities():
    theta_b = 0.37
    for delta in np.linspace(0, 2 * math.pi, 1000, endpoint=False):
        ta = theta_b + delta
        plus = canonical.joint_probability(CanonicalState.PSI_PLUS, ta, theta_b)
        minus = canonical.joint_probability(CanonicalState.PSI_MINUS, ta, theta_b)
        assert abs(plus - 0.5 * math.cos(delta) ** 2) <= TOL
        assert abs(minus - 0.5 * math.sin(delta) ** 2) <= TOL
        assert abs(plus - full_trace_coincidence(CanonicalState.PSI_PLUS, ta, theta_b)) <= TOL
        assert abs(minus - full_trace_coincidence(CanonicalState.PSI_MINUS, ta, theta_b)) <= TOL


@criterion(5, "pair correlation = P+ - P-, and full trace = 2 x closed form (1e-12)")
def test_pair_correlation_identity():
    rho = canonical.make_density(CanonicalState.PSI_PLUS)
    theta_b = 0.37
    for delta in np.linspace(0, 2 * math.pi, 1000, endpoint=False):
        ta = theta_b + delta
        paper = canonical.paper_pair_correlation(CanonicalState.PSI_PLUS, ta, theta_b)
        diff = canonical.joint_probability(CanonicalState.PSI_PLUS, ta, theta_b) - canonical.joint_probability(
            CanonicalState.PSI_MINUS, ta, theta_b
        )
        assert abs(paper - diff) <= TOL
        full = qcore.joint_expectation(rho, qcore.photon_observable(ta), qcore.photon_observable(theta_b))
        assert abs(full - 2 * paper) <= TOL


@criterion(6, "singlet full-trace correlation = -a.b for 1000 random Bloch pairs (1e-12)")
def test_singlet_correlation():
    rng = np.random.default_rng(6)
    rho = canonical.make_density(CanonicalState.SINGLET)
    for _ in range(1000):
        a = qcore.MeasurementSetting.bloch(rng.normal(size=3))
        b = qcore.MeasurementSetting.bloch(rng.normal(size=3))
        full = qcore.joint_expectation(rho, qcore.spin_observable(a), qcore.spin_observable(b))
        assert abs(full + float(np.dot(a.vector(), b.vector()))) <= TOL


@criterion(7, "sweeps of 3600 points satisfy the bounds, min margin >= -1e-9, < 10 s; 1e6-point quadratic form")
def test_inequality_satisfaction():
    start = time.perf_counter()
    for kind in STATES:
        rows = inequality.quantum_sweep(kind, 3600)
        assert len(rows) == 3600
        for r in rows:
            assert r.report_paper.satisfied and r.report_oracle.satisfied
            for rep in (r.report_paper, r.report_oracle):
                assert min(rep.margin_lower, rep.margin_upper) >= -1e-9
    g = np.linspace(0, 2 * math.pi, 1000, endpoint=False)
    a, b = np.meshgrid(g, g)
    assert a.size == 10**6
    assert np.all(inequality.quadratic_form_check(a, b))
    assert time.perf_counter() - start < 10.0


@criterion(8, "+-1 identities exhaustive; 1000 random discrete models satisfy the bounds (1e-12)")
def test_appendix_identities():
    assert all(inequality.pm_identity_check(a, b) for a, b in itertools.product((1, -1), repeat=2))
    rng = np.random.default_rng(8)
    for _ in range(1000):
        n = int(rng.integers(1, 33))
        w = rng.random(n)
        w /= w.sum()
        m = hvt.DiscreteModel.from_tables(w, rng.choice([-1, 1], n), rng.choice([-1, 1], n))
        triple = hvt.exact_averages(m, 0.0, 0.0)
        assert inequality.leggett_check(triple, TOL).satisfied


@criterion(9, "Monte Carlo reproduces Malus closed forms within 4 stderr (36 x 20 seeds); bit-identical reruns")
def test_monte_carlo():
    model = hvt.malus_product_model(0.3, 1.1)
    theta_b = 0.4
    for seed in range(20):
        for k in range(36):
            a = theta_b + 2 * math.pi * k / 36
            est = hvt.mc_averages(model, a, theta_b, 100_000, seed)
            exact = model.closed_form(a, theta_b)
            assert abs(est.triple.av_a - exact.av_a) <= 4 * est.stderr_a
            assert abs(est.triple.av_b - exact.av_b) <= 4 * est.stderr_b
            assert abs(est.triple.av_ab - exact.av_ab) <= 4 * est.stderr_ab
    again = [hvt.mc_averages(model, 1.0, theta_b, 100_000, s).to_json() for s in (0, 19)]
    first = [hvt.mc_averages(model, 1.0, theta_b, 100_000, s).to_json() for s in (0, 19)]
    assert again == first


@criterion(10, "CLI: verify exits 0, constructed violation exits 1, malformed flags exit 2, exact CSV header")
def test_cli(capsys):
    assert cli.run(["verify"]) == 0
    assert cli.run(["check", "--av-a", "1", "--av-b", "-1", "--av-ab", "1"]) == 1
    with pytest.raises(SystemExit) as exc:
        cli.run(["sweep", "--state", "psi-plus", "--no-such-flag"])
    assert exc.value.code == 2
    capsys.readouterr()
    assert cli.run(["sweep", "--state", "psi-plus", "--grid", "360"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "delta,av_a,av_b,av_ab_paper,av_ab_oracle,lower,upper,margin_lower,margin_upper,satisfied"
    assert len(out) == 361
