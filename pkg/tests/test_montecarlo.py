"""Checks for the Monte Carlo engine.

Groups: first-moment agreement of the raw draws with the channel model;
empirical SINR CDFs against the closed forms at seeded grid points;
bit-exact reproducibility (same-seed identity, trial-count prefix
property, grid-versus-single equality, seed separation); structural
per-trial facts (far-user ceiling, SIC ordering, exact zero- and
one-probability corners); the throughput and union-event accounting;
input validation.
"""

import numpy as np
import pytest
from scipy.optimize import brentq

from ris_secrecy import analytic as an
from ris_secrecy.montecarlo import (
    BLOCK,
    empirical_sinr_cdf,
    empirical_sinr_cdfs,
    estimate_sop,
    estimate_sop_grid,
    estimate_throughput,
    sample_draw,
    sinr_samples,
)
from ris_secrecy.model import derive

from conftest import make_params

SEED = 20260813


def test_draw_first_moments():
    p = make_params()
    dc = derive(p)
    d = sample_draw(p, 400_000, SEED)
    q = p.n_active
    # coherent cascade power: q * omega_br * omega_r per link
    assert d.cascaded_gain_n.mean() == pytest.approx(q * dc.omega_br * dc.omega_rn, rel=0.01)
    assert d.cascaded_gain_f.mean() == pytest.approx(q * dc.omega_br * dc.omega_rf, rel=0.01)
    assert d.cascaded_gain_e.mean() == pytest.approx(q * dc.omega_br * dc.omega_re, rel=0.01)
    # on-group norm: q * omega_r
    assert d.norm_n.mean() == pytest.approx(q * dc.omega_rn, rel=0.01)
    assert d.norm_f.mean() == pytest.approx(q * dc.omega_rf, rel=0.01)
    # residual-interference powers: exponential with the configured means
    assert d.ip_user.mean() == pytest.approx(p.omega_ipu, rel=0.02)
    assert d.ip_eve.mean() == pytest.approx(p.omega_ipe, rel=0.02)


def test_shared_bs_ris_vector_keeps_marginals():
    p = make_params()
    dc = derive(p)
    d = sample_draw(p, 200_000, SEED, shared_hbr=True)
    q = p.n_active
    assert d.cascaded_gain_n.mean() == pytest.approx(q * dc.omega_br * dc.omega_rn, rel=0.05)
    assert d.cascaded_gain_e.mean() == pytest.approx(q * dc.omega_br * dc.omega_re, rel=0.05)
    ind = sample_draw(p, 1000, SEED)
    cor = sample_draw(p, 1000, SEED, shared_hbr=True)
    assert not np.array_equal(ind.cascaded_gain_f, cor.cascaded_gain_f)


def _closed_quantiles(form, p, probs):
    return [brentq(lambda x: form(x, p) - t, 1e-12, 1e6, xtol=1e-14, rtol=1e-12)
            for t in probs]


def test_empirical_cdfs_match_closed_forms():
    p = make_params()
    trials = 200_000
    probs = np.linspace(0.1, 0.9, 9)
    cases = [
        ("user_n", "psic", lambda x, pp: an.cdf_user_n_psic(x, pp)),
        ("user_n", "ipsic", lambda x, pp: an.cdf_user_n_ipsic(x, pp)),
        ("user_f", "psic", lambda x, pp: an.cdf_user_f(x, pp)),
        ("internal_f_to_n", "psic",
         lambda x, pp: float(np.asarray(an._cdf_internal_f_to_n(x, derive(pp))).reshape(()))),
    ]
    requests = []
    for which, sic, form in cases:
        xs = _closed_quantiles(form, p, probs)
        requests.append((which, sic, xs))
    empirical = empirical_sinr_cdfs(p, requests, trials, SEED)
    for (which, sic, _), emp in zip(cases, empirical):
        tol = 3.0 * np.sqrt(probs * (1.0 - probs) / trials) + 0.01
        assert np.all(np.abs(emp - probs) <= tol), (which, sic, emp)


def test_empirical_cdf_is_monotone_and_bounded():
    p = make_params()
    xs = np.logspace(-4, 2, 25)
    cdf = empirical_sinr_cdf(p, "user_n", xs, 20_000, SEED)
    assert np.all(cdf >= 0.0) and np.all(cdf <= 1.0)
    assert np.all(np.diff(cdf) >= 0.0)


# ---------------------------------------------------------------------------
# reproducibility


def test_same_seed_is_bit_identical():
    p = make_params()
    a = estimate_sop(p, "external_n", "ipsic", 30_000, SEED)
    b = estimate_sop(p, "external_n", "ipsic", 30_000, SEED)
    assert a.sop.value == b.sop.value
    assert a.stderr == b.stderr
    da = sample_draw(p, 1000, SEED)
    db = sample_draw(p, 1000, SEED)
    np.testing.assert_array_equal(da.cascaded_gain_n, db.cascaded_gain_n)
    np.testing.assert_array_equal(da.ip_eve, db.ip_eve)


def test_trial_count_prefix_property():
    # trial i is keyed by (seed, i) alone, so a longer run must start with
    # exactly the rows of a shorter run
    p = make_params()
    short = sample_draw(p, 5, SEED)
    long = sample_draw(p, BLOCK + 5, SEED)
    np.testing.assert_array_equal(short.cascaded_gain_n, long.cascaded_gain_n[:5])
    np.testing.assert_array_equal(short.norm_e, long.norm_e[:5])
    np.testing.assert_array_equal(short.ip_user, long.ip_user[:5])


def test_grid_matches_individual_estimates():
    p_a = make_params()
    p_b = make_params(kappa=1.0, sigma2_t=0.0, p_bs=0.02)
    cases = [(p_a, "external_n", "psic"), (p_b, "internal", "ipsic"),
             (p_a, "system_external", "psic")]
    grid = estimate_sop_grid(cases, 40_000, SEED)
    for (pp, scenario, sic), res in zip(cases, grid):
        single = estimate_sop(pp, scenario, sic, 40_000, SEED)
        assert res.sop.value == single.sop.value, (scenario, sic)


def test_distinct_seeds_are_distinct_but_consistent():
    p = make_params()
    a = sample_draw(p, 256, SEED)
    b = sample_draw(p, 256, SEED + 1)
    assert not np.array_equal(a.cascaded_gain_n, b.cascaded_gain_n)
    ra = estimate_sop(p, "external_n", "psic", 100_000, SEED)
    rb = estimate_sop(p, "external_n", "psic", 100_000, SEED + 1)
    gap = abs(ra.sop.value - rb.sop.value)
    assert gap <= 6.0 * float(np.hypot(ra.stderr, rb.stderr))


# ---------------------------------------------------------------------------
# structural per-trial facts


def test_far_user_ceiling_never_exceeded():
    p = make_params()
    vals = sinr_samples(p, "user_f", 50_000, SEED)
    assert vals.max() < p.a_f / p.a_n


def test_trialwise_sic_ordering():
    p = make_params()
    ip = sinr_samples(p, "user_n", 20_000, SEED, sic="ipsic")
    ps = sinr_samples(p, "user_n", 20_000, SEED, sic="psic")
    assert np.all(ip <= ps)
    assert np.any(ip < ps)


def test_unreachable_eavesdropper_gives_exact_zero():
    # zero target rate and a zero-gain wiretap make the outage event
    # impossible trial by trial, so the estimate must be exactly 0.0
    p = make_params(r_n=0.0, r_f=0.0, d_re=float("inf"), varpi=0.0)
    res = estimate_sop(p, "external_n", "psic", 5_000, SEED)
    assert res.sop.value == 0.0
    internal = make_params(r_n=0.0, r_f=0.0, d_rf=float("inf"), varpi=0.0)
    res = estimate_sop(internal, "internal", "psic", 5_000, SEED)
    assert res.sop.value == 0.0


def test_unreachable_user_gives_exact_one():
    # a zero-gain legitimate link against a live eavesdropper fires the
    # outage event on every trial (note a_n = 0 would NOT do this: it
    # silences the eavesdropper's copy of the stream as well)
    p = make_params(d_rn=float("inf"), r_n=0.0)
    res = estimate_sop(p, "external_n", "psic", 5_000, SEED)
    assert res.sop.value == 1.0


def test_throughput_accounting():
    p = make_params(r_f=0.07, r_n=0.05)
    for scenario, rate in (
        ("external_n", 0.05),
        ("external_f", 0.07),
        ("internal", 0.05),
        ("system_external", 0.12),
    ):
        res = estimate_sop(p, scenario, "psic", 10_000, SEED)
        assert res.throughput == pytest.approx((1.0 - res.sop.value) * rate, rel=1e-12)
    via_alias = estimate_throughput(p, "external_n", "psic", 10_000, SEED)
    assert via_alias.throughput == pytest.approx(
        (1.0 - via_alias.sop.value) * 0.05, rel=1e-12
    )


def test_system_event_is_union_of_external_events():
    # same seed means same trials, so the union bounds hold exactly
    p = make_params()
    cases = [(p, "external_n", "psic"), (p, "external_f", "psic"),
             (p, "system_external", "psic")]
    s_n, s_f, s_sys = [r.sop.value for r in estimate_sop_grid(cases, 50_000, SEED)]
    assert s_sys >= max(s_n, s_f)
    assert s_sys <= s_n + s_f


def test_estimate_metadata():
    p = make_params()
    res = estimate_sop(p, "external_n", "ipsic", 10_000, SEED)
    assert res.trials == 10_000
    assert res.seed == SEED
    assert res.scenario == "external_n"
    assert res.sic == "ipsic"
    assert res.sop.provenance == "monte-carlo"
    assert res.stderr == pytest.approx(
        np.sqrt(res.sop.value * (1.0 - res.sop.value) / 10_000), rel=1e-12
    )


# ---------------------------------------------------------------------------
# validation


def test_input_validation():
    p = make_params()
    with pytest.raises(ValueError):
        sample_draw(p, 0, SEED)
    with pytest.raises(ValueError):
        estimate_sop(p, "external_n", "psic", 0, SEED)
    with pytest.raises(ValueError):
        estimate_sop(p, "sidelink", "psic", 100, SEED)
    with pytest.raises(ValueError):
        estimate_sop(p, "external_n", "genie", 100, SEED)
    with pytest.raises(ValueError):
        sinr_samples(p, "nobody", 100, SEED)
    with pytest.raises(ValueError):
        empirical_sinr_cdfs(p, [("nobody", "psic", [1.0])], 100, SEED)


def test_grid_rejects_draw_shape_mismatch():
    p_a = make_params()
    p_b = make_params(d_re=40.0)
    with pytest.raises(ValueError, match="draw-shaping"):
        estimate_sop_grid([(p_a, "external_n", "psic"), (p_b, "external_n", "psic")],
                          100, SEED)
