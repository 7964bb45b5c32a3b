"""Shared helpers: unit conversions and the canonical operating point.

The baseline below is the deployment every module's documentation assumes:
20 m BS-surface hop, near user at 10 m, far user and eavesdropper at 20 m,
exponent-2 path loss with -30 dB reference gain, 40 elements in 2 groups of
20, amplification 10 with -40 dBm per-element thermal noise, -55 dBm
receiver noise, 0.7/0.3 power split, 0.05 BPCU target rates and -80 dB
residual-interference channels.
"""

from __future__ import annotations

from ris_secrecy import SystemParams


def dbm(value: float) -> float:
    return 10.0 ** (value / 10.0) / 1000.0


def db(value: float) -> float:
    return 10.0 ** (value / 10.0)


BASELINE = dict(
    d_br=20.0,
    d_rn=10.0,
    d_rf=20.0,
    d_re=20.0,
    alpha_p=2.0,
    beta0=db(-30.0),
    n_elements=40,
    n_groups=2,
    n_active=20,
    kappa=10.0,
    sigma2=dbm(-55.0),
    sigma2_e=dbm(-55.0),
    sigma2_t=dbm(-40.0),
    a_f=0.7,
    a_n=0.3,
    r_f=0.05,
    r_n=0.05,
    varpi=1.0,
    omega_ipu=db(-80.0),
    omega_ipe=db(-80.0),
    p_bs=dbm(10.0),
)


def make_params(**overrides) -> SystemParams:
    """Active-surface operating point; override any field by name."""
    return SystemParams(**{**BASELINE, **overrides})


def make_passive(**overrides) -> SystemParams:
    """Passive counterpart: unity gain, no per-element thermal noise."""
    return make_params(kappa=1.0, sigma2_t=0.0, **overrides)
