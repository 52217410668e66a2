"""Batch verification suites for the measure-level inequalities; used by the
command line and by the acceptance tests."""

from __future__ import annotations

from itertools import product

import numpy as np

from .measures import (DiscreteMeasure, MeasurePremiseError, cs_measure_bound,
                       split_point, tail_integral_bound)
from .operators import SpectralOperator, vector_measure

CS_RHOS = (-1.0, 0.0, 0.5, 1.0, 2.0)


def cs_bound_suite(count: int = 10000, seed: int = 0) -> dict:
    """Random (operator, v, w, rho, window) instances of the Cauchy-Schwarz
    measure bound.  Returns counters and the worst signed margin rhs - lhs."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst = np.inf
    for i in range(count):
        n = int(rng.integers(3, 25))
        sig = rng.uniform(0.3, 1.5, n)
        op = SpectralOperator.diagonal(sig)
        v = op.vector(rng.standard_normal(n))
        w = op.vector(rng.standard_normal(n))
        mu_dd = vector_measure(op, v, v)
        mu_uu = vector_measure(op, w, w)
        mu_du = vector_measure(op, v, w)
        lam = np.sort(sig ** 2)
        if rng.random() < 0.5:
            a, b = 0.0, float(lam[-1] * 1.1)
        else:
            a, b = sorted(rng.uniform(lam[0] * 0.9, lam[-1] * 1.1, 2))
        rho = CS_RHOS[i % len(CS_RHOS)]
        lhs, rhs = cs_measure_bound(mu_dd, mu_uu, mu_du, a, b, rho)
        margin = rhs - lhs
        worst = min(worst, margin)
        if margin < -1e-12:
            violations += 1
    return {"instances": count, "violations": violations,
            "worst_margin": float(worst)}


def tail_bound_suite(count: int = 2000, seed: int = 0) -> dict:
    """Random premise-passing instances of the weighted tail bound.

    The constant is taken as the sharp cumulative-mass envelope of each
    measure (times a random slack), so the premise holds by construction;
    instances drawn with an arbitrary constant that fails the premise are
    counted separately as rejected.
    """
    rng = np.random.default_rng(seed)
    checked = rejected = violations = 0
    worst_ratio = np.inf
    for _ in range(count):
        n = int(rng.integers(2, 30))
        lam = np.sort(rng.uniform(1e-4, 4.0, n))
        lam = np.unique(lam)
        masses = rng.uniform(0.0, 1.0, lam.size) * rng.uniform(0.1, 2.0) \
            * lam ** rng.uniform(0.2, 1.5)
        mu = DiscreteMeasure(lam, masses)
        nu = float(rng.uniform(0.1, 1.5))
        rho = nu + float(rng.uniform(0.1, 2.0))
        envelope = float(np.max(np.cumsum(masses) / lam ** nu))
        if rng.random() < 0.8:
            c = envelope * float(rng.uniform(1.0, 3.0))
        else:
            c = envelope * float(rng.uniform(0.2, 0.999))  # premise should fail
        pick = rng.random()
        if pick < 0.7:
            big = float(lam[rng.integers(0, lam.size)])
        elif pick < 0.85:
            big = float(lam[-1] * rng.uniform(1.1, 3.0))  # beyond the support
        else:
            big = float(lam[0] * rng.uniform(0.5, 1.0))
        try:
            lhs, rhs = tail_integral_bound(mu, nu, rho, c, big)
        except MeasurePremiseError:
            rejected += 1
            continue
        checked += 1
        if lhs > rhs * (1.0 + 1e-12):
            violations += 1
        if lhs > 0.0:
            worst_ratio = min(worst_ratio, rhs / lhs)
    return {"instances": count, "premise_passing": checked,
            "premise_rejected": rejected, "violations": violations,
            "worst_rhs_over_lhs": float(worst_ratio)}


def _split_oracle(lambdas, masses):
    """Definition-level scan: smallest atom whose from-below variation mass
    reaches half the total, with interval sums taken literally."""
    total = sum(abs(m) for m in masses)
    for i, lam in enumerate(lambdas):
        below = sum(abs(m) for l, m in zip(lambdas, masses) if l <= lam)
        if below >= 0.5 * total:
            above = sum(abs(m) for l, m in zip(lambdas, masses) if l >= lam)
            return lam, below, above, total
    return lambdas[-1], total, abs(masses[-1]), total


def split_point_suite(max_atoms: int = 6, max_mass: int = 4) -> dict:
    """Exhaustive half-mass check over all integer-mass measures with up to
    ``max_atoms`` atoms and masses in 1..``max_mass``."""
    cases = violations = 0
    for k in range(1, max_atoms + 1):
        lambdas = [float(i) for i in range(1, k + 1)]
        for masses in product(range(1, max_mass + 1), repeat=k):
            cases += 1
            mu = DiscreteMeasure(lambdas, [float(m) for m in masses])
            sp = split_point(mu)
            lam_o, below_o, above_o, total_o = _split_oracle(
                lambdas, [float(m) for m in masses])
            ok = (sp.lam == lam_o
                  and abs(sp.a_lambda - below_o) <= 1e-12
                  and abs(sp.b_lambda - above_o) <= 1e-12
                  and sp.a_lambda >= 0.5 * sp.a_inf - 1e-12
                  and sp.b_lambda >= 0.5 * sp.a_inf - 1e-12
                  and abs(sp.a_inf - total_o) <= 1e-12)
            if not ok:
                violations += 1
    return {"cases": cases, "violations": violations}
