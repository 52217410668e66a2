"""Discrete measures on the non-negative half line and the bounds used by the
certificate constructions: a Cauchy-Schwarz bound between three spectral
measures, a tail bound for weighted integrals under a mass-growth premise,
and the half-mass split point of the two-sided estimate.

Measures are purely atomic here.  Integrals are finite sums over atoms, so
every bound is evaluated exactly in floating point rather than by quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Relative slack used when verifying non-strict inequalities in floats.
REL_TOL = 1e-12


class MeasurePremiseError(ValueError):
    """The mass-growth premise of the tail bound fails; carries a witness atom."""

    def __init__(self, message: str, witness_lambda: float):
        super().__init__(message)
        self.witness_lambda = witness_lambda


class DiscreteMeasure:
    """Finite signed measure on [0, inf) given as (location, mass) atoms.

    Locations are strictly increasing and non-negative; ``signed`` is True
    when any mass is negative.  The empty measure is allowed.
    """

    __slots__ = ("lambdas", "masses")

    def __init__(self, lambdas, masses):
        lam = np.asarray(lambdas, dtype=float).reshape(-1)
        m = np.asarray(masses, dtype=float).reshape(-1)
        if lam.shape != m.shape:
            raise ValueError("locations and masses must have equal length")
        if lam.size:
            if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(m))):
                raise ValueError("atoms must be finite")
            if np.any(lam < 0.0):
                raise ValueError("atom locations must be non-negative")
            if np.any(np.diff(lam) <= 0.0):
                raise ValueError("atom locations must be strictly increasing")
        lam, m = lam.copy(), m.copy()
        lam.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "masses", m)

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteMeasure is immutable")

    def __len__(self) -> int:
        return self.lambdas.shape[0]

    @property
    def signed(self) -> bool:
        return bool(np.any(self.masses < 0.0))

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def total_variation(self) -> float:
        return float(np.abs(self.masses).sum())

    def abs(self) -> "DiscreteMeasure":
        return DiscreteMeasure(self.lambdas, np.abs(self.masses))

    def restricted(self, a: float, b: float) -> "DiscreteMeasure":
        """Restriction to the closed interval [a, b]."""
        mask = (self.lambdas >= a) & (self.lambdas <= b)
        return DiscreteMeasure(self.lambdas[mask], self.masses[mask])

    def weighted_sum(self, power: float, a: float = 0.0,
                     b: float = np.inf) -> float:
        """Sum of ``mass * lambda**power`` over atoms in [a, b].

        A negative power with an atom at zero inside the window is rejected.
        """
        mask = (self.lambdas >= a) & (self.lambdas <= b)
        lam, m = self.lambdas[mask], self.masses[mask]
        if power < 0.0 and lam.size and lam[0] == 0.0:
            raise ValueError("negative power with an atom at zero")
        if not lam.size:
            return 0.0
        return float(np.sum(m * lam ** power))

    def mass_below(self, lam: float, *, inclusive: bool) -> float:
        """Cumulative mass of atoms strictly below (or up to) ``lam``."""
        if inclusive:
            return float(self.masses[self.lambdas <= lam].sum())
        return float(self.masses[self.lambdas < lam].sum())

    def to_json(self) -> dict:
        return {"lambdas": self.lambdas.tolist(),
                "masses": self.masses.tolist(),
                "signed": self.signed}

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"DiscreteMeasure(atoms={len(self)}, signed={self.signed})"


@dataclass(frozen=True)
class SplitPoint:
    """Half-mass split of a measure's total variation.

    ``a_lambda`` is the variation mass on [0, Lambda], ``b_lambda`` the mass
    on [Lambda, inf); both are at least half of the total ``a_inf``.
    """

    lam: float
    a_lambda: float
    b_lambda: float
    a_inf: float


def cs_measure_bound(mu_dd: DiscreteMeasure, mu_uu: DiscreteMeasure,
                     mu_du: DiscreteMeasure, a: float, b: float,
                     rho: float) -> tuple[float, float]:
    """Cauchy-Schwarz bound between the three pairing measures of a triple.

    Returns ``(lhs, rhs)`` where ``lhs`` is the total variation of the mixed
    measure on [a, b] and ``rhs`` is the product of the square roots of the
    ``lambda**(-rho)``-weighted mass of ``mu_dd`` and the ``lambda**rho``-
    weighted mass of ``mu_uu`` on the same window.  The bound ``lhs <= rhs``
    holds whenever the measures come from one (operator, v, w) triple.
    """
    if not 0.0 <= a <= b:
        raise ValueError("need 0 <= a <= b")
    lhs = mu_du.abs().restricted(a, b).total_variation()
    wd = mu_dd.weighted_sum(-rho, a, b)
    wu = mu_uu.weighted_sum(rho, a, b)
    if wd < 0.0 or wu < 0.0:
        raise ValueError("diagonal measures must be non-negative on the window")
    rhs = float(np.sqrt(wd) * np.sqrt(wu))
    return lhs, rhs


def tail_integral_bound(mu: DiscreteMeasure, nu: float, rho: float, C: float,
                        Lambda: float) -> tuple[float, float]:
    """Bound the ``lambda**(-rho)``-weighted tail mass of a non-negative
    measure whose cumulative mass grows at most like ``C * lambda**nu``.

    Returns ``(lhs, rhs)`` with ``lhs`` the exact tail sum over atoms at or
    above ``Lambda`` and ``rhs = C * rho / (rho - nu) * Lambda**(nu - rho)``;
    the bound asserts ``lhs <= rhs``.

    The premise is verified in the for-every-lambda sense, which for an atomic
    measure reduces to the inclusive cumulative mass at each atom: mass up to
    and including an atom must stay below ``C * lambda**nu`` there, since the
    half-open cumulative jumps past that value immediately above the atom.
    A ``Lambda`` beyond the support is allowed and yields ``(0.0, rhs)``.
    """
    if nu < 0.0:
        raise ValueError("nu must be non-negative")
    if rho <= nu:
        raise ValueError("rho must exceed nu")
    if C <= 0.0:
        raise ValueError("C must be positive")
    if Lambda <= 0.0:
        raise ValueError("Lambda must be positive")
    if np.any(mu.masses < 0.0):
        raise ValueError("measure must be non-negative")
    cum = np.cumsum(mu.masses)
    bound = C * mu.lambdas ** nu
    bad = cum > bound * (1.0 + REL_TOL)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise MeasurePremiseError(
            f"cumulative mass {cum[i]:.6g} exceeds {bound[i]:.6g} at "
            f"lambda={mu.lambdas[i]:.6g}", float(mu.lambdas[i]))
    lhs = mu.weighted_sum(-rho, Lambda, np.inf)
    rhs = C * rho / (rho - nu) * Lambda ** (nu - rho)
    return lhs, float(rhs)


def split_point(mu_du: DiscreteMeasure) -> SplitPoint:
    """Smallest atom where the from-below variation mass reaches half the
    total; by minimality the from-above mass at that atom is at least half
    as well.  A zero measure splits vacuously at the first atom.
    """
    if len(mu_du) == 0:
        raise ValueError("measure must have at least one atom")
    av = np.abs(mu_du.masses)
    below = np.cumsum(av)
    total = float(below[-1])
    idx = int(np.argmax(below >= 0.5 * total))
    above = total - (below[idx - 1] if idx > 0 else 0.0)
    return SplitPoint(lam=float(mu_du.lambdas[idx]),
                      a_lambda=float(below[idx]),
                      b_lambda=float(above),
                      a_inf=total)
