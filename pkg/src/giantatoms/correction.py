"""Localization length and energy-correction (self/mutual) functions.

Outside the band, a photon emitted at site n and reabsorbed at site n'
contributes a weight (-beta)^|n-n'| * exp(-|n-n'| / lambda(E)) divided by
E * sqrt(1 - 4/E^2); summing those weights over coupling-point pairs gives
the self-energy (same atom) and mutual-energy (different atoms) entries of
the correction matrix.  ``sigma_integral`` evaluates the defining
Brillouin-zone integral by quadrature and serves as an independent oracle
for the closed forms.

All energies here are in units of the hopping; callers must keep
|E| >= 2 * (1 + EDGE_MARGIN).  Band-edge values needed by threshold
formulas are exposed separately as exact limits, never as numeric limits
of the generic evaluators.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .model import SystemConfig, Topology, build_single_atom, build_two_atoms


class BandDomainError(ValueError):
    """Energy lies inside (or on the edge of) the propagating band."""


class BranchMismatchError(ValueError):
    """Sign of the energy does not match the requested branch."""


class Branch(enum.IntEnum):
    UPPER = 1
    LOWER = -1


#: callers stay at least this far (relatively) outside the band
EDGE_MARGIN = 1e-12

_QUAD_ABS_TOL = 1e-12


def _require_outside_band(E: float) -> None:
    if not abs(E) > 2.0:
        raise BandDomainError(f"|E| must exceed 2 (band half-width), got E={E}")


def _require_branch(E: float, beta: int) -> None:
    _require_outside_band(E)
    if beta not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {beta}")
    if (E > 0) != (beta == 1):
        raise BranchMismatchError(f"E={E} does not lie on branch beta={beta:+d}")


def inv_localization_length(E: float) -> float:
    """arccosh(|E|/2), evaluated stably arbitrarily close to the band edge."""
    _require_outside_band(E)
    u = abs(E) / 2.0 - 1.0
    return math.log1p(u + math.sqrt(u * (2.0 + u)))


def localization_length(E: float) -> float:
    """Decay length (in sites) of the bound photonic cloud."""
    return 1.0 / inv_localization_length(E)


def branch_denominator(E: float) -> float:
    """E * sqrt(1 - 4/E^2), formed as sign(E) * sqrt((|E|-2)(|E|+2))."""
    _require_outside_band(E)
    a = abs(E)
    return math.copysign(math.sqrt((a - 2.0) * (a + 2.0)), E)


def _pair_weight_sum(
    distances: np.ndarray, weights: np.ndarray, E: float, beta: int
) -> float:
    x = inv_localization_length(E)
    terms = weights * np.exp(-distances * x)
    if beta == 1:
        terms = terms * np.where(distances % 2 == 0, 1.0, -1.0)
    return float(terms.sum())


@dataclass(frozen=True)
class CorrectionMatrix:
    """Full energy-correction matrix at one energy on one branch."""

    energy: float
    beta: int
    matrix: np.ndarray


class SigmaEvaluator:
    """Precomputed pairwise data for fast repeated correction-matrix builds."""

    def __init__(self, config: SystemConfig):
        sites = config.point_sites()
        strengths = config.point_strengths()
        owners = config.point_owners()
        self.n_atoms = config.n_atoms
        self.distances = np.abs(sites[:, None] - sites[None, :])
        self.weights = strengths[:, None] * strengths[None, :]
        self.parity = np.where(self.distances % 2 == 0, 1.0, -1.0)
        self.aggregate = np.zeros((self.n_atoms, len(sites)))
        self.aggregate[owners, np.arange(len(sites))] = 1.0
        self.detunings = config.detunings()

    def matrix(self, E: float, beta: int) -> np.ndarray:
        _require_branch(E, beta)
        x = inv_localization_length(E)
        kernel = self.weights * np.exp(-self.distances * x)
        if beta == 1:
            kernel = kernel * self.parity
        sigma = self.aggregate @ kernel @ self.aggregate.T
        return sigma / branch_denominator(E)

    def hamiltonian(self, E: float, beta: int) -> np.ndarray:
        """diag(detunings) + correction matrix at energy E."""
        h = self.matrix(E, beta)
        h[np.diag_indices_from(h)] += self.detunings
        return h


def sigma_matrix(config: SystemConfig, E: float, beta: int) -> CorrectionMatrix:
    return CorrectionMatrix(E, beta, SigmaEvaluator(config).matrix(E, beta))


def _atom_pair_data(
    config: SystemConfig, m: int, m2: int
) -> tuple[np.ndarray, np.ndarray]:
    a, b = config.atoms[m], config.atoms[m2]
    J = config.waveguide.hopping
    sa = np.array(a.sites)[:, None]
    sb = np.array(b.sites)[None, :]
    ga = (np.array(a.strengths) / J)[:, None]
    gb = (np.array(b.strengths) / J)[None, :]
    return np.abs(sa - sb).ravel(), (ga * gb).ravel()


def sigma_element(config: SystemConfig, m: int, m2: int, E: float, beta: int) -> float:
    """Closed-form self-energy (m == m2) or mutual-energy (m != m2)."""
    _require_branch(E, beta)
    dist, w = _atom_pair_data(config, m, m2)
    return _pair_weight_sum(dist, w, E, beta) / branch_denominator(E)


def sigma_integral(config: SystemConfig, m: int, m2: int, E: float) -> float:
    """Quadrature of the defining integral; oracle for ``sigma_element``.

    For |E| > 2 the integrand 1/(E + 2 cos k) is smooth, and the odd part
    of exp(ikd) integrates to zero, leaving cosine moments on [0, pi].
    """
    _require_outside_band(E)
    dist, w = _atom_pair_data(config, m, m2)
    total = 0.0
    for d in np.unique(dist):
        wd = float(w[dist == d].sum())
        val, _ = integrate.quad(
            lambda k: 1.0 / (E + 2.0 * math.cos(k)),
            0.0,
            math.pi,
            weight="cos",
            wvar=float(d),
            epsabs=_QUAD_ABS_TOL,
            limit=200,
        )
        total += wd * val / math.pi
    return total


def self_energy_single(
    n_points: int, delta_n: int, g: float, E: float, beta: int
) -> float:
    """Self-energy of one atom with equally spaced, equal-strength points."""
    config = build_single_atom(n_points, delta_n, g)
    return sigma_element(config, 0, 0, E, beta)


def pair_energies(
    topology: Topology,
    delta_n: int,
    delta_m: int,
    g: float,
    E: float,
    beta: int,
) -> tuple[float, float, float]:
    """Closed-form (self_a, self_b, mutual) for the three two-atom layouts."""
    _require_branch(E, beta)
    x = inv_localization_length(E)
    denom = branch_denominator(E)

    def q(d: int) -> float:
        s = -1.0 if (beta == 1 and d % 2) else 1.0
        return s * math.exp(-d * x)

    def self_two_point(dn: int) -> float:
        return 2.0 * g * g * (1.0 + q(dn)) / denom

    if topology is Topology.SEPARATE:
        self_ab = self_two_point(delta_n)
        mutual = 0.5 * q(delta_m) * (1.0 + q(delta_n)) * self_ab
        return self_ab, self_ab, mutual
    if topology is Topology.BRAIDED:
        if delta_n <= delta_m:
            raise ValueError("braided layout needs delta_n > delta_m")
        self_ab = self_two_point(delta_n)
        sign_m = -1.0 if (beta == 1 and delta_m % 2) else 1.0
        sign_n = -1.0 if (beta == 1 and delta_n % 2) else 1.0
        mutual = (
            g
            * g
            * sign_m
            * math.exp(-(delta_n - delta_m) * x)
            * (
                math.exp((delta_n - 2 * delta_m) * x)
                + math.exp(-delta_n * x)
                + 2.0 * sign_n
            )
            / denom
        )
        return self_ab, self_ab, mutual
    if topology is Topology.NESTED:
        self_a = self_two_point(delta_n + 2 * delta_m)
        self_b = self_two_point(delta_n)
        mutual = q(delta_m) * self_b
        return self_a, self_b, mutual
    raise ValueError(f"not a two-atom topology: {topology}")


def chain_limit_sigma(
    topology: Topology,
    delta_n: int,
    delta_m: int,
    g: float,
    E: float,
    beta: int,
    gamma: int,
) -> float:
    """Energy-correction function of an infinite chain's border states.

    ``gamma`` = +1 (-1) selects the in-phase (staggered) superposition of
    atomic excitations; which of the two forms the upper or lower border
    of the metaband depends on parameters.
    """
    if gamma not in (1, -1):
        raise ValueError(f"gamma must be +1 or -1, got {gamma}")
    _require_branch(E, beta)
    x = inv_localization_length(E)
    denom = branch_denominator(E)

    def q(d: int) -> float:
        s = -1.0 if (beta == 1 and d % 2) else 1.0
        return s * math.exp(-d * x)

    if topology is Topology.SEPARATE:
        base = 2.0 * g * g * (1.0 + q(delta_n)) / denom
        return (1.0 + gamma * q(delta_m)) / (1.0 - gamma * q(delta_n + delta_m)) * base
    if topology is Topology.BRAIDED:
        if delta_n <= 2 * delta_m:
            raise ValueError("braided chain needs delta_n > 2*delta_m")
        base = 2.0 * g * g * (1.0 + q(delta_n - 2 * delta_m)) / denom
        return (1.0 + gamma * q(delta_m)) / (1.0 - gamma * q(delta_n - delta_m)) * base
    if topology is Topology.NESTED:
        base = 2.0 * g * g / denom
        return (1.0 + gamma * q(delta_m)) / (1.0 - gamma * q(delta_m)) * base
    raise ValueError(f"not a chain topology: {topology}")


# ---------------------------------------------------------------------------
# Exact band-edge limits.
#
# Writing x = arccosh(|E|/2) -> 0 at the edge, every correction function
# behaves as lead/x + sub + O(x).  A finite edge value (sub, when lead is
# zero) is what the threshold conditions compare against; a nonzero lead
# means the function diverges and the corresponding state always exists.


@dataclass(frozen=True)
class EdgeExpansion:
    """First two coefficients of sigma(x) = lead/x + sub + O(x) at the edge."""

    lead: float
    sub: float

    @property
    def value(self) -> float:
        if self.lead > 0:
            return math.inf
        if self.lead < 0:
            return -math.inf
        return self.sub


def edge_expansion_from_pairs(
    distances: np.ndarray, weights: np.ndarray, beta: int
) -> EdgeExpansion:
    """Edge expansion of a pairwise weight sum divided by the branch factor."""
    signs = np.where(distances % 2 == 0, 1.0, -1.0) if beta == 1 else 1.0
    s0 = float((weights * signs).sum())
    s1 = float((weights * signs * distances).sum())
    scale = float(np.abs(weights).sum()) or 1.0
    if abs(s0) < 1e-12 * scale:
        s0 = 0.0
    return EdgeExpansion(lead=beta * s0 / 2.0, sub=-beta * s1 / 2.0)


def sigma_edge_expansion(config: SystemConfig, m: int, m2: int, beta: int) -> EdgeExpansion:
    dist, w = _atom_pair_data(config, m, m2)
    return edge_expansion_from_pairs(dist, w, beta)


def quadratic_edge_expansion(
    config: SystemConfig, u: np.ndarray, beta: int
) -> EdgeExpansion:
    """Edge expansion of u^T Sigma(E) u for a fixed atomic-amplitude vector."""
    sites = config.point_sites()
    strengths = config.point_strengths()
    owners = config.point_owners()
    amp = np.asarray(u, dtype=float)[owners] * strengths
    dist = np.abs(sites[:, None] - sites[None, :]).ravel()
    w = (amp[:, None] * amp[None, :]).ravel()
    return edge_expansion_from_pairs(dist, w, beta)


def _bracket_order(sign: float, dist: int, minus_form: bool) -> tuple[float, int]:
    """Leading coefficient and x-order of 1 +/- sign * exp(-dist * x)."""
    s = -sign if minus_form else sign
    if s > 0:
        return 2.0, 0
    return float(dist), 1


def chain_limit_edge(
    topology: Topology,
    delta_n: int,
    delta_m: int,
    g: float,
    beta: int,
    gamma: int,
) -> float:
    """Exact band-edge limit of ``chain_limit_sigma`` (may be +/- inf)."""
    if gamma not in (1, -1):
        raise ValueError(f"gamma must be +1 or -1, got {gamma}")
    if beta not in (1, -1):
        raise ValueError(f"beta must be +1 or -1, got {beta}")

    def par(d: int) -> float:
        return -1.0 if (beta == 1 and d % 2) else 1.0

    numerator = [(gamma * par(delta_m), delta_m, False)]
    if topology is Topology.SEPARATE:
        numerator.append((par(delta_n), delta_n, False))
        denominator = [(gamma * par(delta_n + delta_m), delta_n + delta_m, True)]
    elif topology is Topology.BRAIDED:
        if delta_n <= 2 * delta_m:
            raise ValueError("braided chain needs delta_n > 2*delta_m")
        numerator.append((par(delta_n - 2 * delta_m), delta_n - 2 * delta_m, False))
        denominator = [(gamma * par(delta_n - delta_m), delta_n - delta_m, True)]
    elif topology is Topology.NESTED:
        denominator = [(gamma * par(delta_m), delta_m, True)]
    else:
        raise ValueError(f"not a chain topology: {topology}")

    coeff = beta * g * g
    order = -1  # from the 1/sinh(x) of the branch factor
    for sign, dist, minus in numerator:
        c, e = _bracket_order(sign, dist, minus)
        coeff *= c
        order += e
    for sign, dist, minus in denominator:
        c, e = _bracket_order(sign, dist, minus)
        coeff /= c
        order -= e
    if order < 0:
        return math.copysign(math.inf, coeff)
    if order > 0:
        return 0.0
    return coeff


def two_atom_edge_value(
    self_a: EdgeExpansion,
    self_b: EdgeExpansion,
    mutual: EdgeExpansion,
    zeta: int,
) -> float:
    """Band-edge limit of the two-atom branch combination.

    The combination is (a + b)/2 + zeta/2 * sqrt((a - b)^2 + 4 c^2) with
    a, b, c ~ lead/x + sub near the edge; the limit may be finite even
    when every matrix element diverges.
    """
    if zeta not in (1, -1):
        raise ValueError(f"zeta must be +1 or -1, got {zeta}")
    La, Sa = self_a.lead, self_a.sub
    Lb, Sb = self_b.lead, self_b.sub
    Lc, Sc = mutual.lead, mutual.sub
    root_lead = math.hypot(La - Lb, 2.0 * Lc)
    lead = 0.5 * (La + Lb) + 0.5 * zeta * root_lead
    scale = max(abs(La), abs(Lb), abs(Lc), 1.0)
    if abs(lead) > 1e-12 * scale:
        return math.copysign(math.inf, lead)
    if root_lead > 1e-12 * scale:
        root_sub = ((La - Lb) * (Sa - Sb) + 4.0 * Lc * Sc) / root_lead
    else:
        root_sub = math.hypot(Sa - Sb, 2.0 * Sc)
    return 0.5 * (Sa + Sb) + 0.5 * zeta * root_sub


def pair_edge_expansions(
    topology: Topology, delta_n: int, delta_m: int, g: float, beta: int
) -> tuple[EdgeExpansion, EdgeExpansion, EdgeExpansion]:
    """Edge expansions of (self_a, self_b, mutual) for a standard pair."""
    config = build_two_atoms(topology, delta_n, delta_m, g)
    return (
        sigma_edge_expansion(config, 0, 0, beta),
        sigma_edge_expansion(config, 1, 1, beta),
        sigma_edge_expansion(config, 0, 1, beta),
    )
