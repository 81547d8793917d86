"""Solvers for atom-photon bound states outside the propagating band.

The eigenproblem reduces to E = mu_i(E), where mu_i are the sorted
eigenvalues of diag(detunings) + Sigma(E).  Because dSigma/dE is negative
semidefinite on either branch, every h_i(E) = mu_i(E) - E is strictly
decreasing there, so each sorted index holds at most one root and plain
bracketing finds all of them, including members of nearly degenerate
pairs that a determinant-sign scan would step over.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import correction
from .model import SystemConfig, Topology
from .correction import (
    EDGE_MARGIN,
    BandDomainError,
    EdgeExpansion,
    SigmaEvaluator,
    inv_localization_length,
    sigma_edge_expansion,
    two_atom_edge_value,
)

#: roots closer than this are reported as near-degenerate
DEGENERACY_GAP = 1e-8

_PROFILE_CUTOFF = 1e-12
_NORM_TOL = 1e-8


class SolverError(RuntimeError):
    """A numerical post-condition failed (root residual, normalisation)."""


@dataclass(frozen=True)
class BoundState:
    """One dressed eigenstate outside the band.

    ``photon_amplitudes`` holds the physical profile beta * sin(theta) * f_j
    on the window ``photon_sites``; the atomic amplitude vector is unit
    normalised and is scaled by cos(theta) in the full state.
    """

    branch: int
    energy: float
    mixing_angle: float
    atomic_amplitudes: np.ndarray
    photon_sites: np.ndarray
    photon_amplitudes: np.ndarray
    localization_length: float
    label: str
    flags: tuple[str, ...] = ()

    @property
    def photonic_profile(self) -> dict[int, float]:
        return dict(zip(self.photon_sites.tolist(), self.photon_amplitudes.tolist()))

    @property
    def atomic_population(self) -> float:
        return math.cos(self.mixing_angle) ** 2


@dataclass(frozen=True)
class ThresholdReport:
    """Existence condition of one state (or metaband border).

    ``threshold_g`` is the critical coupling when the state needs one;
    ``exists_always`` True means no threshold.  A parity-crossing report
    instead stores the crossing coupling in ``threshold_g`` and the
    crossing energy in ``energy``.
    """

    branch: int
    label: str
    exists_always: bool
    threshold_g: float | None
    formula_id: str
    energy: float | None = None


@dataclass(frozen=True)
class BorderInfo:
    gamma: int
    exists: bool
    energy: float | None
    threshold_g: float | None
    approximate: bool = False


@dataclass(frozen=True)
class MetabandBorders:
    beta: int
    borders: tuple[BorderInfo, ...]

    @property
    def merging(self) -> str:
        """'none', 'partial', or 'full' merging with the continuum."""
        n = sum(1 for b in self.borders if b.exists)
        return {2: "none", 1: "partial", 0: "full"}[n]


def _energy_ceiling(config: SystemConfig) -> float:
    total = float(config.point_strengths().sum())
    dmax = float(np.abs(config.detunings()).max())
    return dmax + 2.0 + 4.0 * total * total + 10.0


def _edge_energy(beta: int) -> float:
    return beta * 2.0 * (1.0 + EDGE_MARGIN)


def _gauge_fix(u: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(u) > 1e-12 * np.abs(u).max())
    if len(idx) and u[idx[0]] < 0:
        return -u
    return u


def _refine_root(f, lo: float, hi: float) -> float:
    return float(brentq(f, lo, hi, xtol=1e-13, maxiter=200))


# ---------------------------------------------------------------------------
# wavefunction assembly


def assemble_wavefunction(
    config: SystemConfig,
    E: float,
    beta: int,
    u: np.ndarray,
    label: str = "",
    flags: tuple[str, ...] = (),
) -> BoundState:
    """Build the full dressed state at a solved energy.

    The photonic cloud is a superposition of exponential wave packets
    centred on the coupling points; the window extends until the boundary
    amplitude falls below 1e-12 of the peak, and the total norm is checked
    to 1e-8.
    """
    if abs(E) <= 2.0:
        raise BandDomainError(f"bound-state energy must lie outside the band, got {E}")
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    x = inv_localization_length(E)
    lam = 1.0 / x

    sites = config.point_sites()
    strengths = config.point_strengths()
    owners = config.point_owners()
    amp = u[owners] * strengths  # per-point packet weights (units of J)

    dist = np.abs(sites[:, None] - sites[None, :])
    kernel = np.exp(-dist * x) * (1.0 / math.tanh(x) + dist)
    if beta == 1:
        kernel = kernel * np.where(dist % 2 == 0, 1.0, -1.0)
    norm_sq = float(amp @ kernel @ amp)
    if norm_sq <= 0:
        raise SolverError(f"non-positive photonic norm at E={E}")
    norm_const = math.sqrt(norm_sq)
    theta = math.atan2(norm_const, 2.0 * math.sinh(x))

    span = int(sites.max() - sites.min())
    pad = int(lam * (30.0 + math.log(len(sites) + 1))) + span + 2
    window = np.arange(int(sites.min()) - pad, int(sites.max()) + pad + 1)
    rel = np.abs(window[:, None] - sites[None, :])
    packets = np.exp(-rel * x)
    if beta == 1:
        packets = packets * np.where(rel % 2 == 0, 1.0, -1.0)
    f = packets @ amp / norm_const
    profile = beta * math.sin(theta) * f

    peak = np.abs(profile).max()
    keep = np.flatnonzero(np.abs(profile) >= _PROFILE_CUTOFF * peak)
    first, last = keep[0], keep[-1]
    window = window[first : last + 1]
    f = f[first : last + 1]
    profile = profile[first : last + 1]

    total = math.cos(theta) ** 2 + math.sin(theta) ** 2 * float(f @ f)
    if abs(total - 1.0) > _NORM_TOL:
        raise SolverError(f"norm check failed at E={E}: {total}")

    return BoundState(
        branch=beta,
        energy=E,
        mixing_angle=theta,
        atomic_amplitudes=u,
        photon_sites=window,
        photon_amplitudes=profile,
        localization_length=lam,
        label=label,
        flags=flags,
    )


# ---------------------------------------------------------------------------
# scalar solvers (single atom, symmetric and nested pairs)


def _solve_scalar_branch(rhs, edge_value: float, beta: int, ceiling: float):
    """Root of E = rhs(E) on one branch, or None when no state exists.

    ``rhs`` must be decreasing in E and ``edge_value`` its exact band-edge
    limit (detuning included), so existence is decided analytically rather
    than from a sample at the 1e-12 edge margin.  Returns (energy, pinned)
    where pinned marks a root hiding inside the edge margin.
    """
    lo = _edge_energy(beta)
    f = lambda E: E - rhs(E)  # strictly increasing
    if beta == 1:
        if not edge_value > 2.0:
            return None
        if f(lo) >= 0.0:
            return lo, True
        hi = ceiling
        while f(hi) <= 0.0:
            hi *= 2.0
        return _refine_root(f, lo, hi), False
    if not edge_value < -2.0:
        return None
    if f(lo) <= 0.0:
        return lo, True
    hi = -ceiling
    while f(hi) >= 0.0:
        hi *= 2.0
    return _refine_root(f, hi, lo), False


def solve_single_atom(config: SystemConfig) -> list[BoundState]:
    """Both bound states of a one-atom configuration.

    The state below the band exists for every coupling; the one above may
    require a threshold coupling.  Each returned energy satisfies the
    defining equation to 1e-10 (relative).
    """
    if config.n_atoms != 1:
        raise ValueError("solve_single_atom needs exactly one atom")
    delta = float(config.detunings()[0])
    ceiling = _energy_ceiling(config)
    states = []
    for beta in (-1, 1):
        rhs = lambda E, b=beta: delta + correction.sigma_element(config, 0, 0, E, b)
        edge = sigma_edge_expansion(config, 0, 0, beta)
        found = _solve_scalar_branch(rhs, edge.value + delta, beta, ceiling)
        if found is None:
            continue
        E, pinned = found
        flags = ("edge-pinned",) if pinned else ()
        if not pinned:
            resid = abs(E - rhs(E))
            if resid > 1e-10 * max(1.0, abs(E)):
                raise SolverError(f"single-atom residual {resid} at E={E}")
        states.append(
            assemble_wavefunction(config, E, beta, np.array([1.0]), "single", flags)
        )
    return sorted(states, key=lambda s: s.energy)


def _atoms_equivalent(config: SystemConfig) -> bool:
    """True when the two atoms have identical detuning and self-structure."""
    a, b = config.atoms
    if a.detuning != b.detuning or a.n_points != b.n_points:
        return False

    def self_pairs(atom):
        out = []
        for i, p in enumerate(atom.points):
            for q in atom.points[i:]:
                out.append((abs(p.site - q.site), p.strength * q.strength))
        return sorted(out)

    return self_pairs(a) == self_pairs(b)


def solve_two_atoms(config: SystemConfig) -> list[BoundState]:
    """Up to four bound states of a two-atom configuration.

    Symmetric pairs (equal self-structure) split into even/odd parity
    scalar equations, solved exactly even at a parity crossing; otherwise
    the two branch combinations of the 2x2 problem are solved and states
    are labelled by the relative sign eta of the atomic amplitudes.
    """
    if config.n_atoms != 2:
        raise ValueError("solve_two_atoms needs exactly two atoms")
    deltas = config.detunings()
    ceiling = _energy_ceiling(config)
    states: list[BoundState] = []

    if _atoms_equivalent(config):
        delta = float(deltas[0])
        for beta in (-1, 1):
            exp_aa = sigma_edge_expansion(config, 0, 0, beta)
            exp_ab = sigma_edge_expansion(config, 0, 1, beta)
            for alpha in (1, -1):
                rhs = lambda E, b=beta, al=alpha: (
                    delta
                    + correction.sigma_element(config, 0, 0, E, b)
                    + al * correction.sigma_element(config, 0, 1, E, b)
                )
                edge = EdgeExpansion(
                    exp_aa.lead + alpha * exp_ab.lead,
                    exp_aa.sub + alpha * exp_ab.sub,
                )
                found = _solve_scalar_branch(rhs, edge.value + delta, beta, ceiling)
                if found is None:
                    continue
                E, pinned = found
                u = np.array([1.0, alpha]) / math.sqrt(2.0)
                states.append(
                    assemble_wavefunction(
                        config,
                        E,
                        beta,
                        u,
                        f"alpha={alpha:+d}",
                        ("edge-pinned",) if pinned else (),
                    )
                )
    else:
        for beta in (-1, 1):
            exp_aa = sigma_edge_expansion(config, 0, 0, beta)
            exp_bb = sigma_edge_expansion(config, 1, 1, beta)
            exp_ab = sigma_edge_expansion(config, 0, 1, beta)
            shifted_a = EdgeExpansion(exp_aa.lead, exp_aa.sub + deltas[0])
            shifted_b = EdgeExpansion(exp_bb.lead, exp_bb.sub + deltas[1])
            for zeta in (1, -1):

                def rhs(E, b=beta, z=zeta):
                    da = deltas[0] + correction.sigma_element(config, 0, 0, E, b)
                    db = deltas[1] + correction.sigma_element(config, 1, 1, E, b)
                    c = correction.sigma_element(config, 0, 1, E, b)
                    return 0.5 * (da + db + z * math.hypot(da - db, 2.0 * c))

                edge = two_atom_edge_value(shifted_a, shifted_b, exp_ab, zeta)
                found = _solve_scalar_branch(rhs, edge, beta, ceiling)
                if found is None:
                    continue
                E, pinned = found
                da = deltas[0] + correction.sigma_element(config, 0, 0, E, beta)
                db = deltas[1] + correction.sigma_element(config, 1, 1, E, beta)
                c = correction.sigma_element(config, 0, 1, E, beta)
                root = math.hypot(da - db, 2.0 * c)
                theta_mix = math.atan2(-2.0 * c, (da - db) - zeta * root)
                u = _gauge_fix(np.array([math.sin(theta_mix), math.cos(theta_mix)]))
                eta = 1 if u[0] * u[1] > 0 else -1
                states.append(
                    assemble_wavefunction(
                        config,
                        E,
                        beta,
                        u,
                        f"eta={eta:+d}",
                        ("edge-pinned",) if pinned else (),
                    )
                )

    states = sorted(states, key=lambda s: s.energy)
    return _flag_near_degenerate(states)


def _flag_near_degenerate(states: list[BoundState]) -> list[BoundState]:
    out = list(states)
    for i in range(len(out) - 1):
        if (
            out[i].branch == out[i + 1].branch
            and abs(out[i].energy - out[i + 1].energy) < DEGENERACY_GAP
        ):
            for j in (i, i + 1):
                if "near-degenerate" not in out[j].flags:
                    out[j] = dataclasses.replace(
                        out[j], flags=out[j].flags + ("near-degenerate",)
                    )
    return out


# ---------------------------------------------------------------------------
# general solver


def _reflection_permutation(config: SystemConfig) -> np.ndarray | None:
    """Atom permutation realising site reflection, if the layout has one."""
    lo, hi = config.site_span()
    total = lo + hi
    point_map = {}
    for m, atom in enumerate(config.atoms):
        for p in atom.points:
            point_map[p.site] = (m, p.strength)
    perm = np.full(config.n_atoms, -1, dtype=int)
    for m, atom in enumerate(config.atoms):
        targets = set()
        for p in atom.points:
            mirrored = point_map.get(total - p.site)
            if mirrored is None or mirrored[1] != p.strength:
                return None
            targets.add(mirrored[0])
        if len(targets) != 1:
            return None
        perm[m] = targets.pop()
    if not np.array_equal(np.sort(perm), np.arange(config.n_atoms)):
        return None
    return perm


def solve_general(
    config: SystemConfig, branches: tuple[int, ...] = (-1, 1)
) -> list[BoundState]:
    """All bound states of an arbitrary configuration.

    Per branch there are at most n_atoms roots; near-degenerate pairs are
    flagged rather than merged, and amplitude vectors of degenerate roots
    in reflection-symmetric layouts are resolved by parity projection.
    """
    evaluator = SigmaEvaluator(config)
    n = config.n_atoms
    perm = _reflection_permutation(config)
    states: list[BoundState] = []

    for beta in branches:
        lo = _edge_energy(beta)
        hi = beta * _energy_ceiling(config)

        def gaps(E: float) -> np.ndarray:
            return np.linalg.eigvalsh(evaluator.hamiltonian(E, beta)) - E

        # every h_i must already have crossed zero at the outer end
        while (gaps(hi) >= 0).any() if beta == 1 else (gaps(hi) <= 0).any():
            hi *= 2.0

        def gap_i(E: float, i: int) -> float:
            return float(gaps(E)[i])

        edge_gaps = gaps(lo)
        roots: list[float] = []
        for i in range(n):
            if beta == 1:
                if edge_gaps[i] <= 0.0:
                    continue
                roots.append(_refine_root(lambda E, ii=i: gap_i(E, ii), lo, hi))
            else:
                if edge_gaps[i] >= 0.0:
                    continue
                roots.append(_refine_root(lambda E, ii=i: gap_i(E, ii), hi, lo))

        roots.sort()
        for s_index, E in enumerate(roots, start=1):
            m = evaluator.hamiltonian(E, beta) - E * np.eye(n)
            scale = max(1.0, float(np.linalg.norm(m, 2)))
            det = abs(float(np.linalg.det(m)))
            if det > 1e-9 * scale ** max(1, n - 1):
                raise SolverError(f"root residual |det|={det} at E={E}")
            w, v = np.linalg.eigh(m)
            order = np.argsort(np.abs(w))
            u = v[:, order[0]]
            if n > 1 and abs(w[order[1]]) < 1e-9 * scale and perm is not None:
                # exactly degenerate pair: resolve by reflection parity,
                # even combination for the first root, odd for the second
                rank = sum(1 for r in roots[: s_index - 1] if abs(r - E) < 1e-6)
                basis = v[:, order[:2]]
                refl = basis[perm, :]
                sym = basis.T @ refl
                _, pv = np.linalg.eigh((sym + sym.T) / 2.0)
                u = basis @ pv[:, -1 if rank == 0 else 0]
            u = _gauge_fix(u)
            states.append(assemble_wavefunction(config, E, beta, u, f"s={s_index}"))

    states = sorted(states, key=lambda s: s.energy)
    return _flag_near_degenerate(states)


# ---------------------------------------------------------------------------
# threshold conditions


def _threshold_from_coeff(
    side: int, delta: float, coeff: float
) -> tuple[bool, float | None]:
    """Existence from a band-edge value coeff * g^2 (coeff may be inf).

    ``side`` = +1 tests appearance above the band (2 - delta < coeff g^2),
    ``side`` = -1 below it (2 + delta < |coeff| g^2).
    """
    if math.isinf(coeff):
        return (coeff > 0) == (side > 0), None
    need = 2.0 - side * delta
    if need <= 0.0:
        return True, None
    if coeff == 0.0:
        return False, None  # never appears at any coupling
    return False, math.sqrt(need / abs(coeff))


def _braided_degeneracy(
    delta_n: int, delta_m: int, delta: float
) -> tuple[float, float] | None:
    """Energy and coupling of the parity crossing above the band, if any."""
    if delta_n <= 2 * delta_m or delta_n % 2 == 0:
        return None
    a = delta_n - 2 * delta_m
    b = delta_n

    def f(x: float) -> float:
        return math.exp(a * x) + math.exp(-b * x) - 2.0

    hi = 1.0
    while f(hi) < 0.0:
        hi *= 2.0
    x_c = brentq(f, 1e-12, hi, xtol=1e-14)
    E_c = 2.0 * math.cosh(x_c)
    if delta >= E_c:
        return None
    g_c = math.sqrt(
        (E_c - delta)
        * math.sqrt(E_c * E_c - 4.0)
        / (2.0 * (1.0 - math.exp(-delta_n * x_c)))
    )
    return E_c, g_c


def _single_thresholds(n_points: int, delta_n: int, delta: float) -> list[ThresholdReport]:
    out = [ThresholdReport(-1, "single", True, None, "single_lower_always")]
    if n_points % 2 == 0 and delta_n % 2 == 1:
        exists, g = _threshold_from_coeff(+1, delta, n_points * delta_n / 2.0)
        out.append(
            ThresholdReport(
                +1, "single", exists, g, "single_upper_even_points_odd_spacing"
            )
        )
    else:
        out.append(
            ThresholdReport(+1, "single", True, None, "single_upper_divergent_edge")
        )
    return out


def _pair_thresholds(
    topology: Topology, delta_n: int, delta_m: int, delta: float
) -> list[ThresholdReport]:
    out: list[ThresholdReport] = []
    if topology is Topology.SEPARATE:
        out.append(ThresholdReport(-1, "alpha=+1", True, None, "separate_lower_even_always"))
        exists, g = _threshold_from_coeff(-1, delta, delta_n + 2 * delta_m)
        out.append(ThresholdReport(-1, "alpha=-1", exists, g, "separate_lower_odd"))
        if delta_n % 2 == 1:
            for alpha in (1, -1):
                exists, g = _threshold_from_coeff(+1, delta, delta_n)
                out.append(
                    ThresholdReport(
                        +1, f"alpha={alpha:+d}", exists, g, "separate_upper_odd_spacing"
                    )
                )
        else:
            always_alpha = -1 if delta_m % 2 == 1 else 1
            out.append(
                ThresholdReport(
                    +1, f"alpha={always_alpha:+d}", True, None, "separate_upper_divergent"
                )
            )
            exists, g = _threshold_from_coeff(+1, delta, delta_n + 2 * delta_m)
            out.append(
                ThresholdReport(
                    +1, f"alpha={-always_alpha:+d}", exists, g, "separate_upper_even_spacing"
                )
            )
        return out
    if topology is Topology.BRAIDED:
        out.append(ThresholdReport(-1, "alpha=+1", True, None, "braided_lower_even_always"))
        exists, g = _threshold_from_coeff(-1, delta, delta_n - delta_m)
        out.append(ThresholdReport(-1, "alpha=-1", exists, g, "braided_lower_odd"))
        if delta_n % 2 == 1:
            for alpha in (1, -1):
                sign = alpha if delta_m % 2 == 1 else -alpha
                exists, g = _threshold_from_coeff(+1, delta, delta_n + sign * delta_m)
                out.append(
                    ThresholdReport(
                        +1, f"alpha={alpha:+d}", exists, g, "braided_upper_odd_spacing"
                    )
                )
            crossing = _braided_degeneracy(delta_n, delta_m, delta)
            if crossing is not None:
                e_c, g_c = crossing
                out.append(
                    ThresholdReport(
                        +1,
                        "degeneracy",
                        False,
                        g_c,
                        "braided_upper_parity_crossing",
                        energy=e_c,
                    )
                )
        else:
            always_alpha = -1 if delta_m % 2 == 1 else 1
            out.append(
                ThresholdReport(
                    +1, f"alpha={always_alpha:+d}", True, None, "braided_upper_divergent"
                )
            )
            exists, g = _threshold_from_coeff(+1, delta, delta_n - delta_m)
            out.append(
                ThresholdReport(
                    +1, f"alpha={-always_alpha:+d}", exists, g, "braided_upper_even_spacing"
                )
            )
        return out
    if topology is Topology.NESTED:
        out.append(ThresholdReport(-1, "eta=+1", True, None, "nested_lower_always"))
        exists, g = _threshold_from_coeff(-1, delta, delta_m)
        out.append(ThresholdReport(-1, "eta=-1", exists, g, "nested_lower_threshold"))
        eta_of_zeta = (lambda z: z) if delta_m % 2 == 0 else (lambda z: -z)
        if delta_n % 2 == 1:
            root = math.hypot(delta_n, delta_m)
            for zeta in (1, -1):
                exists, g = _threshold_from_coeff(
                    +1, delta, delta_n + delta_m + zeta * root
                )
                out.append(
                    ThresholdReport(
                        +1,
                        f"eta={eta_of_zeta(zeta):+d}",
                        exists,
                        g,
                        "nested_upper_odd_spacing",
                    )
                )
        else:
            out.append(
                ThresholdReport(
                    +1, f"eta={eta_of_zeta(1):+d}", True, None, "nested_upper_divergent"
                )
            )
            exists, g = _threshold_from_coeff(+1, delta, delta_m)
            out.append(
                ThresholdReport(
                    +1, f"eta={eta_of_zeta(-1):+d}", exists, g, "nested_upper_threshold"
                )
            )
        return out
    raise ValueError(f"not a two-atom topology: {topology}")


def _chain_thresholds(
    topology: Topology, delta_n: int, delta_m: int, delta: float
) -> list[ThresholdReport]:
    if topology is Topology.BRAIDED and delta_n <= 2 * delta_m:
        return [
            ThresholdReport(
                0, "chain", False, None, "uncovered: braided chain needs dn > 2*dm"
            )
        ]
    out: list[ThresholdReport] = []
    for beta in (-1, 1):
        for gamma in (1, -1):
            coeff = correction.chain_limit_edge(
                topology, delta_n, delta_m, 1.0, beta, gamma
            )
            exists, g = _threshold_from_coeff(beta, delta, coeff)
            out.append(
                ThresholdReport(
                    beta,
                    f"gamma={gamma:+d}",
                    exists,
                    g,
                    f"chain_{topology.value}_border_edge_limit",
                )
            )
    return out


def thresholds(
    family: str,
    topology: Topology | None = None,
    n: int | None = None,
    delta_n: int = 1,
    delta_m: int | None = None,
    delta: float = 0.0,
) -> list[ThresholdReport]:
    """Closed-form existence conditions per configuration family.

    ``family`` is 'single' (n = number of coupling points), 'pair', or
    'chain'.  Parameter combinations with no closed-form case produce a
    single 'uncovered' report instead of a guessed formula.
    """
    if family == "single":
        if n is None:
            raise ValueError("single-atom thresholds need n (number of points)")
        return _single_thresholds(n, delta_n, delta)
    if family == "pair":
        if topology is None or delta_m is None:
            raise ValueError("pair thresholds need a topology and delta_m")
        if topology is Topology.BRAIDED and delta_n <= delta_m:
            return [
                ThresholdReport(0, "pair", False, None, "uncovered: braided needs dn > dm")
            ]
        return _pair_thresholds(topology, delta_n, delta_m, delta)
    if family == "chain":
        if topology is None or delta_m is None:
            raise ValueError("chain thresholds need a topology and delta_m")
        return _chain_thresholds(topology, delta_n, delta_m, delta)
    return [
        ThresholdReport(0, family, False, None, f"uncovered: unknown family {family!r}")
    ]


# ---------------------------------------------------------------------------
# metaband borders in the long-chain limit


def metaband_borders(
    topology: Topology,
    delta_n: int,
    delta_m: int,
    g: float,
    delta: float,
    beta: int,
) -> MetabandBorders:
    """Border energies of the metaband formed by a long chain's states.

    Braided borders with delta_n - 3 * delta_m <= 0 are only approximate
    (next-nearest-neighbour packet overlap) and are flagged as such.
    """
    approximate = topology is Topology.BRAIDED and delta_n - 3 * delta_m <= 0
    ceiling = abs(delta) + 2.0 + 16.0 * g * g + 10.0
    borders = []
    for gamma in (1, -1):
        coeff = correction.chain_limit_edge(topology, delta_n, delta_m, 1.0, beta, gamma)
        exists, threshold_g = _threshold_from_coeff(beta, delta, coeff)
        edge_value = coeff if math.isinf(coeff) else coeff * g * g
        rhs = lambda E, gm=gamma: delta + correction.chain_limit_sigma(
            topology, delta_n, delta_m, g, E, beta, gm
        )
        found = _solve_scalar_branch(rhs, edge_value + delta, beta, ceiling)
        borders.append(
            BorderInfo(
                gamma=gamma,
                exists=found is not None,
                energy=None if found is None else found[0],
                threshold_g=threshold_g,
                approximate=approximate,
            )
        )
    return MetabandBorders(beta=beta, borders=tuple(borders))
