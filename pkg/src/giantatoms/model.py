"""System configurations: waveguide parameters, atoms, and coupling layouts.

Conventions used throughout the package:

* energies are measured in units of the inter-resonator hopping rate J,
  in a rotating frame where the band centre sits at zero, so the
  propagating band is the interval [-2, 2];
* positions are integer site indices of the resonator array;
* ``band_center`` (the absolute frequency of the band centre) is carried
  along for report labelling only and never enters a computation.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np


class ConfigurationError(ValueError):
    """Raised when a requested layout cannot be realised."""


class Topology(enum.Enum):
    """Interleaving pattern of two-point atoms (plus a one-point marker)."""

    SEPARATE = "separate"
    BRAIDED = "braided"
    NESTED = "nested"
    SMALL_ATOM = "small_atom"


@dataclass(frozen=True)
class WaveguideParams:
    """Coupled-resonator array: hopping J > 0 and the (label-only) band centre."""

    hopping: float = 1.0
    band_center: float = 0.0

    def __post_init__(self):
        if not self.hopping > 0:
            raise ConfigurationError(f"hopping must be positive, got {self.hopping}")


@dataclass(frozen=True)
class CouplingPoint:
    """One attachment of an atom to the array: site index and strength g >= 0."""

    site: int
    strength: float


@dataclass(frozen=True)
class AtomSpec:
    """A two-level emitter attached to the array at one or more points.

    ``detuning`` is the emitter frequency relative to the band centre.
    Points are kept sorted by site; sites must be distinct within an atom.
    """

    detuning: float
    points: tuple[CouplingPoint, ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise ConfigurationError("an atom needs at least one coupling point")
        object.__setattr__(
            self, "points", tuple(sorted(self.points, key=lambda p: p.site))
        )

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(p.site for p in self.points)

    @property
    def strengths(self) -> tuple[float, ...]:
        return tuple(p.strength for p in self.points)

    @property
    def n_points(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SystemConfig:
    """Waveguide plus the full list of atoms; input to every solver."""

    waveguide: WaveguideParams
    atoms: tuple[AtomSpec, ...]

    def __post_init__(self):
        if len(self.atoms) < 1:
            raise ConfigurationError("a configuration needs at least one atom")
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def n_points(self) -> int:
        return sum(a.n_points for a in self.atoms)

    def point_sites(self) -> np.ndarray:
        return np.array([p.site for a in self.atoms for p in a.points], dtype=int)

    def point_strengths(self) -> np.ndarray:
        """Strengths in units of the hopping."""
        J = self.waveguide.hopping
        return np.array(
            [p.strength / J for a in self.atoms for p in a.points], dtype=float
        )

    def point_owners(self) -> np.ndarray:
        """Index of the atom each coupling point belongs to."""
        return np.array(
            [m for m, a in enumerate(self.atoms) for _ in a.points], dtype=int
        )

    def detunings(self) -> np.ndarray:
        """Atom detunings in units of the hopping."""
        J = self.waveguide.hopping
        return np.array([a.detuning / J for a in self.atoms], dtype=float)

    def site_span(self) -> tuple[int, int]:
        sites = self.point_sites()
        return int(sites.min()), int(sites.max())


def _check_positive_int(name: str, value: int, minimum: int = 1) -> None:
    if int(value) != value or value < minimum:
        raise ConfigurationError(f"{name} must be an integer >= {minimum}, got {value}")


def _check_strength(g: float) -> None:
    if g < 0:
        raise ConfigurationError(f"coupling strength must be >= 0, got {g}")


def build_single_atom(
    n_points: int,
    delta_n: int,
    g: float,
    delta: float = 0.0,
    hopping: float = 1.0,
) -> SystemConfig:
    """One atom with equally spaced, equal-strength coupling points.

    Points sit at sites 0, delta_n, ..., (n_points - 1) * delta_n.
    """
    _check_positive_int("n_points", n_points)
    _check_positive_int("delta_n", delta_n)
    _check_strength(g)
    points = tuple(CouplingPoint(l * delta_n, g) for l in range(n_points))
    atom = AtomSpec(detuning=delta, points=points)
    return SystemConfig(WaveguideParams(hopping=hopping), (atom,))


def _two_atom_sites(topology: Topology, delta_n: int, delta_m: int) -> tuple[tuple[int, int], tuple[int, int]]:
    if topology is Topology.SEPARATE:
        return (0, delta_n), (delta_n + delta_m, 2 * delta_n + delta_m)
    if topology is Topology.BRAIDED:
        if delta_n <= delta_m:
            raise ConfigurationError(
                f"braided layout needs delta_n > delta_m, got {delta_n} <= {delta_m}"
            )
        return (0, delta_n), (delta_n - delta_m, 2 * delta_n - delta_m)
    if topology is Topology.NESTED:
        return (0, delta_n + 2 * delta_m), (delta_m, delta_m + delta_n)
    raise ConfigurationError(f"not a two-atom topology: {topology}")


def build_two_atoms(
    topology: Topology,
    delta_n: int,
    delta_m: int,
    g: float,
    delta: float = 0.0,
    hopping: float = 1.0,
) -> SystemConfig:
    """Two identical two-point atoms in one of the three basic layouts.

    ``delta_n`` is the intra-atom point distance (for the nested layout,
    of the inner atom) and ``delta_m`` the relevant inter-atom distance:
    outer gap (separate), overlap offset (braided), or nesting margin.
    """
    _check_positive_int("delta_n", delta_n)
    _check_positive_int("delta_m", delta_m)
    _check_strength(g)
    sites_a, sites_b = _two_atom_sites(topology, delta_n, delta_m)
    atoms = tuple(
        AtomSpec(delta, tuple(CouplingPoint(s, g) for s in sites))
        for sites in (sites_a, sites_b)
    )
    return SystemConfig(WaveguideParams(hopping=hopping), atoms)


def _embed_doubled(doubled: list[list[int]]) -> list[list[int]]:
    """Map positions given in half-site units onto the smallest integer lattice.

    All pairwise distances are preserved; the minimum site lands on 0.
    Requires every doubled coordinate to share one parity (true for all
    the chain layouts built here).
    """
    flat = [s for atom in doubled for s in atom]
    lo = min(flat)
    if any((s - lo) % 2 for s in flat):
        raise ConfigurationError("layout does not embed on the integer lattice")
    return [[(s - lo) // 2 for s in atom] for atom in doubled]


def _chain_doubled_sites(
    topology: Topology, n_atoms: int, delta_n: int, delta_m: int
) -> list[list[int]]:
    if topology is Topology.SEPARATE:
        pitch = 2 * (delta_n + delta_m)
        return [[p * pitch - delta_n, p * pitch + delta_n] for p in range(n_atoms)]
    if topology is Topology.BRAIDED:
        if delta_n <= 2 * delta_m:
            raise ConfigurationError(
                f"braided chain needs delta_n > 2*delta_m, got {delta_n} <= {2 * delta_m}"
            )
        pitch = 2 * (delta_n - delta_m)
        return [[p * pitch - delta_n, p * pitch + delta_n] for p in range(n_atoms)]
    if topology is Topology.NESTED:
        # concentric: atom 0 outermost, each inner atom delta_m closer per side
        out = []
        for i in range(n_atoms):
            half = delta_n + 2 * (n_atoms - 1 - i) * delta_m
            out.append([-half, half])
        return out
    raise ConfigurationError(f"not a chain topology: {topology}")


def build_chain(
    topology: Topology,
    n_atoms: int,
    delta_n: int,
    delta_m: int,
    g: float,
    delta: float = 0.0,
    hopping: float = 1.0,
) -> SystemConfig:
    """Chain of ``n_atoms`` two-point atoms with every neighbouring pair in
    the given layout; sites are shifted so the leftmost point is 0."""
    _check_positive_int("n_atoms", n_atoms, minimum=2)
    _check_positive_int("delta_n", delta_n)
    _check_positive_int("delta_m", delta_m)
    _check_strength(g)
    doubled = _chain_doubled_sites(topology, n_atoms, delta_n, delta_m)
    sites = _embed_doubled(doubled)
    flat = [s for atom in sites for s in atom]
    if len(set(flat)) != len(flat):
        raise ConfigurationError("chain layout produces colliding coupling points")
    atoms = tuple(
        AtomSpec(delta, tuple(CouplingPoint(s, g) for s in atom_sites))
        for atom_sites in sites
    )
    return SystemConfig(WaveguideParams(hopping=hopping), atoms)


def build_ssh_chain(
    n_atoms: int,
    delta_n: int,
    delta_m: int,
    g: float,
    mu: float,
    delta: float = 0.0,
    hopping: float = 1.0,
) -> SystemConfig:
    """Separate-layout chain with alternating per-point strengths.

    Atoms at even positions carry strengths (g, mu*g), atoms at odd
    positions (mu*g, g); mu = 1 degenerates to the uniform chain.
    """
    _check_positive_int("n_atoms", n_atoms, minimum=2)
    if n_atoms % 2:
        raise ConfigurationError(f"n_atoms must be even, got {n_atoms}")
    if not mu > 0:
        raise ConfigurationError(f"mu must be positive, got {mu}")
    _check_strength(g)
    base = build_chain(Topology.SEPARATE, n_atoms, delta_n, delta_m, g, delta, hopping)
    atoms = []
    for i, atom in enumerate(base.atoms):
        left, right = atom.sites
        gl, gr = (g, mu * g) if i % 2 == 0 else (mu * g, g)
        atoms.append(
            AtomSpec(delta, (CouplingPoint(left, gl), CouplingPoint(right, gr)))
        )
    return SystemConfig(base.waveguide, tuple(atoms))


def validate(config: SystemConfig) -> list[str]:
    """Report every invariant violation; an empty list means the config is sound.

    Zero-strength points are legal (decoupled probes) but produce a warning.
    """
    problems: list[str] = []
    if config.waveguide.hopping <= 0:
        problems.append(f"hopping must be positive, got {config.waveguide.hopping}")
    seen: dict[int, tuple[int, int]] = {}
    for m, atom in enumerate(config.atoms):
        if atom.n_points < 1:
            problems.append(f"atom {m} has no coupling points")
        for l, point in enumerate(atom.points):
            if point.strength < 0:
                problems.append(
                    f"atom {m} point {l}: negative strength {point.strength}"
                )
            elif point.strength == 0:
                warnings.warn(
                    f"atom {m} point {l} has zero strength (decoupled point)",
                    stacklevel=2,
                )
            if point.site in seen:
                m0, l0 = seen[point.site]
                problems.append(
                    f"site {point.site} shared by atom {m0} point {l0} "
                    f"and atom {m} point {l}"
                )
            else:
                seen[point.site] = (m, l)
        sites = atom.sites
        if len(set(sites)) != len(sites):
            problems.append(f"atom {m} has duplicate coupling sites {sites}")
    return problems


def translate(config: SystemConfig, offset: int) -> SystemConfig:
    """Shift every coupling site by a constant; physics must not change."""
    atoms = tuple(
        AtomSpec(
            a.detuning,
            tuple(CouplingPoint(p.site + offset, p.strength) for p in a.points),
        )
        for a in config.atoms
    )
    return SystemConfig(config.waveguide, atoms)


# ---------------------------------------------------------------------------
# JSON (de)serialisation, including builder shortcuts used by config files


_PAIR_PRESETS = {
    "separate_pair": Topology.SEPARATE,
    "braided_pair": Topology.BRAIDED,
    "nested_pair": Topology.NESTED,
}
_CHAIN_PRESETS = {
    "separate_chain": Topology.SEPARATE,
    "braided_chain": Topology.BRAIDED,
    "nested_chain": Topology.NESTED,
}


def config_to_dict(config: SystemConfig) -> dict:
    return {
        "waveguide": {
            "J": config.waveguide.hopping,
            "omega_c": config.waveguide.band_center,
        },
        "atoms": [
            {
                "delta": atom.detuning,
                "points": [{"site": p.site, "g": p.strength} for p in atom.points],
            }
            for atom in config.atoms
        ],
    }


def config_from_dict(data: dict) -> SystemConfig:
    """Build a config from its JSON form, explicit or via a builder shortcut.

    Shortcut form: ``{"preset": "braided_pair", "dn": 16, "dm": 8,
    "g": 1.0, "delta": 0.0}``; chains add ``"na"`` and the SSH chain
    ``"mu"``; the single atom uses ``{"preset": "single_atom", "nc": ...,
    "dn": ...}``.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("config must be a JSON object")
    if "preset" in data:
        name = data["preset"]
        g = float(data.get("g", 1.0))
        delta = float(data.get("delta", 0.0))
        hopping = float(data.get("J", 1.0))
        try:
            if name == "single_atom":
                return build_single_atom(
                    int(data["nc"]), int(data["dn"]), g, delta, hopping
                )
            if name in _PAIR_PRESETS:
                return build_two_atoms(
                    _PAIR_PRESETS[name],
                    int(data["dn"]),
                    int(data["dm"]),
                    g,
                    delta,
                    hopping,
                )
            if name in _CHAIN_PRESETS:
                return build_chain(
                    _CHAIN_PRESETS[name],
                    int(data["na"]),
                    int(data["dn"]),
                    int(data["dm"]),
                    g,
                    delta,
                    hopping,
                )
            if name == "ssh_chain":
                return build_ssh_chain(
                    int(data["na"]),
                    int(data["dn"]),
                    int(data["dm"]),
                    g,
                    float(data["mu"]),
                    delta,
                    hopping,
                )
        except KeyError as exc:
            raise ConfigurationError(
                f"preset {name!r} is missing field {exc.args[0]!r}"
            ) from exc
        raise ConfigurationError(f"unknown preset {name!r}")
    try:
        wg = data.get("waveguide", {})
        waveguide = WaveguideParams(
            hopping=float(wg.get("J", 1.0)),
            band_center=float(wg.get("omega_c", 0.0)),
        )
        atoms = tuple(
            AtomSpec(
                detuning=float(a.get("delta", 0.0)),
                points=tuple(
                    CouplingPoint(int(p["site"]), float(p["g"])) for p in a["points"]
                ),
            )
            for a in data["atoms"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed config: {exc}") from exc
    return SystemConfig(waveguide, atoms)
