"""Aggregate scoring and quality metrics over scenarios.

The central quantity is the connectivity score: the signed sum of every
connection's value in the host's scope. Dividing the actual score by a
desired (or ideal) score and scaling by 100 yields a quality percentage,
which is banded: below 50% failing, 50-75% satisfactory, above 75% high.
All arithmetic is exact rational arithmetic; nothing is rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

from .errors import ComputationError, ConfigurationError, StateError
from .model import (
    Connection,
    ConnectionKind,
    EntityKind,
    RosterRef,
    Scenario,
    ScoringMode,
    connection_value,
    ensure_valid,
    impact_factor,
    to_rational,
)


class Band(str, Enum):
    FAILING = "failing"
    SATISFACTORY = "satisfactory"
    HIGH = "high"

    @property
    def rank(self) -> int:
        """Position in the total order failing < satisfactory < high."""
        return _BAND_RANK[self]


_BAND_RANK = {Band.FAILING: 0, Band.SATISFACTORY: 1, Band.HIGH: 2}


class ConfusionCause(str, Enum):
    MISSING_ENTITY_INFO = "missing_entity_info"
    MISSING_PATH_INFO = "missing_path_info"
    SELF_CONFLICT = "self_conflict"


@dataclass(frozen=True, slots=True)
class ConnectivityReport:
    """Score, ideal, their ratio as a percentage, and the quality band."""

    score: Fraction
    ideal: Fraction
    efficiency_percent: Fraction
    band: Band
    mode: ScoringMode


@dataclass(frozen=True, slots=True)
class ConfusionReport:
    """Confusion assessment: the score z, quality vs. desired, and causes.

    ``confused`` is false exactly when z > 0 and quality > 50%.
    """

    z: Fraction
    quality_percent: Fraction
    confused: bool
    causes: tuple[ConfusionCause, ...]


def connectivity_score(scenario: Scenario) -> Fraction:
    """Signed sum of all connection values; blocked connections contribute 0."""
    ensure_valid(scenario)
    return sum((connection_value(c, scenario) for c in scenario.connections), Fraction(0))


def ideal_connectivity(scenario: Scenario) -> Fraction:
    """Score the scenario would reach if every roster connection helped fully.

    Sums the absolute connection value over the ideal roster, treating
    blocked connections as unblocked. Without an explicit roster, the
    scenario's own connection multiset is the roster. Validity is the
    caller's precondition; a roster entry naming a missing connection or
    entity surfaces as an integrity error.
    """
    if scenario.ideal_roster is None:
        return sum(
            (abs(connection_value(c, scenario, ignore_blocked=True)) for c in scenario.connections),
            Fraction(0),
        )
    total = Fraction(0)
    for entry in scenario.ideal_roster:
        if isinstance(entry, RosterRef):
            conn = scenario.connection(entry.ref)
            total += abs(connection_value(conn, scenario, ignore_blocked=True))
        else:
            value = entry.magnitude
            if scenario.scoring_mode is ScoringMode.IMPACT_WEIGHTED:
                src = scenario.entity(entry.src)
                dst = scenario.entity(entry.dst)
                value *= (impact_factor(src) + impact_factor(dst)) / 2
            total += abs(value)
    return total


def quality(actual, desired) -> Fraction:
    """100 x actual / desired, exact; the sign is preserved."""
    actual = to_rational(actual)
    desired = to_rational(desired)
    if desired == 0:
        raise ComputationError("desired connectivity is zero; the quality ratio is undefined")
    return 100 * actual / desired


def classify_quality(percent) -> Band:
    """Band a quality percentage; both band boundaries count as satisfactory."""
    percent = to_rational(percent)
    if percent < 50:
        return Band.FAILING
    if percent <= 75:
        return Band.SATISFACTORY
    return Band.HIGH


def efficiency(scenario: Scenario) -> ConnectivityReport:
    """Full report: score, ideal, efficiency percentage, and band."""
    score = connectivity_score(scenario)
    ideal = ideal_connectivity(scenario)
    if ideal == 0:
        raise ComputationError("ideal connectivity is zero; efficiency is undefined")
    percent = quality(score, ideal)
    return ConnectivityReport(
        score=score,
        ideal=ideal,
        efficiency_percent=percent,
        band=classify_quality(percent),
        mode=scenario.scoring_mode,
    )


def _real_component_index(scenario: Scenario) -> dict[str, int]:
    """Connected-component index over unblocked real connections."""
    index = {e.id: i for i, e in enumerate(scenario.entities)}
    parent = {i: i for i in index.values()}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i
    for conn in scenario.connections:
        if conn.kind is ConnectionKind.REAL and not conn.blocked:
            a, b = find(index[conn.src]), find(index[conn.dst])
            if a != b:
                parent[a] = b
    return {eid: find(i) for eid, i in index.items()}


def detect_confusion(scenario: Scenario) -> ConfusionReport:
    """Assess whether the host's scope is in a state of confusion.

    z is the connectivity score and quality is measured against the
    scenario's configured desired connectivity. Causes collected:

    * ``missing_entity_info``: some connection touches a hidden or unknown
      entity.
    * ``missing_path_info``: some non-self connection joins entities with no
      unblocked real path between them.
    * ``self_conflict``: a self-connection's magnitude differs from the
      magnitude of some non-self connection.
    """
    ensure_valid(scenario)
    if scenario.desired_connectivity is None:
        raise ConfigurationError(
            "desired_connectivity is not set; confusion detection needs a quality denominator"
        )
    z = connectivity_score(scenario)
    quality_percent = quality(z, scenario.desired_connectivity)

    causes: list[ConfusionCause] = []
    unclear = (EntityKind.HIDDEN, EntityKind.UNKNOWN)
    if any(
        scenario.entity(c.src).kind in unclear or scenario.entity(c.dst).kind in unclear
        for c in scenario.connections
    ):
        causes.append(ConfusionCause.MISSING_ENTITY_INFO)

    component = _real_component_index(scenario)
    if any(
        c.kind is not ConnectionKind.SELF and component[c.src] != component[c.dst]
        for c in scenario.connections
    ):
        causes.append(ConfusionCause.MISSING_PATH_INFO)

    self_mags = {c.magnitude for c in scenario.connections if c.kind is ConnectionKind.SELF}
    other_mags = {c.magnitude for c in scenario.connections if c.kind is not ConnectionKind.SELF}
    if any(s != o for s in self_mags for o in other_mags):
        causes.append(ConfusionCause.SELF_CONFLICT)

    confused = not (z > 0 and quality_percent > 50)
    return ConfusionReport(
        z=z, quality_percent=quality_percent, confused=confused, causes=tuple(causes)
    )


def resolve_self_conflict(scenario: Scenario) -> Scenario:
    """Set the polarity of conflicted host self-connections to -1.

    A host self-connection conflicts when its magnitude differs from the
    mean magnitude of the scenario's non-self connections. Self-connections
    that do not conflict keep their authored polarity, so an explicitly
    negative self-connection stays negative. With no non-self connections
    there is no comparator and the scenario is returned unchanged.
    """
    host_selfs = [
        c
        for c in scenario.connections
        if c.kind is ConnectionKind.SELF and c.src == scenario.host
    ]
    if not host_selfs:
        raise StateError(
            "host has no self-connection; apply silent_closure to materialize one"
        )
    non_self = [c for c in scenario.connections if c.kind is not ConnectionKind.SELF]
    if not non_self:
        return scenario
    mean_magnitude = sum((c.magnitude for c in non_self), Fraction(0)) / len(non_self)
    adjusted = tuple(
        replace(c, polarity=-1)
        if c.kind is ConnectionKind.SELF and c.src == scenario.host and c.magnitude != mean_magnitude
        else c
        for c in scenario.connections
    )
    return replace(scenario, connections=adjusted)


def _hop_candidates(scenario: Scenario, a: str, b: str) -> list[Connection]:
    """Unblocked connections joining the unordered pair {a, b}."""
    pair = frozenset((a, b))
    return [c for c in scenario.connections if not c.blocked and c.endpoints() == pair]


def _check_path_args(scenario: Scenario, path) -> list[str]:
    path = list(path)
    if len(path) < 2:
        raise ValueError("path must contain at least two entities")
    for entity_id in path:
        scenario.entity(entity_id)
    return path


def distance_sum(scenario: Scenario, path) -> Fraction | None:
    """Hop-wise sum of the strongest connection value along an entity path.

    Each consecutive pair contributes the maximum connection value among the
    unblocked connections joining it in either direction (ties broken by
    connection id). A pair with no unblocked connection makes the whole path
    non-viable, reported as None. A numeric result that is not > 0 also
    marks the interaction non-viable, but is reported as computed.
    """
    path = _check_path_args(scenario, path)
    total = Fraction(0)
    for a, b in zip(path, path[1:]):
        candidates = _hop_candidates(scenario, a, b)
        if not candidates:
            return None
        total += max(connection_value(c, scenario) for c in candidates)
    return total


def path_viability(scenario: Scenario, path) -> Fraction:
    """Impact-factor product along a path; 0 when an obstacle severs it.

    Multiplies the impact factor of every entity after the first. Any hop
    whose pair has only blocked or absent connections annihilates the result
    to 0. Because every impact factor is strictly below 1, the product is
    always in [0, 1) and strictly decreases as the path grows.
    """
    path = _check_path_args(scenario, path)
    product = Fraction(1)
    for a, b in zip(path, path[1:]):
        if not _hop_candidates(scenario, a, b):
            return Fraction(0)
        product *= impact_factor(scenario.entity(b))
    return product
