"""Core domain types and elementary valuations.

A scenario is a host-scoped signed multigraph: a set of entities, each
carrying a four-attribute state vector, joined by typed, signed, weighted
connections. Everything is immutable after construction and all numbers are
exact rationals (``fractions.Fraction``); binary floats are rejected at the
boundary so serialized values reproduce byte for byte.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property

from .errors import IntegrityError, ValidationError

MAGNITUDE_MIN = Fraction(1)
MAGNITUDE_MAX = Fraction(10)

DEFAULT_ATTRIBUTE = Fraction(3, 4)

Rational = Fraction


def to_rational(value: Fraction | int | str | decimal.Decimal) -> Fraction:
    """Coerce a value to an exact :class:`Fraction`.

    Accepts Fractions, ints, decimal/fraction strings ("0.75", "3/4") and
    ``decimal.Decimal``. Floats are rejected: they carry binary rounding
    error that would leak into canonical serialization.
    """
    if isinstance(value, bool):
        raise TypeError(f"expected a rational number, got bool {value!r}")
    if isinstance(value, (Fraction, int, decimal.Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(
            f"floats are inexact; pass a decimal string or Fraction instead of {value!r}"
        )
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


class EntityKind(str, Enum):
    KNOWN = "known"
    HIDDEN = "hidden"
    UNKNOWN = "unknown"


class ConnectionKind(str, Enum):
    REAL = "real"
    SILENT = "silent"
    SELF = "self"


class ScoringMode(str, Enum):
    RAW = "raw"
    IMPACT_WEIGHTED = "impact_weighted"


@dataclass(frozen=True, slots=True)
class AttributeVector:
    """The four entity attributes, each strictly inside (0, 1).

    The open interval is a hard invariant: an entity can be neither entirely
    absent nor perfectly stable, so 0 and 1 exactly are rejected.
    """

    existence: Fraction = DEFAULT_ATTRIBUTE
    inner_state: Fraction = DEFAULT_ATTRIBUTE
    external_state: Fraction = DEFAULT_ATTRIBUTE
    communication_state: Fraction = DEFAULT_ATTRIBUTE

    def __post_init__(self):
        for name in ("existence", "inner_state", "external_state", "communication_state"):
            value = to_rational(getattr(self, name))
            if not 0 < value < 1:
                raise ValidationError(
                    f"attribute out of open interval (0,1): {name}={value}"
                )
            object.__setattr__(self, name, value)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.existence, self.inner_state, self.external_state, self.communication_state)


@dataclass(frozen=True, slots=True)
class Entity:
    """A node: an identifier, a kind, and its attribute vector."""

    id: str
    kind: EntityKind
    attributes: AttributeVector = field(default_factory=AttributeVector)

    def __post_init__(self):
        object.__setattr__(self, "kind", EntityKind(self.kind))


@dataclass(frozen=True, slots=True)
class Connection:
    """A typed, signed, weighted edge between two entities.

    Parallel connections between the same pair are allowed; each connection
    is distinguished by its id. ``kind`` must be ``self`` exactly when
    ``src == dst``. ``confirmed`` is meaningful only for silent connections.
    """

    id: str
    src: str
    dst: str
    kind: ConnectionKind
    polarity: int
    magnitude: Fraction
    time_index: int = 0
    blocked: bool = False
    confirmed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", ConnectionKind(self.kind))
        object.__setattr__(self, "magnitude", to_rational(self.magnitude))

    def endpoints(self) -> frozenset[str]:
        return frozenset((self.src, self.dst))


@dataclass(frozen=True, slots=True)
class RosterRef:
    """Ideal-roster entry naming an existing connection by id."""

    ref: str


@dataclass(frozen=True, slots=True)
class RosterHypothetical:
    """Ideal-roster entry for a connection that does not exist in the scenario."""

    src: str
    dst: str
    magnitude: Fraction

    def __post_init__(self):
        object.__setattr__(self, "magnitude", to_rational(self.magnitude))


RosterEntry = RosterRef | RosterHypothetical


@dataclass(frozen=True)
class Scenario:
    """A host-scoped multigraph.

    The connection multiset is, by definition, everything affecting the host
    entity, so scoring sums the whole multiset rather than filtering by
    incidence. Entities and connections are stored sorted by id, which makes
    equal scenarios compare (and serialize) identically.
    """

    entities: tuple[Entity, ...]
    connections: tuple[Connection, ...]
    host: str
    ideal_roster: tuple[RosterEntry, ...] | None = None
    scoring_mode: ScoringMode = ScoringMode.RAW
    desired_connectivity: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "entities", tuple(sorted(self.entities, key=lambda e: e.id))
        )
        object.__setattr__(
            self, "connections", tuple(sorted(self.connections, key=lambda c: c.id))
        )
        if self.ideal_roster is not None:
            object.__setattr__(self, "ideal_roster", tuple(self.ideal_roster))
        object.__setattr__(self, "scoring_mode", ScoringMode(self.scoring_mode))
        if self.desired_connectivity is not None:
            object.__setattr__(
                self, "desired_connectivity", to_rational(self.desired_connectivity)
            )

    @cached_property
    def _entities_by_id(self) -> dict[str, Entity]:
        return {e.id: e for e in self.entities}

    @cached_property
    def _connections_by_id(self) -> dict[str, Connection]:
        return {c.id: c for c in self.connections}

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._entities_by_id[entity_id]
        except KeyError:
            raise IntegrityError(f"unknown entity id: {entity_id!r}") from None

    def connection(self, conn_id: str) -> Connection:
        try:
            return self._connections_by_id[conn_id]
        except KeyError:
            raise IntegrityError(f"unknown connection id: {conn_id!r}") from None

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._entities_by_id

    def has_connection(self, conn_id: str) -> bool:
        return conn_id in self._connections_by_id


@dataclass(frozen=True, slots=True)
class Violation:
    """One invariant breach, naming the offending id and field."""

    subject: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}.{self.field}: {self.message}"


def make_entity(
    entity_id: str,
    kind: EntityKind | str,
    attributes: AttributeVector | None = None,
) -> Entity:
    """Build an entity; omitted attributes default every field to 0.75."""
    if not entity_id:
        raise ValidationError("entity id must be nonempty")
    return Entity(
        id=entity_id,
        kind=EntityKind(kind),
        attributes=attributes if attributes is not None else AttributeVector(),
    )


def impact_factor(entity: Entity) -> Fraction:
    """Arithmetic mean of the four attribute values; strictly inside (0, 1)."""
    return sum(entity.attributes.as_tuple(), Fraction(0)) / 4


def connection_value(
    conn: Connection, scenario: Scenario, *, ignore_blocked: bool = False
) -> Fraction:
    """Signed contribution of one connection to the scenario score.

    A blocked connection contributes exactly 0 (unless ``ignore_blocked``,
    used by ideal/importance computations that treat blocked connections as
    unblocked). In raw mode the value is polarity x magnitude; in
    impact-weighted mode it is additionally scaled by the mean of both
    endpoints' impact factors, which keeps the weighted magnitude strictly
    below the raw one.
    """
    src = scenario.entity(conn.src)
    dst = scenario.entity(conn.dst)
    if conn.blocked and not ignore_blocked:
        return Fraction(0)
    value = conn.polarity * conn.magnitude
    if scenario.scoring_mode is ScoringMode.IMPACT_WEIGHTED:
        value *= (impact_factor(src) + impact_factor(dst)) / 2
    return value


def validate_scenario(scenario: Scenario) -> list[Violation]:
    """Report every invariant breach; an empty list means the scenario is valid."""
    violations: list[Violation] = []

    entity_ids: set[str] = set()
    for entity in scenario.entities:
        if not entity.id:
            violations.append(Violation("<entity>", "id", "entity id must be nonempty"))
            continue
        if entity.id in entity_ids:
            violations.append(
                Violation(entity.id, "id", "duplicate entity id")
            )
        entity_ids.add(entity.id)

    if not scenario.host:
        violations.append(Violation("<scenario>", "host", "host id must be nonempty"))
    elif scenario.host not in entity_ids:
        violations.append(
            Violation(scenario.host, "host", "host id does not name an entity")
        )

    conn_ids: set[str] = set()
    for conn in scenario.connections:
        subject = conn.id or "<connection>"
        if not conn.id:
            violations.append(Violation(subject, "id", "connection id must be nonempty"))
        elif conn.id in conn_ids:
            violations.append(Violation(conn.id, "id", "duplicate connection id"))
        conn_ids.add(conn.id)

        for which, endpoint in (("src", conn.src), ("dst", conn.dst)):
            if endpoint not in entity_ids:
                violations.append(
                    Violation(subject, which, f"endpoint {endpoint!r} is not an entity")
                )
        is_loop = conn.src == conn.dst
        if is_loop and conn.kind is not ConnectionKind.SELF:
            violations.append(
                Violation(subject, "kind", "connection with src = dst must have kind self")
            )
        if not is_loop and conn.kind is ConnectionKind.SELF:
            violations.append(
                Violation(subject, "kind", "kind self requires src = dst")
            )
        if conn.polarity not in (1, -1):
            violations.append(
                Violation(subject, "polarity", f"polarity must be +1 or -1, got {conn.polarity}")
            )
        if not MAGNITUDE_MIN <= conn.magnitude <= MAGNITUDE_MAX:
            violations.append(
                Violation(
                    subject,
                    "magnitude",
                    f"magnitude {conn.magnitude} outside [{MAGNITUDE_MIN}, {MAGNITUDE_MAX}]",
                )
            )
        if not isinstance(conn.time_index, int) or isinstance(conn.time_index, bool) or conn.time_index < 0:
            violations.append(
                Violation(subject, "time_index", "time_index must be a non-negative integer")
            )

    if scenario.ideal_roster is not None:
        for i, entry in enumerate(scenario.ideal_roster):
            subject = f"ideal_roster[{i}]"
            if isinstance(entry, RosterRef):
                if entry.ref not in conn_ids:
                    violations.append(
                        Violation(subject, "ref", f"no connection with id {entry.ref!r}")
                    )
            else:
                for which, endpoint in (("src", entry.src), ("dst", entry.dst)):
                    if endpoint not in entity_ids:
                        violations.append(
                            Violation(subject, which, f"endpoint {endpoint!r} is not an entity")
                        )
                if not MAGNITUDE_MIN <= entry.magnitude <= MAGNITUDE_MAX:
                    violations.append(
                        Violation(
                            subject,
                            "magnitude",
                            f"magnitude {entry.magnitude} outside [{MAGNITUDE_MIN}, {MAGNITUDE_MAX}]",
                        )
                    )

    return violations


def ensure_valid(scenario: Scenario) -> None:
    """Raise :class:`ValidationError` carrying all violations, if any."""
    violations = validate_scenario(scenario)
    if violations:
        summary = "; ".join(str(v) for v in violations[:3])
        if len(violations) > 3:
            summary += f"; and {len(violations) - 3} more"
        raise ValidationError(f"invalid scenario: {summary}", violations)


def with_connection(scenario: Scenario, conn: Connection) -> Scenario:
    """Return a scenario with ``conn`` appended; its id must be fresh."""
    if scenario.has_connection(conn.id):
        raise IntegrityError(f"connection id already in use: {conn.id!r}")
    return replace(scenario, connections=scenario.connections + (conn,))
