"""Shared test machinery: re-derivation oracles and scenario generators.

The oracles recompute quantities from raw dataclass fields without calling
the library's own valuation helpers, so a bug cannot hide on both sides of
an assertion. Generators come in two flavors: a seeded random.Random one for
the timed bulk checks and hypothesis strategies for property tests.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from conncalc import (
    AttributeVector,
    Connection,
    ConnectionKind,
    Entity,
    EntityKind,
    RosterHypothetical,
    RosterRef,
    Scenario,
    ScoringMode,
)


def oracle_impact(entity: Entity) -> Fraction:
    attrs = entity.attributes
    return (
        attrs.existence + attrs.inner_state + attrs.external_state + attrs.communication_state
    ) / 4


def oracle_value(conn: Connection, scenario: Scenario, *, ignore_blocked: bool = False) -> Fraction:
    """Connection value recomputed from first principles."""
    if conn.blocked and not ignore_blocked:
        return Fraction(0)
    value = Fraction(conn.polarity) * conn.magnitude
    if scenario.scoring_mode is ScoringMode.IMPACT_WEIGHTED:
        by_id = {e.id: e for e in scenario.entities}
        weight = (oracle_impact(by_id[conn.src]) + oracle_impact(by_id[conn.dst])) / 2
        value *= weight
    return value


def oracle_score(scenario: Scenario) -> Fraction:
    return sum((oracle_value(c, scenario) for c in scenario.connections), Fraction(0))


def oracle_ideal(scenario: Scenario) -> Fraction:
    by_id = {e.id: e for e in scenario.entities}
    if scenario.ideal_roster is None:
        return sum(
            (abs(oracle_value(c, scenario, ignore_blocked=True)) for c in scenario.connections),
            Fraction(0),
        )
    conns = {c.id: c for c in scenario.connections}
    total = Fraction(0)
    for entry in scenario.ideal_roster:
        if isinstance(entry, RosterRef):
            total += abs(oracle_value(conns[entry.ref], scenario, ignore_blocked=True))
        else:
            value = entry.magnitude
            if scenario.scoring_mode is ScoringMode.IMPACT_WEIGHTED:
                value *= (oracle_impact(by_id[entry.src]) + oracle_impact(by_id[entry.dst])) / 2
            total += abs(value)
    return total


def random_scenario(
    rng: random.Random,
    *,
    max_entities: int = 8,
    min_connections: int = 0,
    max_connections: int = 14,
    all_positive: bool = False,
    with_roster: bool = True,
) -> Scenario:
    """One pseudo-random valid scenario drawn from the given generator."""
    entity_count = rng.randint(1, max_entities)
    ids = [f"n{i:03d}" for i in range(entity_count)]
    entities = []
    for entity_id in ids:
        if rng.random() < 0.3:
            attrs = AttributeVector(
                existence=Fraction(rng.randint(1, 99), 100),
                inner_state=Fraction(rng.randint(1, 99), 100),
                external_state=Fraction(rng.randint(1, 99), 100),
                communication_state=Fraction(rng.randint(1, 99), 100),
            )
        else:
            attrs = AttributeVector()
        entities.append(
            Entity(id=entity_id, kind=rng.choice(list(EntityKind)), attributes=attrs)
        )

    connections = []
    for i in range(rng.randint(min_connections, max_connections)):
        src = rng.choice(ids)
        if entity_count == 1 or rng.random() < 0.15:
            dst, kind = src, ConnectionKind.SELF
        else:
            dst = rng.choice([x for x in ids if x != src])
            kind = rng.choice(
                (ConnectionKind.REAL, ConnectionKind.REAL, ConnectionKind.SILENT)
            )
        connections.append(
            Connection(
                id=f"c{i:03d}",
                src=src,
                dst=dst,
                kind=kind,
                polarity=1 if all_positive else rng.choice((1, -1)),
                magnitude=Fraction(rng.randint(10, 100), 10),
                time_index=rng.randint(0, 3) if rng.random() < 0.25 else 0,
                blocked=(not all_positive) and rng.random() < 0.15,
                confirmed=kind is ConnectionKind.SILENT and rng.random() < 0.25,
            )
        )

    roster = None
    if with_roster and rng.random() < 0.4:
        entries: list = [RosterRef(ref=c.id) for c in connections if rng.random() < 0.7]
        if entity_count >= 2 and rng.random() < 0.5:
            src, dst = rng.sample(ids, 2)
            entries.append(
                RosterHypothetical(src=src, dst=dst, magnitude=Fraction(rng.randint(10, 100), 10))
            )
        roster = tuple(entries)

    return Scenario(
        entities=tuple(entities),
        connections=tuple(connections),
        host=rng.choice(ids),
        ideal_roster=roster,
        scoring_mode=(
            ScoringMode.IMPACT_WEIGHTED if rng.random() < 0.3 else ScoringMode.RAW
        ),
        desired_connectivity=Fraction(rng.randint(1, 80)) if rng.random() < 0.5 else None,
    )


# hypothesis strategies ------------------------------------------------------

attribute_values = st.integers(min_value=1, max_value=99).map(lambda k: Fraction(k, 100))

attribute_vectors = st.builds(
    AttributeVector,
    existence=attribute_values,
    inner_state=attribute_values,
    external_state=attribute_values,
    communication_state=attribute_values,
)

magnitudes = st.integers(min_value=10, max_value=100).map(lambda k: Fraction(k, 10))

polarities = st.sampled_from((1, -1))

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=997)


@st.composite
def scenarios(
    draw,
    min_entities: int = 1,
    max_entities: int = 6,
    max_connections: int = 8,
    all_positive: bool = False,
    require_connection: bool = False,
    with_desired: bool | None = None,
    with_roster: bool = True,
):
    entity_count = draw(st.integers(min_entities, max_entities))
    ids = [f"n{i}" for i in range(entity_count)]
    entities = []
    for entity_id in ids:
        attrs = draw(st.one_of(st.just(AttributeVector()), attribute_vectors))
        entities.append(
            Entity(id=entity_id, kind=draw(st.sampled_from(EntityKind)), attributes=attrs)
        )

    connection_count = draw(
        st.integers(1 if require_connection else 0, max_connections)
    )
    connections = []
    for i in range(connection_count):
        src = draw(st.sampled_from(ids))
        if entity_count == 1 or draw(st.booleans()):
            others = [x for x in ids if x != src] or [src]
            dst = draw(st.sampled_from(others))
        else:
            dst = src
        if src == dst:
            kind = ConnectionKind.SELF
        else:
            kind = draw(st.sampled_from((ConnectionKind.REAL, ConnectionKind.SILENT)))
        connections.append(
            Connection(
                id=f"c{i}",
                src=src,
                dst=dst,
                kind=kind,
                polarity=1 if all_positive else draw(polarities),
                magnitude=draw(magnitudes),
                time_index=draw(st.integers(0, 3)),
                blocked=False if all_positive else draw(st.booleans()),
                confirmed=kind is ConnectionKind.SILENT and draw(st.booleans()),
            )
        )

    roster = None
    if with_roster and draw(st.booleans()):
        entries: list = [
            RosterRef(ref=c.id) for c in connections if draw(st.booleans())
        ]
        if entity_count >= 2 and draw(st.booleans()):
            pair = draw(st.permutations(ids))[:2]
            entries.append(
                RosterHypothetical(src=pair[0], dst=pair[1], magnitude=draw(magnitudes))
            )
        roster = tuple(entries)

    if with_desired is None:
        desired = draw(st.one_of(st.none(), st.integers(1, 80).map(Fraction)))
    elif with_desired:
        desired = draw(st.integers(1, 80).map(Fraction))
    else:
        desired = None

    return Scenario(
        entities=tuple(entities),
        connections=tuple(connections),
        host=draw(st.sampled_from(ids)),
        ideal_roster=roster,
        scoring_mode=draw(st.sampled_from(ScoringMode)),
        desired_connectivity=desired,
    )
