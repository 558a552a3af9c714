"""Path enumeration and connection-graph maintenance.

Connections are traversed as undirected edges: src/dst record authoring
order, not direction. Besides path search this module maintains the closure
law (every entity carries a self-connection and every entity pair is joined
by at least one connection, silently if nothing real is known) and the
blocking and confirmation life cycle of individual connections.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import IntegrityError, StateError, ValidationError
from .model import (
    Connection,
    ConnectionKind,
    Scenario,
    connection_value,
)


@dataclass(frozen=True, slots=True)
class Path:
    """An entity sequence plus the connection chosen for each hop."""

    entities: tuple[str, ...]
    hops: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.entities:
            raise ValidationError("a path needs at least one entity")
        # A single-entity path is the trivial loop over one self-connection.
        expected = 1 if len(self.entities) == 1 else len(self.entities) - 1
        if len(self.hops) != expected:
            raise ValidationError("hop count must match the entity sequence")

    @property
    def hop_count(self) -> int:
        return len(self.hops)


def _best_connection(scenario: Scenario, candidates: list[Connection]) -> Connection:
    """Highest-valued candidate; earliest id wins ties.

    Candidates arrive in id order (scenario connections are normalized), so
    a strict comparison keeps the smallest id among equal values.
    """
    best = candidates[0]
    best_value = connection_value(best, scenario)
    for conn in candidates[1:]:
        value = connection_value(conn, scenario)
        if value > best_value:
            best, best_value = conn, value
    return best


def find_paths(
    scenario: Scenario,
    src: str,
    dst: str,
    max_hops: int,
    *,
    include_silent: bool = False,
) -> list[Path]:
    """All simple paths from src to dst using at most max_hops connections.

    Edges are undirected and blocked connections never participate. Silent
    connections join the graph only when include_silent is set;
    self-connections never extend a path between distinct entities. Each
    distinct entity sequence yields one Path, carrying for every hop the
    highest-valued eligible connection (ties to the smallest id). Results
    are ordered shortest first, then lexicographically by entity sequence.

    When src == dst the only admissible path is the trivial one over an
    unblocked self-connection, if the entity has one.
    """
    scenario.entity(src)
    scenario.entity(dst)
    if not isinstance(max_hops, int) or isinstance(max_hops, bool) or max_hops < 1:
        raise ValueError(f"max_hops must be a positive integer, got {max_hops!r}")

    if src == dst:
        loops = [
            c
            for c in scenario.connections
            if c.kind is ConnectionKind.SELF and c.src == src and not c.blocked
        ]
        if not loops:
            return []
        return [Path(entities=(src,), hops=(_best_connection(scenario, loops).id,))]

    eligible: dict[frozenset[str], list[Connection]] = {}
    neighbors: dict[str, set[str]] = {}
    for conn in scenario.connections:
        if conn.blocked or conn.kind is ConnectionKind.SELF:
            continue
        if conn.kind is ConnectionKind.SILENT and not include_silent:
            continue
        eligible.setdefault(conn.endpoints(), []).append(conn)
        neighbors.setdefault(conn.src, set()).add(conn.dst)
        neighbors.setdefault(conn.dst, set()).add(conn.src)

    sequences: list[tuple[str, ...]] = []
    trail: list[str] = [src]
    on_trail = {src}

    def walk(node: str) -> None:
        if node == dst:
            sequences.append(tuple(trail))
            return
        if len(trail) - 1 == max_hops:
            return
        for nxt in sorted(neighbors.get(node, ())):
            if nxt in on_trail:
                continue
            trail.append(nxt)
            on_trail.add(nxt)
            walk(nxt)
            trail.pop()
            on_trail.remove(nxt)

    walk(src)
    sequences.sort(key=lambda seq: (len(seq), seq))

    paths = []
    for seq in sequences:
        hops = tuple(
            _best_connection(scenario, eligible[frozenset((a, b))]).id
            for a, b in zip(seq, seq[1:])
        )
        paths.append(Path(entities=seq, hops=hops))
    return paths


def law_holds(scenario: Scenario) -> bool:
    """True when every entity has a self-connection and every pair is joined.

    Blocked connections still count: blocking suppresses a connection's
    value, it does not erase the connection.
    """
    with_self = {c.src for c in scenario.connections if c.kind is ConnectionKind.SELF}
    if any(e.id not in with_self for e in scenario.entities):
        return False
    joined = {c.endpoints() for c in scenario.connections if c.src != c.dst}
    ids = [e.id for e in scenario.entities]
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if frozenset((a, b)) not in joined:
                return False
    return True


def _fresh_id(base: str, used: set[str]) -> str:
    n = 0
    while f"{base}:{n}" in used:
        n += 1
    fresh = f"{base}:{n}"
    used.add(fresh)
    return fresh


def silent_closure(scenario: Scenario) -> Scenario:
    """Materialize the connection law by adding silent placeholders.

    Every entity without a self-connection gains one (polarity +1,
    magnitude 1) and every unjoined entity pair gains a silent connection
    (polarity -1, magnitude 1, endpoints in lexicographic order). Generated
    ids have the shape ``sc:<src>:<dst>:<n>``. The operation is idempotent:
    a scenario already satisfying the law is returned unchanged.
    """
    used = {c.id for c in scenario.connections}
    additions: list[Connection] = []

    with_self = {c.src for c in scenario.connections if c.kind is ConnectionKind.SELF}
    for entity in scenario.entities:
        if entity.id not in with_self:
            additions.append(
                Connection(
                    id=_fresh_id(f"sc:{entity.id}:{entity.id}", used),
                    src=entity.id,
                    dst=entity.id,
                    kind=ConnectionKind.SELF,
                    polarity=1,
                    magnitude=Fraction(1),
                )
            )

    joined = {c.endpoints() for c in scenario.connections if c.src != c.dst}
    ids = [e.id for e in scenario.entities]
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if frozenset((a, b)) not in joined:
                additions.append(
                    Connection(
                        id=_fresh_id(f"sc:{a}:{b}", used),
                        src=a,
                        dst=b,
                        kind=ConnectionKind.SILENT,
                        polarity=-1,
                        magnitude=Fraction(1),
                    )
                )

    if not additions:
        return scenario
    return replace(scenario, connections=scenario.connections + tuple(additions))


def _set_blocked(scenario: Scenario, connection_id: str, flag: bool) -> Scenario:
    conn = scenario.connection(connection_id)
    if conn.blocked == flag:
        return scenario
    updated = replace(conn, blocked=flag)
    connections = tuple(updated if c.id == connection_id else c for c in scenario.connections)
    return replace(scenario, connections=connections)


def block(scenario: Scenario, connection_id: str) -> Scenario:
    """Mark a connection blocked; its value becomes 0 until unblocked."""
    return _set_blocked(scenario, connection_id, True)


def unblock(scenario: Scenario, connection_id: str) -> Scenario:
    """Clear a connection's blocked mark."""
    return _set_blocked(scenario, connection_id, False)


def confirm_silent(scenario: Scenario, connection_id: str, observed_polarity: int) -> Scenario:
    """Confirm a silent connection by observation.

    The silent connection is kept and marked confirmed, and a real
    connection with the observed polarity and the same endpoints, magnitude,
    and time index is added under the id ``rc:<silent id>``. Confirming a
    non-silent or already confirmed connection is a state error.
    """
    conn = scenario.connection(connection_id)
    if conn.kind is not ConnectionKind.SILENT:
        raise StateError(f"connection {connection_id!r} is not silent")
    if conn.confirmed:
        raise StateError(f"silent connection {connection_id!r} is already confirmed")
    if observed_polarity not in (1, -1) or isinstance(observed_polarity, bool):
        raise ValidationError(f"observed polarity must be 1 or -1, got {observed_polarity!r}")
    real_id = f"rc:{connection_id}"
    if scenario.has_connection(real_id):
        raise IntegrityError(f"connection id already in use: {real_id!r}")
    confirmed = replace(conn, confirmed=True)
    real = Connection(
        id=real_id,
        src=conn.src,
        dst=conn.dst,
        kind=ConnectionKind.REAL,
        polarity=observed_polarity,
        magnitude=conn.magnitude,
        time_index=conn.time_index,
    )
    connections = tuple(confirmed if c.id == connection_id else c for c in scenario.connections)
    return replace(scenario, connections=connections + (real,))
