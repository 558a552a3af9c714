"""Domain types: construction, coercion, valuation, validation."""

from __future__ import annotations

import decimal
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conncalc import (
    AttributeVector,
    Connection,
    ConnectionKind,
    Entity,
    EntityKind,
    IntegrityError,
    RosterHypothetical,
    RosterRef,
    Scenario,
    ScoringMode,
    ValidationError,
    connection_value,
    ensure_valid,
    impact_factor,
    make_entity,
    to_rational,
    validate_scenario,
    with_connection,
)

from . import support


def scenario_of(*connections, entities=None, host="a", **kwargs) -> Scenario:
    if entities is None:
        ids = {host}
        for c in connections:
            ids.update((c.src, c.dst))
        entities = tuple(make_entity(i, EntityKind.KNOWN) for i in sorted(ids))
    return Scenario(entities=entities, connections=tuple(connections), host=host, **kwargs)


def conn(id, src, dst, *, kind=None, polarity=1, magnitude=2, **kwargs) -> Connection:
    if kind is None:
        kind = ConnectionKind.SELF if src == dst else ConnectionKind.REAL
    return Connection(
        id=id, src=src, dst=dst, kind=kind, polarity=polarity, magnitude=magnitude, **kwargs
    )


class TestToRational:
    def test_accepts_exact_forms(self):
        assert to_rational("0.75") == Fraction(3, 4)
        assert to_rational("3/4") == Fraction(3, 4)
        assert to_rational(7) == Fraction(7)
        assert to_rational(Fraction(1, 3)) == Fraction(1, 3)
        assert to_rational(decimal.Decimal("12.5")) == Fraction(25, 2)

    def test_rejects_floats(self):
        with pytest.raises(TypeError, match="inexact"):
            to_rational(0.75)

    def test_rejects_bools(self):
        with pytest.raises(TypeError):
            to_rational(True)

    def test_rejects_garbage_strings(self):
        with pytest.raises(ValueError):
            to_rational("seven")
        with pytest.raises(ValueError):
            to_rational("1/0")


class TestAttributeVector:
    def test_defaults(self):
        vec = AttributeVector()
        assert vec.as_tuple() == (Fraction(3, 4),) * 4

    def test_coerces_strings(self):
        vec = AttributeVector(existence="0.5")
        assert vec.existence == Fraction(1, 2)

    @pytest.mark.parametrize("bad", [0, 1, "1.5", "-0.1"])
    def test_rejects_closed_endpoints_and_outside(self, bad):
        with pytest.raises(ValidationError, match="open interval"):
            AttributeVector(inner_state=bad)

    def test_rejects_float(self):
        with pytest.raises(TypeError):
            AttributeVector(existence=0.5)

    @given(support.attribute_vectors)
    def test_impact_factor_is_the_mean_and_stays_inside_the_interval(self, vec):
        entity = Entity(id="x", kind=EntityKind.KNOWN, attributes=vec)
        value = impact_factor(entity)
        assert value == sum(vec.as_tuple(), Fraction(0)) / 4
        assert 0 < value < 1


class TestEntityAndConnection:
    def test_entity_coerces_kind_string(self):
        assert Entity(id="x", kind="hidden").kind is EntityKind.HIDDEN

    def test_entity_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            Entity(id="x", kind="ghost")

    def test_connection_coerces_kind_and_magnitude(self):
        c = Connection(id="c", src="a", dst="b", kind="real", polarity=1, magnitude="2.5")
        assert c.kind is ConnectionKind.REAL
        assert c.magnitude == Fraction(5, 2)

    def test_endpoints_are_unordered(self):
        c = conn("c", "a", "b")
        assert c.endpoints() == frozenset(("a", "b"))

    def test_make_entity_defaults_and_empty_id(self):
        assert make_entity("x", "known").attributes == AttributeVector()
        with pytest.raises(ValidationError):
            make_entity("", "known")


class TestScenarioContainer:
    def test_sorts_entities_and_connections_by_id(self):
        s = Scenario(
            entities=(make_entity("b", "known"), make_entity("a", "known")),
            connections=(conn("z", "a", "a"), conn("m", "a", "b")),
            host="a",
        )
        assert [e.id for e in s.entities] == ["a", "b"]
        assert [c.id for c in s.connections] == ["m", "z"]

    def test_lookup_and_missing_ids(self):
        s = scenario_of(conn("c", "a", "a"))
        assert s.entity("a").id == "a"
        assert s.connection("c").id == "c"
        assert s.has_entity("a") and not s.has_entity("zz")
        assert s.has_connection("c") and not s.has_connection("zz")
        with pytest.raises(IntegrityError, match="unknown entity"):
            s.entity("zz")
        with pytest.raises(IntegrityError, match="unknown connection"):
            s.connection("zz")

    def test_with_connection_appends_and_rejects_duplicates(self):
        s = scenario_of(conn("c", "a", "a"))
        grown = with_connection(s, conn("d", "a", "a", polarity=-1))
        assert [c.id for c in grown.connections] == ["c", "d"]
        assert s.has_connection("c") and not s.has_connection("d")
        with pytest.raises(IntegrityError, match="already in use"):
            with_connection(grown, conn("c", "a", "a"))

    def test_desired_connectivity_is_coerced(self):
        s = scenario_of(conn("c", "a", "a"), desired_connectivity="12.5")
        assert s.desired_connectivity == Fraction(25, 2)


class TestConnectionValue:
    def test_raw_value_is_signed_magnitude(self):
        s = scenario_of(conn("c", "a", "b", polarity=-1, magnitude=7))
        assert connection_value(s.connection("c"), s) == Fraction(-7)

    def test_blocked_contributes_zero_unless_ignored(self):
        s = scenario_of(conn("c", "a", "b", magnitude=7, blocked=True))
        c = s.connection("c")
        assert connection_value(c, s) == 0
        assert connection_value(c, s, ignore_blocked=True) == Fraction(7)

    def test_impact_weighting_scales_by_endpoint_means(self):
        quarter = AttributeVector(*(Fraction(1, 4),) * 4)
        entities = (
            Entity(id="a", kind=EntityKind.KNOWN, attributes=quarter),
            Entity(id="b", kind=EntityKind.KNOWN),
        )
        s = Scenario(
            entities=entities,
            connections=(conn("c", "a", "b", magnitude=8),),
            host="a",
            scoring_mode=ScoringMode.IMPACT_WEIGHTED,
        )
        # mean of impacts: (1/4 + 3/4) / 2 = 1/2
        assert connection_value(s.connection("c"), s) == Fraction(4)

    def test_unknown_endpoint_is_an_integrity_error_even_when_blocked(self):
        s = scenario_of(conn("k", "a", "a"))
        stray = conn("x", "a", "zz", blocked=True)
        with pytest.raises(IntegrityError):
            connection_value(stray, s)

    @given(support.scenarios())
    def test_matches_the_referee_summation_oracle(self, s):
        for c in s.connections:
            assert connection_value(c, s) == support.oracle_value(c, s)
            assert connection_value(c, s, ignore_blocked=True) == support.oracle_value(
                c, s, ignore_blocked=True
            )


class TestValidation:
    def test_generated_scenarios_are_valid(self):
        import random

        rng = random.Random(7)
        for _ in range(25):
            assert validate_scenario(support.random_scenario(rng)) == []

    def test_unknown_host(self):
        s = scenario_of(conn("c", "a", "a"))
        bad = Scenario(entities=s.entities, connections=s.connections, host="zz")
        assert any(v.field == "host" for v in validate_scenario(bad))

    def test_empty_host(self):
        s = scenario_of(conn("c", "a", "a"))
        bad = Scenario(entities=s.entities, connections=s.connections, host="")
        assert any(v.field == "host" for v in validate_scenario(bad))

    def test_duplicate_entity_ids(self):
        bad = Scenario(
            entities=(make_entity("a", "known"), make_entity("a", "hidden")),
            connections=(),
            host="a",
        )
        assert any(v.field == "id" and v.subject == "a" for v in validate_scenario(bad))

    def test_duplicate_connection_ids(self):
        bad = scenario_of(conn("c", "a", "b"), conn("c", "b", "a"))
        assert any(
            v.field == "id" and "duplicate connection" in v.message
            for v in validate_scenario(bad)
        )

    def test_unknown_endpoints(self):
        s = scenario_of(conn("k", "a", "a"))
        bad = Scenario(
            entities=s.entities,
            connections=s.connections + (conn("c", "a", "zz"),),
            host="a",
        )
        assert any(v.field == "dst" for v in validate_scenario(bad))

    def test_loop_kind_mismatch_both_directions(self):
        loop_not_self = scenario_of(conn("c", "a", "a", kind=ConnectionKind.REAL))
        assert any(v.field == "kind" for v in validate_scenario(loop_not_self))
        self_not_loop = scenario_of(conn("c", "a", "b", kind=ConnectionKind.SELF))
        assert any(v.field == "kind" for v in validate_scenario(self_not_loop))

    def test_polarity_must_be_unit(self):
        bad = scenario_of(conn("c", "a", "b", polarity=2))
        assert any(v.field == "polarity" for v in validate_scenario(bad))

    @pytest.mark.parametrize("magnitude,ok", [(1, True), (10, True), ("0.5", False), (11, False)])
    def test_magnitude_bounds_are_inclusive(self, magnitude, ok):
        s = scenario_of(conn("c", "a", "b", magnitude=magnitude))
        violations = [v for v in validate_scenario(s) if v.field == "magnitude"]
        assert (violations == []) is ok
        if not ok:
            assert "[1, 10]" in violations[0].message
            assert violations[0].subject == "c"

    def test_time_index_must_be_a_non_negative_int(self):
        bad = scenario_of(conn("c", "a", "b", time_index=-1))
        assert any(v.field == "time_index" for v in validate_scenario(bad))
        disguised = scenario_of(conn("c", "a", "b", time_index=True))
        assert any(v.field == "time_index" for v in validate_scenario(disguised))

    def test_roster_ref_must_exist(self):
        s = scenario_of(conn("c", "a", "b"), ideal_roster=(RosterRef(ref="nope"),))
        assert any(v.field == "ref" for v in validate_scenario(s))

    def test_roster_hypothetical_endpoints_and_magnitude(self):
        s = scenario_of(
            conn("c", "a", "b"),
            ideal_roster=(RosterHypothetical(src="a", dst="zz", magnitude=99),),
        )
        fields = {v.field for v in validate_scenario(s)}
        assert "dst" in fields and "magnitude" in fields

    def test_ensure_valid_summarizes_and_carries_all_violations(self):
        bad = scenario_of(
            conn("c1", "a", "b", polarity=3, magnitude=0),
            conn("c2", "a", "b", polarity=0, magnitude=11),
            conn("c3", "a", "a", kind=ConnectionKind.REAL),
        )
        with pytest.raises(ValidationError) as excinfo:
            ensure_valid(bad)
        err = excinfo.value
        assert "and" in str(err) and "more" in str(err)
        assert len(err.violations) >= 4

    def test_ensure_valid_passes_silently_on_valid_input(self):
        ensure_valid(scenario_of(conn("c", "a", "b")))
