import pytest
from hypothesis import given, strategies as st

from hatlab import (
    OMEGA,
    ColorSpace,
    EvaluationRule,
    ZeroSize,
    as_assignment,
    at_least,
    build_canonical_instance,
    custom_instance,
    fewer_incorrect_than,
    hbsf,
    hnsa,
    hnsf,
    instance_from_json,
    instance_to_json,
    validate_instance,
)


class TestCanonicalConstructors:
    def test_hnsa_two_players(self):
        inst = hnsa(2, 2, at_least(1))
        assert inst.players == (0, 1)
        assert inst.sight == {(0, 1), (1, 0)}
        assert inst.hearing == frozenset()
        assert inst.askings == inst.players
        assert inst.label_of(1) == 1

    def test_hnsf_sight_is_forward(self):
        inst = hnsf(3, 2, at_least(1))
        assert inst.seen_by(0) == (1, 2)
        assert inst.seen_by(1) == (2,)
        assert inst.seen_by(2) == ()
        assert inst.hearing == frozenset()

    def test_hbsf_front_and_hearing(self):
        inst = hbsf(3, 2, fewer_incorrect_than(2))
        assert inst.players == (-1, 0, 1)
        assert inst.seen_by(-1) == (0, 1)
        assert inst.heard_at(-1) == ()
        assert inst.seen_by(1) == ()
        assert inst.heard_at(1) == (-1, 0)

    def test_zero_sizes_rejected(self):
        with pytest.raises(ZeroSize):
            build_canonical_instance("hnsa", 0, 2, at_least(1))
        with pytest.raises(ZeroSize):
            build_canonical_instance("hbsf", 3, 0, at_least(1))
        with pytest.raises(ValueError):
            build_canonical_instance("nope", 2, 2, at_least(1))

    @pytest.mark.parametrize("kind", ["hnsa", "hnsf", "hbsf"])
    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_relations_avoid_the_diagonal(self, kind, m):
        inst = build_canonical_instance(kind, m, 3, at_least(1))
        assert all(a != b for a, b in inst.sight)
        assert all(a != b for a, b in inst.hearing)

    @pytest.mark.parametrize("kind", ["hnsf", "hbsf"])
    def test_line_sight_total_and_transitive(self, kind):
        inst = build_canonical_instance(kind, 5, 2, at_least(1))
        order = {m: i for i, m in enumerate(inst.players)}
        for x in inst.players:
            for y in inst.players:
                if x != y:
                    # y sees x exactly when x stands later in the line
                    assert ((x, y) in inst.sight) == (order[x] > order[y])
        for x, y in inst.sight:
            for z, w in inst.sight:
                if w == x:
                    assert (z, y) in inst.sight


class TestValidation:
    def test_canonical_is_clean(self):
        report = validate_instance(hnsa(3, 2, at_least(1)))
        assert report.valid and not report.warnings

    def test_hearing_cycle_witnessed(self):
        inst = custom_instance(2, 2, sight=(), rule=at_least(1), hearing=[(0, 1), (1, 0)])
        report = validate_instance(inst)
        assert not report.valid
        assert report.hearing_cycle is not None
        assert sorted(report.hearing_cycle) == [0, 1]

    def test_self_sight_is_a_warning_not_an_error(self):
        inst = custom_instance(2, 2, sight=[(0, 0)], rule=at_least(1))
        report = validate_instance(inst)
        assert report.valid
        assert any("sees its own hat" in w for w in report.warnings)

    def test_labeling_gap_reported(self):
        inst = custom_instance(2, 2, sight=(), rule=at_least(1), askings=(0, 1), labeling=(0,))
        report = validate_instance(inst)
        assert any("labeling covers" in e for e in report.errors)

    def test_unknown_player_in_labeling(self):
        inst = custom_instance(2, 2, sight=(), rule=at_least(1), labeling=(0, 7))
        assert not validate_instance(inst).valid

    def test_relations_must_stay_inside_the_instance(self):
        inst = custom_instance(2, 2, sight=[(5, 0)], rule=at_least(1))
        assert not validate_instance(inst).valid

    def test_valid_iff_play_terminates(self):
        import random

        from hatlab import CyclicHearing, constant, run_game

        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(1, 5)
            hearing = [
                (a, b)
                for a in range(n)
                for b in range(n)
                if a != b and rng.random() < 0.4
            ]
            inst = custom_instance(n, 2, sight=(), rule=at_least(0), hearing=hearing)
            ok = validate_instance(inst).valid
            try:
                run_game(inst, constant(0), [0] * n)
                ran = True
            except CyclicHearing:
                ran = False
            assert ok == ran


class TestRules:
    def test_omega_only_for_fewer_incorrect(self):
        fewer_incorrect_than(OMEGA)
        with pytest.raises(ValueError):
            at_least(OMEGA)

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            at_least(-1)

    def test_json_round_trip(self):
        for rule in (at_least(2), fewer_incorrect_than(1), fewer_incorrect_than(OMEGA)):
            assert EvaluationRule.from_json(rule.to_json()) == rule
        assert fewer_incorrect_than(OMEGA).to_json() == {
            "kind": "fewer_incorrect",
            "threshold": "omega",
        }


class TestColorSpace:
    def test_bounds(self):
        cs = ColorSpace(3)
        assert list(cs) == [0, 1, 2]
        assert 2 in cs and 3 not in cs and -1 not in cs and True not in cs
        with pytest.raises(ZeroSize):
            ColorSpace(0)


class TestAssignments:
    def test_sequence_and_mapping_forms_agree(self):
        inst = hbsf(3, 2, fewer_incorrect_than(2))
        assert as_assignment(inst, (1, 0, 1)) == {-1: 1, 0: 0, 1: 1}
        assert as_assignment(inst, {-1: 1, 0: 0, 1: 1}) == {-1: 1, 0: 0, 1: 1}

    def test_bad_assignments_rejected(self):
        inst = hnsa(2, 2, at_least(1))
        with pytest.raises(ValueError):
            as_assignment(inst, (0,))
        with pytest.raises(ValueError):
            as_assignment(inst, (0, 2))
        with pytest.raises(ValueError):
            as_assignment(inst, {0: 0, 1: 0, 9: 0})


class TestJson:
    @pytest.mark.parametrize(
        "inst",
        [
            hnsa(3, 2, at_least(1)),
            hnsf(4, 3, at_least(2)),
            hbsf(3, 2, fewer_incorrect_than(OMEGA)),
            custom_instance(
                3,
                2,
                sight=[(1, 0), (2, 0)],
                rule=at_least(1),
                hearing=[(0, 1)],
                labeling=(0, 1, 2),
            ),
        ],
    )
    def test_round_trip_is_identity(self, inst):
        data = instance_to_json(inst)
        again = instance_from_json(data)
        assert again == inst
        assert instance_to_json(again) == data

    def test_canonical_descriptor_omits_relations(self):
        data = instance_to_json(hbsf(4, 2, fewer_incorrect_than(2)))
        assert set(data) == {"kind", "players", "colors", "rule"}

    def test_custom_descriptor_keeps_relations(self):
        inst = custom_instance(2, 2, sight=[(1, 0)], rule=at_least(1))
        data = instance_to_json(inst)
        assert data["sight"] == [[1, 0]]
        assert data["labeling"] == [0, 1]


@given(st.integers(min_value=0, max_value=20), st.integers(min_value=0, max_value=20))
def test_rule_kinds_disagree_only_through_counts(correct, incorrect):
    from hatlab import evaluate

    assert evaluate(at_least(0), correct, incorrect)
    assert evaluate(fewer_incorrect_than(OMEGA), correct, incorrect)
    assert evaluate(at_least(correct), correct, incorrect)
    assert not evaluate(at_least(correct + 1), correct, incorrect)
    assert evaluate(fewer_incorrect_than(incorrect + 1), correct, incorrect)
    assert not evaluate(fewer_incorrect_than(incorrect), correct, incorrect)
