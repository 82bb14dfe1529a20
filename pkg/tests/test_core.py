from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choquet_tower.core import (Act, Capacity, DuplicateLabelError,
                                EmptySpaceError, EndpointError, FiniteSpace,
                                MonotonicityError, NormalizationError,
                                PointMap, SpaceMismatchError,
                                TooManyPointsError, additive_capacity,
                                distort, identity_map, indicator, is_additive,
                                make_space, precompose_act, pushforward,
                                validate_capacity)


def thirds(space):
    return additive_capacity(space, [Fraction(1, 3)] * 3)


def full_table(space, values_by_labels):
    return {space.mask(labels): v for labels, v in values_by_labels.items()}


class TestMakeSpace:
    def test_powerset_size(self):
        space = make_space(["R", "B", "Y"])
        assert len(list(space.all_masks())) == 8

    def test_empty_rejected(self):
        with pytest.raises(EmptySpaceError):
            make_space([])

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateLabelError):
            make_space(["a", "a"])

    def test_cap_at_63(self):
        with pytest.raises(TooManyPointsError):
            make_space([f"p{i}" for i in range(64)])
        make_space([f"p{i}" for i in range(63)])


class TestIndicator:
    def test_empty_and_full(self):
        space = make_space(["R", "B", "Y"])
        assert indicator(space, space.empty).values == (0, 0, 0)
        assert indicator(space, space.full).values == (1, 1, 1)

    def test_single_point(self):
        space = make_space(["R", "B", "Y"])
        act = indicator(space, space.subset(["R"]))
        assert act.at("B") == 0 and act.at("R") == 1

    def test_foreign_subset(self):
        space = make_space(["R", "B", "Y"])
        other = make_space(["a", "b"])
        with pytest.raises(SpaceMismatchError):
            indicator(space, other.subset(["a"]))


class TestPrecompose:
    def test_identity(self):
        space = make_space(["x", "y"])
        f = Act(space, (Fraction(2), Fraction(-1)))
        assert precompose_act(f, identity_map(space)) == f

    def test_constant_map(self):
        dom = make_space(["a", "b", "c"])
        cod = make_space(["x", "y"])
        h = PointMap(dom, cod, {p: "y" for p in dom.points})
        f = Act(cod, (Fraction(5), Fraction(7)))
        assert precompose_act(f, h).values == (7, 7, 7)

    def test_indicator_pulls_back_to_preimage(self):
        dom = make_space(["a", "b", "c"])
        cod = make_space(["x", "y"])
        h = PointMap(dom, cod, {"a": "x", "b": "y", "c": "x"})
        pulled = precompose_act(indicator(cod, cod.subset(["x"])), h)
        assert pulled == indicator(dom, dom.subset_of_mask(h.preimage_mask(
            cod.mask(["x"]))))
        assert pulled.values == (1, 0, 1)

    def test_partial_map_rejected(self):
        dom = make_space(["a", "b"])
        cod = make_space(["x"])
        with pytest.raises(SpaceMismatchError):
            PointMap(dom, cod, {"a": "x"})


class TestValidateCapacity:
    def test_additive_thirds(self):
        space = make_space(["A1", "A2", "A3"])
        u = validate_capacity(space, {p: Fraction(1, 3) for p in space.points},
                              singletons_additive=True)
        assert u.is_additive
        assert u(space.subset(["A1", "A2"])) == Fraction(2, 3)

    def test_bad_normalization(self):
        space = make_space(["a", "b"])
        table = full_table(space, {(): 0, ("a",): Fraction(1, 2),
                                   ("b",): Fraction(1, 2),
                                   ("a", "b"): Fraction(9, 10)})
        with pytest.raises(NormalizationError):
            validate_capacity(space, table)

    def test_monotonicity_witness(self):
        space = make_space(["a", "b", "c"])
        table = {mask: Fraction(1) for mask in space.all_masks()}
        table[0] = Fraction(0)
        table[space.mask(["a"])] = Fraction(6, 10)
        table[space.mask(["a", "b"])] = Fraction(5, 10)
        with pytest.raises(MonotonicityError) as err:
            validate_capacity(space, table)
        assert err.value.witness == (space.mask(["a"]), space.mask(["a", "b"]))

    def test_incomplete_table_rejected(self):
        space = make_space(["a", "b"])
        with pytest.raises(SpaceMismatchError):
            validate_capacity(space, {0: 0, 3: 1})


class TestDistort:
    def test_identity_distortion(self):
        space = make_space(["a", "b", "c"])
        u = thirds(space)
        assert distort(u, lambda t: t).equals(u, tol=0.0)

    def test_square_on_two_points(self):
        space = make_space(["a", "b"])
        u = additive_capacity(space, [Fraction(1, 2), Fraction(1, 2)])
        v = distort(u, lambda t: t * t)
        assert v(space.subset(["a"])) == Fraction(1, 4)

    def test_endpoint_violation(self):
        space = make_space(["a", "b"])
        u = additive_capacity(space, [Fraction(1, 2), Fraction(1, 2)])
        with pytest.raises(EndpointError):
            distort(u, lambda t: t / 2 + Fraction(1, 10))

    def test_square_breaks_additivity(self):
        space = make_space(["a", "b", "c"])
        v = distort(thirds(space), lambda t: t * t)
        assert not is_additive(v)

    def test_pointwise_monotone_in_distortion(self):
        space = make_space(["a", "b", "c"])
        u = thirds(space)
        lo = distort(u, lambda t: t * t)
        hi = distort(u, lambda t: t)
        assert all(lo.value(m) <= hi.value(m) for m in space.all_masks())


class TestPushforward:
    def test_identity(self):
        space = make_space(["a", "b", "c"])
        u = thirds(space)
        assert pushforward(u, identity_map(space)).equals(u, tol=0.0)

    def test_to_one_point_space(self):
        space = make_space(["a", "b", "c"])
        point = make_space(["*"])
        bang = PointMap(space, point, {p: "*" for p in space.points})
        star = pushforward(thirds(space), bang)
        assert star.value(0) == 0 and star.value(1) == 1

    def test_collapse_sums_masses(self):
        space = make_space(["a", "b", "c"])
        u = additive_capacity(space, [Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)])
        cod = make_space(["p", "q"])
        h = PointMap(space, cod, {"a": "p", "b": "p", "c": "q"})
        assert pushforward(u, h)(cod.subset(["p"])) == Fraction(1, 2)


class TestIsAdditive:
    def test_uniform(self):
        assert is_additive(thirds(make_space(["a", "b", "c"])))

    def test_low_singletons(self):
        space = make_space(["a", "b"])
        table = full_table(space, {(): 0, ("a",): Fraction(1, 10),
                                   ("b",): Fraction(1, 10), ("a", "b"): 1})
        assert not is_additive(validate_capacity(space, table))

    def test_point_mass(self):
        space = make_space(["a", "b"])
        u = additive_capacity(space, [Fraction(1), Fraction(0)])
        assert is_additive(u)


LABELS = "abcde"


@st.composite
def spaces(draw, max_points=4):
    n = draw(st.integers(min_value=2, max_value=max_points))
    return FiniteSpace(tuple(LABELS[:n]))


@st.composite
def capacities(draw, space):
    table = [Fraction(0)] * (1 << len(space))
    for mask in range(1, 1 << len(space)):
        raw = draw(st.integers(min_value=0, max_value=12))
        best = Fraction(raw, 12)
        for i in range(len(space)):
            if mask >> i & 1 and table[mask ^ (1 << i)] > best:
                best = table[mask ^ (1 << i)]
        table[mask] = best
    table[-1] = Fraction(1)
    return Capacity(space, table=tuple(table))


@st.composite
def capacity_instances(draw):
    space = draw(spaces())
    return space, draw(capacities(space))


@st.composite
def two_step_maps(draw):
    a = draw(spaces())
    b = draw(spaces())
    c = draw(spaces())
    h = PointMap(a, b, {p: draw(st.sampled_from(b.points)) for p in a.points})
    j = PointMap(b, c, {p: draw(st.sampled_from(c.points)) for p in b.points})
    return a, draw(capacities(a)), h, j


@given(two_step_maps())
@settings(max_examples=60)
def test_pushforward_preserves_axioms_and_is_functorial(data):
    _, u, h, j = data
    pushed = pushforward(u, h)
    masks = list(pushed.space.all_masks())
    assert pushed.value(0) == 0 and pushed.value(masks[-1]) == 1
    for mask in masks:
        for i in range(len(pushed.space)):
            if not mask >> i & 1:
                assert pushed.value(mask) <= pushed.value(mask | 1 << i)
    assert pushforward(u, h.then(j)).equals(pushforward(pushed, j), tol=0.0)


@given(capacity_instances())
@settings(max_examples=40)
def test_pushforward_keeps_additivity(data):
    space, _ = data
    u = additive_capacity(space, [Fraction(1, len(space))] * len(space))
    cod = FiniteSpace(("x", "y"))
    h = PointMap(space, cod, {p: ("x" if i % 2 else "y")
                              for i, p in enumerate(space.points)})
    assert pushforward(u, h).is_additive
