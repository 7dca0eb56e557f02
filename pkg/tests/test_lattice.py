import pytest
from hypothesis import given
from hypothesis import strategies as st

from uryson.errors import (
    DimensionMismatch,
    NotConverged,
    NotPositiveUnit,
    SupportTooLarge,
)
from uryson.lattice import (
    IndexedFamily,
    Mask,
    Vector,
    all_masks,
    band_project,
    fragments,
    is_disjoint,
    is_fragment,
    is_partition_of,
    is_partition_of_unity,
    lattice_ops,
    mask_algebra,
    order_limit_witness,
    principal_mask,
    principal_projection_sup_form,
    vec,
)

finite = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False)


def vectors_of(dim):
    return st.lists(finite, min_size=dim, max_size=dim).map(lambda cs: Vector(tuple(cs)))


same_dim_pairs = st.integers(min_value=1, max_value=5).flatmap(
    lambda d: st.tuples(vectors_of(d), vectors_of(d))
)


def test_vector_basics():
    x = vec(1.0, -2.0, 0.0)
    assert x.dim == 3
    assert x.support() == (0, 1)
    assert (x + x).coords == (2.0, -4.0, 0.0)
    assert (-x).coords == (-1.0, 2.0, 0.0)
    assert x.scale(0.5).coords == (0.5, -1.0, 0.0)
    assert Vector.zero(2).coords == (0.0, 0.0)
    assert Vector.ones(2).coords == (1.0, 1.0)


def test_vector_rejects_empty_and_nonfinite():
    with pytest.raises(ValueError):
        Vector(())
    with pytest.raises(ValueError):
        vec(float("nan"))
    with pytest.raises(DimensionMismatch):
        vec(1.0) + vec(1.0, 2.0)


@given(same_dim_pairs)
def test_join_plus_meet_is_sum(pair):
    v, w = pair
    assert (v.join(w) + v.meet(w)).isclose(v + w)


@given(same_dim_pairs)
def test_lattice_ops_agree_with_methods(pair):
    v, w = pair
    ops = lattice_ops(v, w)
    assert ops.join == v.join(w)
    assert ops.meet == v.meet(w)
    assert ops.abs_v == v.abs()
    assert ops.pos_v == v.pos_part()
    assert ops.neg_v == v.neg_part()


@given(vectors_of(4))
def test_parts_decompose(v):
    assert (v.pos_part() - v.neg_part()).isclose(v)
    assert (v.pos_part() + v.neg_part()).isclose(v.abs())
    assert is_disjoint(v.pos_part(), v.neg_part())
    assert Vector.zero(4).leq(v.abs())


def test_fragments_enumeration_order():
    # bit i of the enumeration index switches coordinate i on
    assert [f.coords for f in fragments(vec(1.0, -2.0))] == [
        (0.0, 0.0),
        (1.0, 0.0),
        (0.0, -2.0),
        (1.0, -2.0),
    ]


def test_fragments_skip_zero_coordinates():
    assert len(fragments(vec(1.0, 0.0, 3.0))) == 4


def test_fragments_cap():
    with pytest.raises(SupportTooLarge):
        fragments(Vector.ones(6), cap=5)


@given(vectors_of(3))
def test_fragment_pairs_partition(x):
    for y in fragments(x):
        assert is_fragment(y, x)
        assert is_fragment(x - y, x)
        assert is_partition_of(x, [y, x - y])


def test_mask_constructors():
    m = Mask.from_indices(3, (0, 2))
    assert m.indices() == (0, 2)
    assert m.bitmask() == 0b101
    assert Mask.full(3).is_full
    assert Mask.empty(3).is_empty
    assert m.apply(vec(1.0, 2.0, 3.0)).coords == (1.0, 0.0, 3.0)


def test_mask_boolean_laws_exhaustive():
    # small enough to check the whole algebra
    masks = all_masks(3)
    assert len(masks) == 8
    full, empty = Mask.full(3), Mask.empty(3)
    for a in masks:
        assert (a & a.complement()) == empty
        assert (a | a.complement()) == full
        assert a.complement().complement() == a
        for b in masks:
            assert (a & b).complement() == (a.complement() | b.complement())
            assert a.leq(b) == ((a & b) == a)
            alg = mask_algebra(a, b)
            assert alg.meet == (a & b)
            assert alg.join == (a | b)
            assert alg.complement_of_first == a.complement()
            assert alg.leq == a.leq(b)


def test_partition_of_unity():
    a = Mask.from_indices(3, (0,))
    b = Mask.from_indices(3, (1, 2))
    assert is_partition_of_unity([a, b])
    assert not is_partition_of_unity([a, a])
    assert not is_partition_of_unity([a])
    assert not is_partition_of_unity([])


def test_principal_mask_and_band_project():
    f = vec(1.0, 0.0, -2.0)
    rho = principal_mask(f)
    assert rho.indices() == (0, 2)
    assert band_project(rho, vec(5.0, 6.0, 7.0)).coords == (5.0, 0.0, 7.0)


def test_sup_form_matches_mask_projection():
    f = vec(1.0, 0.0)
    g = vec(3.0, 4.0)
    assert principal_projection_sup_form(f, g) == band_project(principal_mask(f), g)


# keep |f| coordinates away from tiny magnitudes: the sup form needs ~g/|f|
# doubling steps, so unconstrained floats would make this test unbounded
_sup_form_coord = st.sampled_from([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0])
_sup_form_vec = st.lists(_sup_form_coord, min_size=3, max_size=3).map(
    lambda cs: Vector(tuple(cs))
)


@given(_sup_form_vec, _sup_form_vec)
def test_sup_form_property(f, g):
    g = g.abs()
    assert principal_projection_sup_form(f, g) == band_project(principal_mask(f), g)


def test_sup_form_requires_nonneg():
    with pytest.raises(ValueError):
        principal_projection_sup_form(vec(1.0), vec(-1.0))


def test_indexed_family_validation():
    with pytest.raises(ValueError):
        IndexedFamily(("a", "a"), (Mask.full(1), Mask.full(1)))
    with pytest.raises(ValueError):
        IndexedFamily(("a",), ())
    fam = IndexedFamily(("a", "b"), (Mask.full(2), Mask.empty(2)))
    assert fam.get("b").is_empty
    assert list(fam.pairs())[0][0] == "a"


def _family(vectors):
    return IndexedFamily(tuple(str(i) for i in range(len(vectors))), tuple(vectors))


def test_order_limit_witness_partitions():
    x = vec(1.0, -2.0)
    seq = [x + Vector.ones(2).scale(2.0 ** -k) for k in range(6)] + [x]
    fam = order_limit_witness(_family(seq), x, eps=0.25, u=Vector.ones(2))
    assert is_partition_of_unity(fam)
    # both coordinates settle at the same step: 2^-2 <= 0.25
    assert fam.labels == ("2",)
    assert [m.indices() for m in fam.items] == [(0, 1)]


def test_order_limit_witness_coordinatewise_rates():
    x = vec(0.0, 0.0)
    seq = [vec(2.0 ** -k, 4.0 ** -k) for k in range(8)] + [x]
    fam = order_limit_witness(_family(seq), x, eps=0.1, u=Vector.ones(2))
    assert is_partition_of_unity(fam)
    assert len(fam) == 2  # the faster coordinate settles strictly earlier


def test_order_limit_witness_not_converged():
    x = vec(1.0, -2.0)
    stuck = _family([x + Vector.ones(2)] * 3)
    with pytest.raises(NotConverged):
        order_limit_witness(stuck, x, eps=0.5, u=Vector.ones(2))


def test_order_limit_witness_rejects_degenerate_unit():
    x = vec(1.0)
    with pytest.raises(NotPositiveUnit):
        order_limit_witness(_family([x]), x, eps=0.5, u=vec(0.0))
    with pytest.raises(ValueError):
        order_limit_witness(_family([x]), x, eps=0.0, u=vec(1.0))
