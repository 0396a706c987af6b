import math

import pytest
from hypothesis import given, strategies as st

from sparselab import (
    ROOT,
    AtomPartition,
    DyadicInterval,
    ParameterError,
    Relation,
    SparseFamily,
    atoms_of,
    carleson_constant,
    chain_family,
    packing_certified,
    relate,
    subdivide,
    uniform_partition,
)

intervals = st.integers(min_value=0, max_value=7).flatmap(
    lambda k: st.integers(min_value=0, max_value=(1 << k) - 1).map(
        lambda m: DyadicInterval(k, m)
    )
)


def brute_relate(a: DyadicInterval, b: DyadicInterval) -> Relation:
    """Oracle via endpoint arithmetic on exact dyadic rationals."""
    if a == b:
        return Relation.EQUAL
    if a.left >= b.left and a.right <= b.right:
        return Relation.INSIDE
    if b.left >= a.left and b.right <= a.right:
        return Relation.CONTAINS
    if a.right <= b.left or b.right <= a.left:
        return Relation.DISJOINT
    raise AssertionError("dyadic intervals must nest or be disjoint")


def test_relate_exhaustive_small_levels():
    all_intervals = [
        DyadicInterval(k, m) for k in range(5) for m in range(1 << k)
    ]
    for a in all_intervals:
        for b in all_intervals:
            assert relate(a, b) is brute_relate(a, b)


def test_interval_validation():
    with pytest.raises(ParameterError):
        DyadicInterval(2, 4)
    with pytest.raises(ParameterError):
        DyadicInterval(-1, 0)
    with pytest.raises(ParameterError):
        DyadicInterval(1, -1)


def test_interval_geometry():
    q = DyadicInterval(3, 5)
    assert q.length == 0.125
    assert q.left == 0.625
    assert q.right == 0.75
    assert q.parent() == DyadicInterval(2, 2)
    assert q.children() == (DyadicInterval(4, 10), DyadicInterval(4, 11))
    with pytest.raises(ParameterError):
        ROOT.parent()


@given(intervals, intervals)
def test_relate_symmetry(a, b):
    r = relate(a, b)
    s = relate(b, a)
    if r is Relation.INSIDE:
        assert s is Relation.CONTAINS
    elif r is Relation.CONTAINS:
        assert s is Relation.INSIDE
    else:
        assert s is r


@given(intervals, intervals)
def test_encloses_matches_relate(a, b):
    assert a.encloses(b) == (relate(a, b) in (Relation.EQUAL, Relation.CONTAINS))


@given(intervals)
def test_children_partition_parent(q):
    kids = q.children()
    assert math.isclose(sum(c.length for c in kids), q.length)
    assert all(relate(q, c) is Relation.CONTAINS for c in kids)
    assert relate(kids[0], kids[1]) is Relation.DISJOINT


def test_subdivide_counts():
    parts = subdivide(ROOT, 3)
    assert len(parts) == 8
    assert sorted(p.position for p in parts) == list(range(8))


def test_chain_family_and_carleson():
    # packed chain: sum of member lengths inside the root is 2 - 2^-K
    for K in (0, 1, 4, 9):
        fam = chain_family(K)
        assert len(fam) == K + 1
        assert math.isclose(carleson_constant(fam), 2.0 - 2.0**-K, rel_tol=1e-15)
    assert packing_certified(chain_family(4))
    overdeclared = SparseFamily(chain_family(4).members, eta=0.6)
    assert not packing_certified(overdeclared)


def test_family_dedup_and_root():
    fam = SparseFamily(
        (DyadicInterval(1, 0), ROOT, DyadicInterval(1, 0)), eta=0.5
    )
    assert len(fam) == 2
    assert fam.root == ROOT
    assert fam.max_level == 1


def test_family_eta_validation():
    with pytest.raises(ParameterError):
        SparseFamily((ROOT,), eta=0.0)
    with pytest.raises(ParameterError):
        SparseFamily((ROOT,), eta=1.5)
    with pytest.raises(ParameterError):
        SparseFamily((), eta=0.5)


def test_atoms_of_partitions_root():
    fam = SparseFamily(
        (ROOT, DyadicInterval(2, 1), DyadicInterval(3, 6)), eta=0.5
    )
    part = atoms_of(fam)
    assert math.isclose(sum(a.length for a in part.atoms), 1.0)
    lefts = [a.left for a in part.atoms]
    assert lefts == sorted(lefts)
    # every member is a contiguous run of atoms
    for q in fam.members:
        i0, i1 = part.atom_range(q)
        assert math.isclose(
            sum(a.length for a in part.atoms[i0:i1]), q.length
        )
        assert all(q.encloses(a) for a in part.atoms[i0:i1])


def test_atom_range_rejects_unaligned():
    part = uniform_partition(ROOT, 2)
    with pytest.raises(ParameterError):
        part.atom_range(DyadicInterval(3, 1))


def test_locate_finds_containing_atom():
    fam = chain_family(2)
    part = atoms_of(fam)
    idx = part.locate(DyadicInterval(5, 0))
    assert part.atoms[idx].encloses(DyadicInterval(5, 0))


def test_atoms_extra_depth():
    part = atoms_of(chain_family(1), extra_depth=2)
    assert len(part) == 8
