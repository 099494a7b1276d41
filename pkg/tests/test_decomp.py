"""Difference-operator reconstruction from basis deltas, the identity chain,
and the exhaustive decomposition certificate."""

import numpy as np
import pytest

from ffspectra import FnSpec, PointVector, SpaceBasis, build_function, make_field, standard_basis
from ffspectra.catalog import random_function
from ffspectra.decomp import (
    BaseDeltaSet,
    IdentityTrial,
    base_deltas,
    identity_suite,
    reconstruct_delta,
    verify_decomposition,
)
from ffspectra.errors import UnsupportedSize
from ffspectra.funcs import delta_table

F5 = make_field(5)
SQ5 = build_function(FnSpec.univariate([0, 0, 1]), F5, 1)


def test_base_deltas_frozen():
    b = base_deltas(SQ5, standard_basis(F5, 1))
    assert len(b.tables) == 1
    assert b.tables[0].values.tolist() == [1, 3, 0, 2, 4]  # 2x+1
    f9 = make_field(3, 2)
    sq9 = build_function(FnSpec.univariate([0, 0, 1]), f9, 1)
    b9 = base_deltas(sq9, standard_basis(f9, 1))
    assert len(b9.tables) == 2
    assert b9.tables[0] == delta_table(sq9, PointVector.from_index(f9, 1, 1))
    assert b9.tables[1] == delta_table(sq9, PointVector.from_index(f9, 1, 3))
    const = build_function(FnSpec.univariate([2]), F5, 1)
    bc = base_deltas(const, standard_basis(F5, 1))
    assert not bc.tables[0].values.any()


def test_reconstruct_frozen_example():
    b = base_deltas(SQ5, standard_basis(F5, 1))
    a2 = PointVector.from_index(F5, 1, 2)
    got = reconstruct_delta(b, a2)
    assert got.values.tolist() == [4, 3, 2, 1, 0]  # 4x+4
    assert got == delta_table(SQ5, a2)
    # single-digit shifts return the base table itself
    a1 = PointVector.from_index(F5, 1, 1)
    assert reconstruct_delta(b, a1) == b.tables[0]
    # zero shift: empty sum
    assert not reconstruct_delta(b, PointVector.zero(F5, 1)).values.any()


def test_reconstruct_equals_delta_everywhere():
    # pointwise oracle across several spaces, all shifts
    cases = [
        (F5, 1, FnSpec.univariate([0, 0, 1])),
        (F5, 2, FnSpec.from_monomials([(1, (1, 1))])),
        (make_field(3, 2), 1, FnSpec.univariate([1, 2, 1])),
        (make_field(2, 2), 2, FnSpec.from_monomials([(1, (1, 1)), (1, (2, 0))])),
        (make_field(7), 1, FnSpec.univariate([0, 0, 0, 1])),
    ]
    for params, d, spec in cases:
        f = build_function(spec, params, d)
        b = base_deltas(f, standard_basis(params, d))
        for a_idx in range(params.q**d):
            a = PointVector.from_index(params, d, a_idx)
            assert reconstruct_delta(b, a) == delta_table(f, a)


def test_identity_combine():
    # combine: delta_{b+c}(x) = delta_c(x+b) + delta_b(x), frozen instance
    b1 = PointVector.from_index(F5, 1, 1)
    c2 = PointVector.from_index(F5, 1, 2)
    res = identity_suite(SQ5, IdentityTrial(kind="combine", b=b1, c=c2))
    assert res.passed
    assert delta_table(SQ5, b1 + c2).values.tolist() == [4, 0, 1, 2, 3]  # x+4
    # all nonzero pairs
    for bi in range(1, 5):
        for ci in range(1, 5):
            trial = IdentityTrial(
                kind="combine",
                b=PointVector.from_index(F5, 1, bi),
                c=PointVector.from_index(F5, 1, ci),
            )
            assert identity_suite(SQ5, trial).passed


def test_identity_kbeq_conventions():
    b1 = PointVector.from_index(F5, 1, 1)
    # corrected inner index (0..k-1) passes, printed (1..k) fails at k=1
    ok = identity_suite(SQ5, IdentityTrial(kind="kbeq", b=b1, k=1, convention="corrected"))
    assert ok.passed
    bad = identity_suite(SQ5, IdentityTrial(kind="kbeq", b=b1, k=1, convention="printed"))
    assert not bad.passed
    assert bad.counterexample is not None
    assert bad.lhs_value != bad.rhs_value
    # the corrected form holds for every k in [1, p)
    for k in range(1, 5):
        assert identity_suite(
            SQ5, IdentityTrial(kind="kbeq", b=b1, k=k, convention="corrected")
        ).passed
    f9 = make_field(3, 2)
    sq9 = build_function(FnSpec.univariate([0, 0, 1]), f9, 1)
    t = PointVector.from_index(f9, 1, 3)
    assert identity_suite(sq9, IdentityTrial(kind="kbeq", b=t, k=2)).passed
    assert not identity_suite(
        sq9, IdentityTrial(kind="kbeq", b=t, k=1, convention="printed")
    ).passed


def test_identity_allbut():
    parts = tuple(PointVector.from_index(F5, 1, i) for i in (1, 2, 1))
    res = identity_suite(SQ5, IdentityTrial(kind="allbut", parts=parts))
    assert res.passed
    single = identity_suite(
        SQ5, IdentityTrial(kind="allbut", parts=(PointVector.from_index(F5, 1, 3),))
    )
    assert single.passed


def test_verify_decomposition_pass():
    f9 = make_field(3, 2)
    sq9 = build_function(FnSpec.univariate([0, 0, 1]), f9, 1)
    v = verify_decomposition(sq9, standard_basis(f9, 1))
    assert v.passed and v.failing_a is None
    assert v.shifts_checked == 8
    # works for arbitrary tables, planar or not
    rnd = random_function(F5, 2, 11)
    v2 = verify_decomposition(rnd, standard_basis(F5, 2))
    assert v2.passed and v2.shifts_checked == 24
    cube7 = build_function(FnSpec.univariate([0, 0, 0, 1]), make_field(7), 1)
    assert verify_decomposition(cube7, standard_basis(make_field(7), 1)).passed


def test_verify_decomposition_non_standard_basis():
    f9 = make_field(3, 2)
    sq9 = build_function(FnSpec.univariate([0, 0, 1]), f9, 1)
    one_plus_t = PointVector(f9, (f9.from_index(4),))
    t = PointVector(f9, (f9.from_index(3),))
    basis = SpaceBasis(f9, 1, (one_plus_t, t))
    assert verify_decomposition(sq9, basis).passed
    # and reconstruction against that basis still matches the direct delta
    b = base_deltas(sq9, basis)
    for a_idx in range(9):
        a = PointVector.from_index(f9, 1, a_idx)
        assert reconstruct_delta(b, a) == delta_table(sq9, a)


def test_verify_matches_single_shift_oracle():
    # the batched certificate and the per-shift reconstruction agree
    params = make_field(2, 2)
    f = random_function(params, 2, 3)
    basis = standard_basis(params, 2)
    assert verify_decomposition(f, basis).passed
    b = base_deltas(f, basis)
    for a_idx in range(16):
        a = PointVector.from_index(params, 2, a_idx)
        assert reconstruct_delta(b, a) == delta_table(f, a)


def test_verify_decomposition_size_guard():
    big = build_function(FnSpec.univariate([0, 0, 1]), F5, 1)
    f = random_function(F5, 6, 0)  # 15625 points: table ok, certificate not
    with pytest.raises(UnsupportedSize):
        verify_decomposition(f, standard_basis(F5, 6))
    assert big.n_points <= 4096  # sanity: the small case stays in scope


def test_base_delta_set_construction_checks():
    basis = standard_basis(F5, 1)
    b = base_deltas(SQ5, basis)
    assert isinstance(b, BaseDeltaSet)
    assert b.basis is basis
