"""Character sums: the exact butterfly engine vs pointwise histograms,
the fast float transform, Parseval, and bent verdicts."""

import cmath
import math

import numpy as np
import pytest

from ffspectra import FnSpec, PointVector, build_function, make_field, trace
from ffspectra.catalog import random_function
from ffspectra.cyclotomic import CycInt
from ffspectra.errors import EvenCharacteristic, TrivialCharacter
from ffspectra.funcs import is_pn
from ffspectra.space import dot
from ffspectra.spectrum import (
    characters,
    crosscheck_pn_bent,
    exact_cell,
    is_bent_exact,
    parseval_total,
    spectrum_report,
    walsh_exact,
    walsh_exact_all,
    walsh_fast_all,
)

F5 = make_field(5)
SQ5 = build_function(FnSpec.univariate([0, 0, 1]), F5, 1)


def _walsh_oracle(f, u, m):
    # direct complex sum, no shared machinery beyond field ops
    p = f.params.p
    total = 0j
    for i in range(f.n_points):
        x = PointVector.from_index(f.params, f.d, i)
        y = u * (f.value_at(x) - dot(x, m))
        total += cmath.exp(2j * cmath.pi * trace(y) / p)
    return total


def test_characters_enumeration():
    f9 = make_field(3, 2)
    us = [c.u.index for c in characters(f9)]
    assert us == list(range(1, 9))


def test_walsh_exact_frozen_examples():
    u1 = F5.one()
    m0 = PointVector.zero(F5, 1)
    s = walsh_exact(SQ5, u1, m0)
    assert s == CycInt.from_coeffs(5, [1, 2, 0, 0, 2])  # 1 + 2z + 2z^4
    assert s.abs_sq().as_integer() == 5
    const = build_function(FnSpec.univariate([0]), F5, 1)
    assert walsh_exact(const, u1, m0) == CycInt.integer(5, 5)
    ident = build_function(FnSpec.univariate([0, 1]), F5, 1)
    m1 = PointVector.from_index(F5, 1, 1)
    assert walsh_exact(ident, u1, m1) == CycInt.integer(5, 5)
    with pytest.raises(TrivialCharacter):
        walsh_exact(SQ5, F5.zero(), m0)


def test_engine_matches_pointwise_and_complex_oracle():
    cases = [
        (F5, 1, FnSpec.univariate([0, 0, 1])),
        (F5, 1, FnSpec.univariate([3, 1, 0, 1])),
        (make_field(3, 2), 1, FnSpec.univariate([1, 2, 1])),
        (make_field(2, 2), 2, FnSpec.from_monomials([(1, (1, 1))])),
        (make_field(3), 2, FnSpec.from_monomials([(1, (1, 1)), (2, (0, 2))])),
        (make_field(2, 3), 1, FnSpec.univariate([0, 0, 0, 1])),
    ]
    for params, d, spec in cases:
        f = build_function(spec, params, d)
        n = f.n_points
        for c in characters(params):
            u = c.u
            table = walsh_exact_all(f, u)
            assert len(table) == n
            for m_idx in range(n):
                m = PointVector.from_index(params, d, m_idx)
                cell = walsh_exact(f, u, m)
                assert table[m_idx] == cell
                assert exact_cell(f, u.index, m_idx) == cell
                want = _walsh_oracle(f, u, m)
                assert abs(cell.to_complex() - want) < 1e-8 * max(1.0, abs(want))


def test_exact_cell_guards():
    with pytest.raises(TrivialCharacter):
        exact_cell(SQ5, 0, 0)


def test_parseval_exact():
    for params, d, spec in [
        (F5, 1, FnSpec.univariate([0, 0, 1])),
        (F5, 2, FnSpec.from_monomials([(1, (1, 1))])),
        (make_field(3, 2), 1, FnSpec.univariate([2, 1, 2])),
        (make_field(2, 2), 1, FnSpec.univariate([1, 2])),
    ]:
        f = build_function(spec, params, d)
        for c in characters(params):
            assert parseval_total(f, c.u) == params.q ** (2 * d)
    # seeded random tables obey it too
    for seed in range(5):
        f = random_function(F5, 2, seed)
        assert parseval_total(f, F5.one()) == 5**4


def test_is_bent_exact_verdicts():
    assert is_bent_exact(SQ5).verdict == "bent"
    ident = build_function(FnSpec.univariate([0, 1]), F5, 1)
    bad = is_bent_exact(ident)
    assert bad.verdict == "not_bent"
    assert bad.witness.u.index == 1
    assert bad.witness.m.index == 1
    assert bad.witness.abs_sq_int == 25
    # x1*x2 + x3*x4 on F_2^4 is bent
    f2 = make_field(2)
    mm = build_function(
        FnSpec.from_monomials([(1, (1, 1, 0, 0)), (1, (0, 0, 1, 1))]), f2, 4
    )
    assert is_bent_exact(mm).verdict == "bent"


def test_bent_over_odd_fields_square_is_flat():
    for p, ell in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)]:
        params = make_field(p, ell)
        f = build_function(FnSpec.univariate([0, 0, 1]), params, 1)
        assert is_bent_exact(f).is_bent
        # flatness double-checked against the full exact table for one u
        report = spectrum_report(f, params.one())
        assert report.is_flat(params.q)


def test_bent_verdict_matches_brute_force_scan():
    # orbit-reduction path vs scanning every u directly
    params = make_field(3, 2)
    fns = [
        build_function(FnSpec.univariate([0, 0, 1]), params, 1),
        build_function(FnSpec.univariate([0, 2, 1]), params, 1),
        build_function(FnSpec.univariate([0, 1]), params, 1),
        random_function(params, 1, 7),
        random_function(params, 1, 8),
    ]
    target = params.q
    for f in fns:
        brute_u = None
        for c in characters(params):
            table = walsh_exact_all(f, c.u)
            if any(s.abs_sq().as_integer() != target for s in table):
                brute_u = c.u.index
                break
        verdict = is_bent_exact(f)
        assert verdict.is_bent == (brute_u is None)
        if brute_u is None:
            continue
        # least failing u; m follows the witness convention: least m whose
        # |S|^2 provably exceeds the target, else least failing m
        assert verdict.witness.u.index == brute_u
        abs_sqs = [s.abs_sq() for s in walsh_exact_all(f, params.from_index(brute_u))]
        ints = [z.as_integer() for z in abs_sqs]
        over = [m for m, v in enumerate(ints) if v is not None and v > target]
        if not over:
            over = [
                m
                for m, (v, z) in enumerate(zip(ints, abs_sqs))
                if v is None and z.to_complex().real > target + 0.25
            ]
        expected_m = over[0] if over else next(m for m, v in enumerate(ints) if v != target)
        assert verdict.witness.m.index == expected_m
        assert verdict.witness.abs_sq.as_integer() == ints[expected_m]


def test_p2_odd_dimension_never_bent():
    # q^(d/2) irrational: the verdict is computed, not special-cased
    f2 = make_field(2)
    f = build_function(FnSpec.from_monomials([(1, (1, 1, 0))]), f2, 3)
    assert not is_bent_exact(f).is_bent


def test_walsh_fast_matches_exact():
    cases = [
        (F5, 1, FnSpec.univariate([0, 0, 1])),
        (make_field(3, 2), 1, FnSpec.univariate([1, 2, 1])),
        (make_field(7), 1, FnSpec.univariate([0, 0, 0, 1])),
        (make_field(2, 2), 2, FnSpec.from_monomials([(1, (1, 1))])),
    ]
    for params, d, spec in cases:
        f = build_function(spec, params, d)
        for c in characters(params):
            mags = walsh_fast_all(f, c.u)
            exact = walsh_exact_all(f, c.u)
            for m_idx in range(f.n_points):
                z = exact[m_idx].abs_sq()
                v = z.as_integer()
                want = math.sqrt(v if v is not None else max(z.to_complex().real, 0.0))
                assert abs(mags[m_idx] - want) <= 1e-9 * max(1.0, want)
            if params.p == 2:
                assert np.array_equal(mags, np.rint(mags))


def test_walsh_fast_frozen_examples():
    u1 = F5.one()
    mags = walsh_fast_all(SQ5, u1)
    assert np.allclose(mags, math.sqrt(5), atol=1e-9)
    f2 = make_field(2)
    zero4 = build_function(FnSpec.from_monomials([]), f2, 4)
    mags0 = walsh_fast_all(zero4, f2.one())
    assert mags0[0] == 16 and not mags0[1:].any()
    xy = build_function(FnSpec.from_monomials([(1, (1, 1))]), f2, 2)
    assert walsh_fast_all(xy, f2.one()).tolist() == [2.0, 2.0, 2.0, 2.0]
    with pytest.raises(TrivialCharacter):
        walsh_fast_all(SQ5, F5.zero())


def test_spectrum_report_pairing():
    rep = spectrum_report(SQ5, F5.one())
    assert rep.u_index == 1 and len(rep.rows) == 5
    for row in rep.rows:
        assert row.abs_sq_int == 5
        assert row.magnitude == pytest.approx(math.sqrt(5), abs=1e-12)
    assert rep.is_flat(5)
    assert not rep.is_flat(4)
    assert rep.max_magnitude == rep.min_magnitude


def test_crosscheck_pn_bent():
    rep = crosscheck_pn_bent(SQ5)
    assert rep.pn.is_pn and rep.bent.is_bent and rep.agree
    cube = build_function(FnSpec.univariate([0, 0, 0, 1]), F5, 1)
    rep2 = crosscheck_pn_bent(cube)
    assert not rep2.pn.is_pn and not rep2.bent.is_bent and rep2.agree
    f9 = make_field(3, 2)
    rep3 = crosscheck_pn_bent(build_function(FnSpec.univariate([0, 0, 1]), f9, 1))
    assert rep3.agree and rep3.pn.is_pn
    with pytest.raises(EvenCharacteristic):
        crosscheck_pn_bent(build_function(FnSpec.univariate([0, 1]), make_field(2), 1))


def test_character_additivity_on_traces():
    # chi_u(y+z) = chi_u(y) chi_u(z) reduces to trace additivity of u*(y+z)
    for params in (make_field(5), make_field(3, 2), make_field(2, 3)):
        for c in characters(params):
            for yi in range(params.q):
                for zi in range(params.q):
                    y, z = params.from_index(yi), params.from_index(zi)
                    lhs = trace(c.u * (y + z))
                    rhs = (trace(c.u * y) + trace(c.u * z)) % params.p
                    assert lhs == rhs


def test_pn_positive_examples_are_bent_and_vice_versa():
    # random q^d <= 625 spot agreement between both routes (odd p)
    for params, d in [(F5, 1), (make_field(3, 2), 1), (make_field(7), 1), (F5, 2)]:
        for seed in range(3):
            f = random_function(params, d, seed)
            assert is_pn(f).is_pn == is_bent_exact(f).is_bent
