"""Reconstruction of difference operators from a basis of shifts.

Writing a = sum k_i * g_i over an F_p-basis g_1..g_n of F_q**d (n = d*ell,
digits 0 <= k_i < p), every difference operator decomposes as

    D_{f,a}(x) = sum_i sum_{j=0}^{k_i - 1} D_{f,g_i}(x + b_i + j*g_i),

where b_i = sum_{j<i} k_j * g_j are the partial sums of preceding
contributions.  The inner shift index starts at 0: the k_i = 1 case must
reduce to a bare D_{f,g_i}(x + b_i), and the chain identity

    D_{f,b+c}(x) = D_{f,c}(x+b) + D_{f,b}(x)

telescopes to exactly this convention.  identity_suite exposes the
off-by-one variant (inner index starting at 1) so its failure stays pinned
by a negative-control test.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _modp, _parallel, field as field_mod, space
from .errors import DimensionMismatch, FieldMismatch, UnsupportedSize
from .field import FieldElement
from .funcs import FnTable, delta_table
from .space import PointVector, SpaceBasis


def _check_compatible(f: FnTable, basis: SpaceBasis) -> None:
    if basis.params != f.params:
        raise FieldMismatch("basis over a different field")
    if basis.d != f.d:
        raise DimensionMismatch(f"basis dimension {basis.d} != {f.d}")


@dataclass(frozen=True)
class BaseDeltaSet:
    """The d*ell difference tables of f along a basis."""

    basis: SpaceBasis
    tables: tuple[FnTable, ...]

    @property
    def params(self):
        return self.basis.params

    @property
    def d(self) -> int:
        return self.basis.d


def base_deltas(f: FnTable, basis: SpaceBasis) -> BaseDeltaSet:
    _check_compatible(f, basis)
    return BaseDeltaSet(basis, tuple(delta_table(f, g) for g in basis.vectors))


@dataclass(frozen=True)
class DecompPlan:
    """Digits of a target shift over a basis, with running offsets.

    offsets[i] is the point index of b_i = sum_{j<i} digits[j] * g_j; the
    final running sum must recompose the target, which for_shift asserts.
    """

    digits: tuple[int, ...]
    offsets: tuple[int, ...]
    target_index: int

    @classmethod
    def for_shift(cls, basis: SpaceBasis, a: PointVector) -> "DecompPlan":
        digits = basis.decompose(a)
        offsets = []
        b = PointVector.zero(basis.params, basis.d)
        for k, g in zip(digits, basis.vectors):
            offsets.append(b.index)
            if k:
                b = b + g.scale(k)
        if b.index != a.index:
            raise AssertionError("digit expansion failed to recompose the shift")
        return cls(tuple(digits), tuple(offsets), a.index)


def _reconstruct_values(b: BaseDeltaSet, plan: DecompPlan) -> np.ndarray:
    params, d = b.params, b.d
    n_points = params.q**d
    idx = np.arange(n_points, dtype=np.int64)
    acc = np.zeros(n_points, dtype=np.int64)
    for i, k in enumerate(plan.digits):
        if not k:
            continue
        table = b.tables[i].values
        g_index = b.basis.vectors[i].index
        shift = plan.offsets[i]
        for _ in range(k):
            gathered = table[space.vec_point_add(params, d, idx, np.int64(shift))]
            acc = field_mod.vec_add(params, acc, gathered)
            shift = int(space.vec_point_add(params, d, np.int64(shift), np.int64(g_index)))
    return acc


def reconstruct_delta(b: BaseDeltaSet, a: PointVector) -> FnTable:
    """D_{f,a} assembled purely from the base tables; f is never consulted."""
    if a.params != b.params or a.d != b.d:
        raise FieldMismatch("shift incompatible with this basis")
    plan = DecompPlan.for_shift(b.basis, a)
    return FnTable(b.params, b.d, _reconstruct_values(b, plan))


# ---------------------------------------------------------------------------
# Identity checks.


@dataclass(frozen=True)
class IdentityTrial:
    """One named identity instance.

    kinds: "combine" (needs b, c), "kbeq" (needs b, k; convention is
    "corrected" for inner shifts 0..k-1 or "printed" for 1..k), "allbut"
    (needs parts, the decomposition c = sum parts[i]).
    """

    kind: str
    b: PointVector | None = None
    c: PointVector | None = None
    k: int | None = None
    parts: tuple[PointVector, ...] = ()
    convention: str = "corrected"


@dataclass(frozen=True)
class IdentityResult:
    kind: str
    passed: bool
    counterexample: PointVector | None
    lhs_value: FieldElement | None
    rhs_value: FieldElement | None


def _compare_tables(
    f: FnTable, kind: str, lhs: np.ndarray, rhs: np.ndarray
) -> IdentityResult:
    diff = np.nonzero(lhs != rhs)[0]
    if diff.size == 0:
        return IdentityResult(kind, True, None, None, None)
    x = int(diff[0])
    return IdentityResult(
        kind,
        False,
        PointVector.from_index(f.params, f.d, x),
        f.params.from_index(int(lhs[x])),
        f.params.from_index(int(rhs[x])),
    )


def identity_suite(f: FnTable, trial: IdentityTrial) -> IdentityResult:
    """Pointwise check of one difference-operator identity over all x."""
    params, d = f.params, f.d
    idx = np.arange(f.n_points, dtype=np.int64)
    if trial.kind == "combine":
        b, c = trial.b, trial.c
        lhs = delta_table(f, b + c).values
        dc = delta_table(f, c).values
        db = delta_table(f, b).values
        rhs = field_mod.vec_add(
            params, dc[space.vec_point_add(params, d, idx, np.int64(b.index))], db
        )
        return _compare_tables(f, trial.kind, lhs, rhs)
    if trial.kind == "kbeq":
        b, k = trial.b, int(trial.k)
        if not 1 <= k < params.p:
            raise ValueError("k must lie in [1, p)")
        start = 0 if trial.convention == "corrected" else 1
        lhs = delta_table(f, b.scale(k)).values
        db = delta_table(f, b).values
        rhs = np.zeros(f.n_points, dtype=np.int64)
        for j in range(start, start + k):
            shift = b.scale(j).index
            rhs = field_mod.vec_add(
                params, rhs, db[space.vec_point_add(params, d, idx, np.int64(shift))]
            )
        return _compare_tables(f, trial.kind, lhs, rhs)
    if trial.kind == "allbut":
        parts = trial.parts
        total = PointVector.zero(params, d)
        for piece in parts:
            total = total + piece
        lhs = delta_table(f, total).values
        rhs = np.zeros(f.n_points, dtype=np.int64)
        offset = PointVector.zero(params, d)
        for piece in parts:
            dpiece = delta_table(f, piece).values
            rhs = field_mod.vec_add(
                params,
                rhs,
                dpiece[space.vec_point_add(params, d, idx, np.int64(offset.index))],
            )
            offset = offset + piece
        return _compare_tables(f, trial.kind, lhs, rhs)
    raise ValueError(f"unknown identity kind {trial.kind!r}")


# ---------------------------------------------------------------------------
# Exhaustive verification.


@dataclass(frozen=True)
class DecompVerdict:
    passed: bool
    failing_a: PointVector | None
    shifts_checked: int


@lru_cache(maxsize=2)
def _point_add_table(params, d: int) -> np.ndarray:
    """Full addition table on point indices: table[a, x] = index(x + a)."""
    n_points = params.q**d
    idx = np.arange(n_points, dtype=np.int64)
    if params.p == 2:
        table = (idx[:, None] ^ idx[None, :]).astype(np.int32)
    else:
        n = d * params.ell
        table = np.empty((n_points, n_points), dtype=np.int32)
        block = max(1, _BLOCK_ELEMENTS // n_points)
        for lo in range(0, n_points, block):
            table[lo : lo + block] = _modp.add_indices(
                idx[lo : lo + block, None], idx[None, :], params.p, n
            )
    table.setflags(write=False)
    return table


_BLOCK_ELEMENTS = 1 << 21


def _verify_chunk(args: tuple[FnTable, BaseDeltaSet, int, int]) -> int | None:
    """First a in [start, stop) whose reconstruction differs from the direct
    difference table, or None.  Shifts are processed in ascending blocks,
    with the same term order as DecompPlan but batched across the block;
    field additions accumulate in digit space (bounded by n*(p-1)**2, far
    below int64) and reduce mod p once per block."""
    f, b, start, stop = args
    params, d = f.params, f.d
    p, ell = params.p, params.ell
    n_points = f.n_points
    add_at = _point_add_table(params, d)
    base_digits = [] if p == 2 else [_modp.digits_of(t.values, p, ell) for t in b.tables]
    multiples = [
        np.array([g.scale(j).index for j in range(p)], dtype=np.int64)
        for g in b.basis.vectors
    ]
    block = max(1, _BLOCK_ELEMENTS // (n_points * (1 if p == 2 else ell)))
    for lo in range(start, stop, block):
        hi = min(lo + block, stop)
        a_idx = np.arange(lo, hi, dtype=np.int64)
        direct = field_mod.vec_sub(params, f.values[add_at[a_idx]], f.values[None, :])
        k_digits = b.basis.decompose_indices(a_idx)
        offsets = np.zeros(hi - lo, dtype=np.int64)
        if p == 2:
            # coefficient vectors over F_2: index xor is field addition
            recon = np.zeros((hi - lo, n_points), dtype=np.int64)
            for i in range(len(multiples)):
                rows = np.nonzero(k_digits[:, i] == 1)[0]
                if rows.size:
                    c = offsets[rows] ^ multiples[i][1]
                    recon[rows] ^= b.tables[i].values[add_at[c]]
                offsets ^= multiples[i][k_digits[:, i]]
        else:
            recon_digits = np.zeros((hi - lo, n_points, ell), dtype=np.int64)
            for i in range(len(multiples)):
                ki = k_digits[:, i]
                for j in range(p - 1):
                    rows = np.nonzero(ki > j)[0]
                    if rows.size == 0:
                        continue
                    c = space.vec_point_add(params, d, offsets[rows], multiples[i][j])
                    recon_digits[rows] += base_digits[i][add_at[c]]
                offsets = space.vec_point_add(params, d, offsets, multiples[i][ki])
            recon = _modp.index_of_digits(recon_digits % p, p)
        bad = np.nonzero(np.any(recon != direct, axis=1))[0]
        if bad.size:
            return int(a_idx[bad[0]])
    return None


def verify_decomposition(f: FnTable, basis: SpaceBasis, threads: int = 1) -> DecompVerdict:
    """Reconstruct every nonzero difference operator from the base tables
    and compare pointwise with the direct computation."""
    _check_compatible(f, basis)
    if f.n_points > 4096:
        raise UnsupportedSize("exhaustive decomposition check is desk-scale: q**d <= 4096")
    b = base_deltas(f, basis)
    n = f.n_points
    threads = _parallel.resolve_threads(threads)
    if threads <= 1:
        hit = _verify_chunk((f, b, 1, n))
    else:
        spans = _parallel.chunk_ranges(n - 1, threads * 4)
        tasks = [(f, b, 1 + lo, 1 + hi) for lo, hi in spans]
        results = _parallel.parallel_map(_verify_chunk, tasks, threads)
        hit = next((r for r in results if r is not None), None)
    if hit is None:
        return DecompVerdict(True, None, n - 1)
    return DecompVerdict(False, PointVector.from_index(f.params, f.d, hit), n - 1)
