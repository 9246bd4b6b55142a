"""Cube-lattice tests: the specialization order, meet, product,
semiproduct, attribute-set embedding, rank, atoms/coatoms, and the guarded
space enumeration; goldens on the worked warehouse plus oracle sweeps.
"""

from __future__ import annotations

import itertools
import random

import pytest

from hdcube import (
    EMPTY_TUPLE,
    HdcError,
    LatticeContext,
    ROOT_ID,
    ShapeError,
    SizeGuardError,
    atoms,
    attribute_pairs,
    cell_sort_key,
    coatoms,
    generalizes,
    is_empty,
    iter_space,
    meet,
    product,
    rank,
    semiproduct,
    space_size,
)
from oracles import (
    oracle_leq,
    oracle_meet,
    oracle_minimal,
    oracle_space,
    oracle_upper_bounds,
    random_context,
)


def cell(om3, *labels: str) -> tuple[int, ...]:
    """Resolve one label per dimension; ALL picks the root."""
    out = []
    for h, lab in zip(om3.ctx.hierarchies, labels):
        out.append(ROOT_ID if lab == "ALL" else h.resolve_label(lab))
    return tuple(out)


# ─── the specialization order ──────────────────────────────────────────


class TestOrder:
    def test_goldens(self, om3):
        ctx = om3.ctx
        assert generalizes(ctx, cell(om3, "France", "ALL", "ALL"),
                           cell(om3, "P_1", "S_1", "A_1"))
        assert generalizes(ctx, ctx.bottom(), cell(om3, "P_2", "S_2", "A_3"))
        assert not generalizes(ctx, cell(om3, "P_1", "S_1", "A_1"),
                               cell(om3, "France", "ALL", "ALL"))
        assert not generalizes(ctx, cell(om3, "Paris", "ALL", "ALL"),
                               cell(om3, "Marseille", "ALL", "ALL"))

    def test_empty_cell_is_top(self, om3):
        ctx = om3.ctx
        some = cell(om3, "P_1", "S_1", "A_1")
        assert generalizes(ctx, some, EMPTY_TUPLE)
        assert generalizes(ctx, EMPTY_TUPLE, EMPTY_TUPLE)
        assert not generalizes(ctx, EMPTY_TUPLE, some)

    def test_shape_checked(self, om3):
        with pytest.raises(ShapeError):
            generalizes(om3.ctx, (1, 1), (1, 1, 1))

    def test_matches_oracle_sampled(self, om3):
        ctx = om3.ctx
        rng = random.Random(5)
        pools = [list(h) for h in ctx.hierarchies]
        for _ in range(3000):
            t = tuple(rng.choice(p) for p in pools)
            u = tuple(rng.choice(p) for p in pools)
            assert generalizes(ctx, t, u) == oracle_leq(ctx, t, u)


# ─── meet ──────────────────────────────────────────────────────────────


class TestMeet:
    def test_golden(self, om3):
        got = meet(om3.ctx, cell(om3, "P_2", "S_2", "A_3"),
                   cell(om3, "P_3", "S_3", "A_6"))
        assert got == cell(om3, "139.124.242.125", "ALL", "ALL")

    def test_empty_cell_is_identity(self, om3):
        t = cell(om3, "P_1", "S_1", "A_2")
        assert meet(om3.ctx, t, EMPTY_TUPLE) == t
        assert meet(om3.ctx, EMPTY_TUPLE, t) == t
        assert is_empty(meet(om3.ctx, EMPTY_TUPLE, EMPTY_TUPLE))

    def test_bottom_absorbs(self, om3):
        ctx = om3.ctx
        t = cell(om3, "P_1", "S_1", "A_2")
        assert meet(ctx, t, ctx.bottom()) == ctx.bottom()

    def test_laws_sampled(self, om3):
        ctx = om3.ctx
        rng = random.Random(11)
        pools = [list(h) for h in ctx.hierarchies]
        draw = lambda: tuple(rng.choice(p) for p in pools)
        for _ in range(1500):
            t, u, v = draw(), draw(), draw()
            assert meet(ctx, t, t) == t
            assert meet(ctx, t, u) == meet(ctx, u, t)
            assert meet(ctx, meet(ctx, t, u), v) == meet(ctx, t, meet(ctx, u, v))
            assert meet(ctx, t, u) == oracle_meet(ctx, t, u)
            # the meet is the greatest lower bound
            g = meet(ctx, t, u)
            assert generalizes(ctx, g, t) and generalizes(ctx, g, u)

    def test_meet_is_glb_by_enumeration(self):
        rng = random.Random(23)
        ctx = random_context(rng, max_dims=2, max_levels=2, max_values=5)
        cells = oracle_space(ctx)
        for t in cells:
            for u in cells:
                g = meet(ctx, t, u)
                lower = [
                    z for z in cells
                    if oracle_leq(ctx, z, t) and oracle_leq(ctx, z, u)
                ]
                assert g in lower
                assert all(oracle_leq(ctx, z, g) for z in lower)


# ─── product ───────────────────────────────────────────────────────────


class TestProduct:
    def test_golden_two_results(self, om3):
        got = product(om3.ctx, cell(om3, "Marseille", "S_2", "A_3"),
                      cell(om3, "139.124.242.125", "S_2", "A_3"))
        assert got == (
            cell(om3, "Linux", "S_2", "A_3"),
            cell(om3, "Mac OS", "S_2", "A_3"),
        )

    def test_incompatible_slot_collapses(self, om3):
        got = product(om3.ctx, cell(om3, "Paris", "S_2", "A_3"),
                      cell(om3, "Marseille", "S_2", "A_3"))
        assert got == (EMPTY_TUPLE,)

    def test_idempotent(self, om3):
        t = cell(om3, "P_1", "S_1", "A_1")
        assert product(om3.ctx, t, t) == (t,)

    def test_empty_operand(self, om3):
        t = cell(om3, "P_1", "S_1", "A_1")
        assert product(om3.ctx, t, EMPTY_TUPLE) == (EMPTY_TUPLE,)

    def test_results_are_upper_bounds(self, om3):
        ctx = om3.ctx
        rng = random.Random(31)
        pools = [list(h) for h in ctx.hierarchies]
        for _ in range(400):
            t = tuple(rng.choice(p) for p in pools)
            u = tuple(rng.choice(p) for p in pools)
            for z in product(ctx, t, u):
                if is_empty(z):
                    continue
                assert generalizes(ctx, t, z)
                assert generalizes(ctx, u, z)

    def test_absorption_with_meet(self, om3):
        ctx = om3.ctx
        rng = random.Random(37)
        pools = [list(h) for h in ctx.hierarchies]
        for _ in range(400):
            t = tuple(rng.choice(p) for p in pools)
            u = tuple(rng.choice(p) for p in pools)
            for z in product(ctx, t, u):
                assert meet(ctx, t, z) == t or not is_empty(z)
                if not is_empty(z):
                    assert meet(ctx, t, z) == t


# ─── semiproduct ───────────────────────────────────────────────────────


class TestSemiproduct:
    def test_golden_browser_refinement(self, om3):
        ctx = om3.ctx
        t = cell(om3, "Linux", "S_2", "A_3")
        u = cell(om3, "Mac OS", "S_2", "A_3")
        player, turn, series = ctx.hierarchies
        expected = tuple(
            itertools.product(
                [player.resolve_label("Opera"), player.resolve_label("Firefox")],
                turn.children(turn.resolve_label("S_2")),
                series.children(series.resolve_label("A_3")),
            )
        )
        assert semiproduct(ctx, t, u) == expected

    def test_unequal_levels_collapse(self, om3):
        got = semiproduct(om3.ctx, cell(om3, "Marseille", "S_2", "A_3"),
                          cell(om3, "Mac OS", "S_2", "A_3"))
        assert got == (EMPTY_TUPLE,)

    def test_leaf_slots_collapse(self, om3):
        t = cell(om3, "P_1", "S_1", "A_1")
        u = cell(om3, "P_2", "S_1", "A_1")
        assert semiproduct(om3.ctx, t, u) == (EMPTY_TUPLE,)


# ─── attribute pairs and rank ──────────────────────────────────────────


class TestEmbedding:
    def test_attribute_pairs_golden(self, om3):
        got = attribute_pairs(om3.ctx, cell(om3, "92.88.91.80", "S_1", "A_1"))
        assert got == frozenset(
            {(0, 1), (0, 2), (0, 3), (0, 4), (1, 1), (2, 1)}
        )

    def test_bottom_maps_to_nothing(self, om3):
        assert attribute_pairs(om3.ctx, om3.ctx.bottom()) == frozenset()

    def test_empty_cell_maps_to_everything(self, om3):
        got = attribute_pairs(om3.ctx, EMPTY_TUPLE)
        # every pair of the space plus the unreachable marker
        assert len(got) == 19 + 11 + 37 + 1
        assert (-1, 0) in got
        for t in (om3.ctx.bottom(), cell(om3, "P_1", "S_1", "A_1")):
            assert attribute_pairs(om3.ctx, t) < got

    def test_rank_goldens(self, om3):
        ctx = om3.ctx
        assert rank(ctx, ctx.bottom()) == 0
        assert rank(ctx, cell(om3, "France", "ALL", "ALL")) == 1
        assert rank(ctx, cell(om3, "IDF", "ALL", "ALL")) == 2
        assert rank(ctx, cell(om3, "P_1", "S_1", "A_1")) == 10
        assert rank(ctx, EMPTY_TUPLE) == 13

    def test_rank_monotone_on_chains(self, om3):
        ctx = om3.ctx
        rng = random.Random(41)
        pools = [list(h) for h in ctx.hierarchies]
        for _ in range(500):
            u = tuple(rng.choice(p) for p in pools)
            t = tuple(
                rng.choice(h.ancestor_path(v))
                for h, v in zip(ctx.hierarchies, u)
            )
            assert generalizes(ctx, t, u)
            assert rank(ctx, t) <= rank(ctx, u)
            assert attribute_pairs(ctx, t) <= attribute_pairs(ctx, u)

    def test_order_embedding_sampled(self, om3):
        ctx = om3.ctx
        rng = random.Random(43)
        pools = [list(h) for h in ctx.hierarchies]
        for _ in range(3000):
            t = tuple(rng.choice(p) for p in pools)
            u = tuple(rng.choice(p) for p in pools)
            assert generalizes(ctx, t, u) == (
                attribute_pairs(ctx, t) <= attribute_pairs(ctx, u)
            )


# ─── atoms and coatoms ─────────────────────────────────────────────────


class TestAtomsCoatoms:
    def test_atoms_golden(self, om3):
        ctx = om3.ctx
        got = atoms(ctx)
        assert len(got) == 11
        assert got[0] == cell(om3, "France", "ALL", "ALL")
        expected = tuple(
            ctx.bottom()[:i] + (v,) + ctx.bottom()[i + 1:]
            for i, h in enumerate(ctx.hierarchies)
            for v in h.level_values(1)
        )
        assert got == expected
        for a in got:
            assert rank(ctx, a) == 1

    def test_coatoms_all_leaf(self, om3):
        ctx = om3.ctx
        got = coatoms(ctx)
        assert len(got) == 3 * 8 * 30
        for c in got[:50]:
            for h, v in zip(ctx.hierarchies, c):
                assert h.children(v) == ()

    def test_maximality_oracle(self, om3):
        # a concrete cell is maximal exactly when every slot is childless
        ctx = om3.ctx
        expected = {
            t
            for t in iter_space(ctx)
            if not is_empty(t)
            and all(not h.children(v) for h, v in zip(ctx.hierarchies, t))
        }
        assert set(coatoms(ctx)) == expected

    def test_small_space_cover_relation(self):
        # atoms cover the bottom: nothing sits strictly between
        rng = random.Random(53)
        ctx = random_context(rng, max_dims=2, max_levels=2, max_values=6)
        cells = oracle_space(ctx)
        bottom = ctx.bottom()
        for a in atoms(ctx):
            between = [
                z for z in cells
                if z != bottom and z != a
                and oracle_leq(ctx, bottom, z) and oracle_leq(ctx, z, a)
                and not is_empty(z)
            ]
            assert between == []


# ─── space enumeration ─────────────────────────────────────────────────


class TestSpace:
    def test_size_golden(self, om3):
        assert space_size(om3.ctx) == 9121

    def test_zero_dimension_space(self):
        ctx = LatticeContext(())
        assert space_size(ctx) == 2
        assert list(iter_space(ctx)) == [(), EMPTY_TUPLE]

    def test_enumeration_order(self, om3):
        it = iter_space(om3.ctx)
        first = next(it)
        second = next(it)
        assert first == om3.ctx.bottom()
        assert second == (0, 0, 1)
        rest = list(it)
        assert rest[-1] is EMPTY_TUPLE

    def test_count_matches_formula(self, om3):
        assert sum(1 for _ in iter_space(om3.ctx)) == space_size(om3.ctx)

    def test_sorted_by_cell_key_in_blocks(self, om3):
        cells = list(iter_space(om3.ctx))
        keys = [cell_sort_key(t) for t in cells]
        assert keys == sorted(keys)

    def test_guard_refusal(self, om3):
        with pytest.raises(SizeGuardError) as err:
            list(iter_space(om3.ctx, guard=100))
        assert err.value.count == 9121
        assert err.value.guard == 100

    def test_guard_env_override(self, om3, monkeypatch):
        monkeypatch.setenv("HDC_SIZE_GUARD", "200")
        with pytest.raises(SizeGuardError):
            list(iter_space(om3.ctx))
        monkeypatch.setenv("HDC_SIZE_GUARD", "10000")
        assert sum(1 for _ in iter_space(om3.ctx)) == 9121

    def test_guard_env_invalid(self, om3, monkeypatch):
        monkeypatch.setenv("HDC_SIZE_GUARD", "lots")
        with pytest.raises(HdcError):
            list(iter_space(om3.ctx))


# ─── gproduct vs minimal upper bounds on clean pairs ──────────────────


class TestProductMinimality:
    def test_equal_or_incomparable_slots_match_enumeration(self):
        # where every slot pair is equal or incomparable, the product is
        # exactly the minimal upper bounds found by enumeration
        rng = random.Random(59)
        ctx = random_context(rng, max_dims=2, max_levels=3, max_values=7)
        cells = oracle_space(ctx)
        concrete = [c for c in cells if not is_empty(c)]
        checked = 0
        for t in concrete:
            for u in concrete:
                clean = all(
                    a == b
                    or (not h.is_ancestor(a, b) and not h.is_ancestor(b, a))
                    for h, a, b in zip(ctx.hierarchies, t, u)
                )
                if not clean:
                    continue
                checked += 1
                got = set(product(ctx, t, u))
                ub = oracle_upper_bounds(ctx, cells, t, u)
                expected = set(oracle_minimal(ctx, ub))
                assert got == expected
        assert checked > 0

    def test_results_form_an_antichain(self, om3):
        ctx = om3.ctx
        rng = random.Random(61)
        pools = [list(h) for h in ctx.hierarchies]
        for _ in range(300):
            t = tuple(rng.choice(p) for p in pools)
            u = tuple(rng.choice(p) for p in pools)
            got = product(ctx, t, u)
            for a in got:
                for b in got:
                    if a != b:
                        assert not generalizes(ctx, a, b)
