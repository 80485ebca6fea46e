from collections import Counter

import pytest

from xorshard import (
    Encrypted,
    Key,
    LayoutCase,
    LayoutError,
    Plain,
    PrivacyBudget,
    assign_encrypted,
    assign_keys,
    assign_plain,
    build_layout,
    derive_params,
    format_plan,
    slot_label,
)

from goldens import ALL_LISTINGS
from sweeps import forced_plain_split, main_path_params, trivial_params


def plan_for(servers, leak, parts):
    return build_layout(derive_params(servers, PrivacyBudget(leak, parts)))


class TestGoldenListings:
    @pytest.mark.parametrize("triple", sorted(ALL_LISTINGS))
    def test_full_listing_slot_for_slot(self, triple):
        plan = plan_for(*triple)
        assert plan.slots == ALL_LISTINGS[triple]

    def test_named_encrypted_slots(self):
        # the two slots with the trickiest key consumption
        example_2 = plan_for(5, 7, 11)
        assert example_2.server_slots(4)[3] == Encrypted(10, (1, 3, 5, 9))
        example_3 = plan_for(3, 5, 17)
        assert example_3.server_slots(2)[11] == Encrypted(14, (19,))

    def test_trivial_split_two_servers(self):
        plan = plan_for(2, 1, 2)
        assert plan.slots == ((Plain(1),), (Plain(2),))

    def test_trivial_split_uneven(self):
        plan = plan_for(3, 3, 4)  # 3/4 >= 2/3
        assert plan.slots == ((Plain(1), Plain(2)), (Plain(3),), (Plain(4),))


class TestAssignmentPasses:
    def test_plain_slots_example_3(self):
        partial = assign_plain(derive_params(3, PrivacyBudget(5, 17)))
        assert partial.server_slots(1)[:3] == (Plain(1), Plain(2), Plain(7))

    def test_plain_extra_part_only_below_r(self):
        partial = assign_plain(derive_params(5, PrivacyBudget(7, 11)))
        assert partial.server_slots(4)[0] == Plain(4)
        assert partial.server_slots(4)[1] is None  # t > r: no extra plain

    def test_alpha_zero_has_no_plain(self):
        partial = assign_plain(derive_params(3, PrivacyBudget(0, 1)))
        assert all(spec is None for _, _, spec in partial.iter_slots())

    def test_key_ownership_example_1(self):
        partial = assign_keys(derive_params(3, PrivacyBudget(3, 10)))
        assert partial.key_ownership == (
            frozenset({1, 2, 3}), frozenset({4, 5, 6, 7}),
            frozenset({8, 9, 10, 11}))

    def test_key_slots_example_2_middle_band(self):
        partial = assign_keys(derive_params(5, PrivacyBudget(7, 11)))
        assert partial.key_ownership[1] == frozenset({2, 3})
        assert partial.server_slots(2)[2:4] == (Key(2), Key(3))

    def test_key_ownership_example_3_extra_key(self):
        partial = assign_keys(derive_params(3, PrivacyBudget(5, 17)))
        assert partial.key_ownership[2] == frozenset(range(13, 20))

    def test_passes_reject_fallback_params(self):
        trivial = derive_params(3, PrivacyBudget(3, 4))
        for op in (assign_plain, assign_keys):
            with pytest.raises(LayoutError):
                op(trivial)

    def test_refilling_a_complete_plan_collides(self):
        params = derive_params(3, PrivacyBudget(1, 4))
        with pytest.raises(LayoutError):
            assign_encrypted(params, build_layout(params))


class TestPlanInvariants:
    def checks(self, plan):
        params = plan.params
        parts_seen = Counter()
        keys_stored = Counter()
        pads_used = Counter()
        for server, _, spec in plan.iter_slots():
            if isinstance(spec, Plain):
                parts_seen[spec.part_index] += 1
            elif isinstance(spec, Key):
                keys_stored[spec.key_index] += 1
            else:
                parts_seen[spec.part_index] += 1
                owned = plan.key_ownership[server - 1]
                assert not owned.intersection(spec.key_indices)
                owners = Counter()
                for a in spec.key_indices:
                    pads_used[a] += 1
                    owners[next(t for t in range(1, params.servers + 1)
                                if a in plan.key_ownership[t - 1])] += 1
                assert all(n == 1 for n in owners.values())
                assert len(spec.key_indices) <= params.servers - 1
                assert spec.key_indices == tuple(sorted(spec.key_indices))
        assert parts_seen == Counter(range(1, params.parts + 1))
        assert keys_stored == Counter(range(1, params.n_keys + 1))
        assert all(n == 1 for n in pads_used.values())

    def test_sweep_invariants(self):
        count = 0
        for params in main_path_params():
            plan = build_layout(params)
            self.checks(plan)
            assert all(len(row) == params.slots_per_server for row in plan.slots)
            count += 1
        assert count == 990  # the full sweep window, not a sample

    def test_sweep_band_composition(self):
        for params in main_path_params():
            plan = build_layout(params)
            servers, q, r, u, v, x = (params.servers, params.q, params.r,
                                      params.u, params.v, params.x)
            for t in range(1, servers + 1):
                kinds = Counter(type(s) for s in plan.server_slots(t))
                if params.case is LayoutCase.CASE1:
                    if t <= r:
                        expect = (q + 1, u, x)
                    elif t <= servers - v:
                        expect = (q, u, x + 1)
                    else:
                        expect = (q, u + 1, x)
                else:
                    if t <= servers - v:
                        expect = (q + 1, u, x)
                    elif t <= r:
                        expect = (q + 1, u + 1, x - 1)
                    else:
                        expect = (q, u + 1, x)
                assert (kinds[Plain], kinds[Key], kinds[Encrypted]) == expect

    def test_sweep_coalition_protection_counts(self):
        # a coalition missing server t holds l or l-1 plain parts, and the
        # count of its encrypted slots lacking any key of t is 1 or 0
        # correspondingly, totalling exactly l readable parts
        for params in main_path_params(max_servers=5, max_parts=20):
            plan = build_layout(params)
            for t in range(1, params.servers + 1):
                owned = plan.key_ownership[t - 1]
                plain = sum(
                    1 for server, _, spec in plan.iter_slots()
                    if server != t and isinstance(spec, Plain))
                unprotected = sum(
                    1 for server, _, spec in plan.iter_slots()
                    if server != t and isinstance(spec, Encrypted)
                    and not owned.intersection(spec.key_indices))
                assert plain in (params.leak - 1, params.leak)
                assert unprotected <= 1
                assert plain + unprotected == params.leak

    def test_empty_pads_only_after_exhaustion(self):
        for params in main_path_params(max_servers=5, max_parts=20):
            plan = build_layout(params)
            used = Counter()
            for _, _, spec in plan.iter_slots():
                if isinstance(spec, Encrypted):
                    for a in spec.key_indices:
                        used[a] += 1
            for server, _, spec in plan.iter_slots():
                if isinstance(spec, Encrypted) and not spec.key_indices:
                    for other in range(1, params.servers + 1):
                        if other == server:
                            continue
                        pool = plan.key_ownership[other - 1]
                        assert all(used[a] for a in pool)

    def test_rebuild_is_deterministic(self):
        for params in list(main_path_params(max_servers=4, max_parts=15)):
            assert build_layout(params) == build_layout(params)


class TestFallbackLayouts:
    def test_trivial_split_sweep(self):
        for params in trivial_params():
            plan = build_layout(params)
            flat = [spec for _, _, spec in plan.iter_slots()]
            assert all(isinstance(spec, Plain) for spec in flat)
            assert [s.part_index for s in flat] == list(range(1, params.parts + 1))
            sizes = [len(row) for row in plan.slots]
            assert max(sizes) - min(sizes) <= 1
            assert sorted(sizes, reverse=True) == sizes
            # any coalition of all-but-one stays within the budget
            assert params.parts - min(sizes) <= params.leak
            assert plan.key_ownership == (frozenset(),) * params.servers

    def test_plain_split_exact_fit(self):
        plan = build_layout(forced_plain_split(3, 3, 4))
        assert plan.slots == ((Plain(1), Plain(2)), (Plain(3),), (Plain(4),))

    def test_plain_split_truncates(self):
        plan = build_layout(forced_plain_split(3, 3, 3))
        assert plan.slots == ((Plain(1), Plain(2)), (Plain(3),), ())
        worst = max(
            3 - len(plan.server_slots(t)) for t in range(1, 4))
        assert worst <= 3  # coalition bound still holds


class TestRendering:
    def test_slot_labels(self):
        assert slot_label(Plain(3)) == "F3"
        assert slot_label(Key(11)) == "K11"
        assert slot_label(Encrypted(14, (19,))) == "F14^K19"
        assert slot_label(Encrypted(9, ())) == "F9"

    def test_format_intro_plan(self):
        text = format_plan(plan_for(3, 1, 4))
        assert text.splitlines() == [
            "server=1 slot=1 plain F1",
            "server=1 slot=2 key K1",
            "server=1 slot=3 encrypted F2^K2^K4",
            "server=2 slot=1 key K2",
            "server=2 slot=2 key K3",
            "server=2 slot=3 encrypted F3^K1^K5",
            "server=3 slot=1 key K4",
            "server=3 slot=2 key K5",
            "server=3 slot=3 encrypted F4^K3",
        ]

    def test_key_locations(self):
        plan = plan_for(3, 3, 10)
        located = plan.key_locations()
        assert located[4] == (2, 2)
        assert sorted(located) == list(range(1, 12))
