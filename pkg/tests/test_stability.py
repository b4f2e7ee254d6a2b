import math

import pytest

from concord import (
    blocks_config,
    candidate_moves,
    configure,
    enumerate_partitions,
    fragility_witness,
    gc_analysis,
    is_stable,
    k_star,
    optimal_coalitions,
    pessimal_rate,
    proportional_payoff,
    psi,
    random_payoff,
    rb_pa_stability_radius,
    stable_set_scan,
    wardrop_split,
)
from concord.enums import MoveKind, PessimalMode, StabilityRule
from concord.exceptions import NotStableError, SizeLimitError
from concord.objects import CoalitionSet, Partition, PayoffVector, SystemSpec
from concord.utils import all_masks, submasks

RULES = list(StabilityRule)


def _equal_halves(spec: SystemSpec) -> list[Partition]:
    return [
        partition for partition in enumerate_partitions(spec.n)
        if len(partition) == 2 and 2 * partition[0].servers(spec) == spec.total_servers
    ]


class TestPessimalRate:
    def test_everyone(self, reference):
        assert pessimal_rate(reference, CoalitionSet.everyone(5)) == 15.0

    def test_large_coalition_beats_its_share(self, reference):
        q = CoalitionSet.of([0, 1])
        assert pessimal_rate(reference, q) > 16 / 30 * 15.0

    @pytest.mark.parametrize("counts", [[9, 7, 6, 5, 3], [10, 7, 6, 5, 4], [20, 3, 2]])
    @pytest.mark.parametrize("rate", [0.3, 15.0, 300.0])
    def test_fast_matches_oracle(self, counts, rate):
        spec = SystemSpec(counts, rate)
        for mask in all_masks(spec.n):
            q = CoalitionSet(mask)
            fast = pessimal_rate(spec, q, PessimalMode.FAST)
            assert pessimal_rate(spec, q, PessimalMode.ORACLE) == pytest.approx(fast, rel=1e-9, abs=1e-9)

    def test_oracle_size_guard(self):
        spec = SystemSpec([1] * 12, 6.0)
        with pytest.raises(SizeLimitError):
            pessimal_rate(spec, CoalitionSet.of([0]), PessimalMode.ORACLE)


class TestPayoffs:
    def test_grand_coalition(self, reference):
        payoff = proportional_payoff(reference, Partition.grand(5))
        assert payoff.payoffs == pytest.approx([9 / 30 * 15, 7 / 30 * 15, 6 / 30 * 15, 5 / 30 * 15, 3 / 30 * 15])

    def test_singleton_gets_its_block(self, reference):
        partition = Partition.from_string("0,1|2|3,4", 5)
        payoff = proportional_payoff(reference, partition)
        assert payoff[2] == wardrop_split(reference, partition).rate_of(CoalitionSet.of([2]))

    def test_ratio_follows_servers(self, reference):
        payoff = proportional_payoff(reference, Partition.from_string("0,1|2,3,4", 5))
        assert payoff[0] / payoff[1] == pytest.approx(9 / 7, rel=1e-14)

    def test_random_payoff_is_consistent(self, reference, rng):
        partition = Partition.from_string("0,1|2,3,4", 5)
        for _ in range(10):
            configure(reference, partition, random_payoff(reference, partition, rng))


class TestCandidates:
    def test_grand_coalition_only_splits(self):
        moves = list(candidate_moves(Partition.grand(5), StabilityRule.RB_IA))
        assert len(moves) == 2 ** 5 - 2
        assert {kind for _, kind in moves} == {MoveKind.SPLIT}

    def test_singletons_only_merge(self):
        moves = list(candidate_moves(Partition.singletons(5), StabilityRule.RB_PA))
        assert len(moves) == 2 ** 5 - 5 - 1
        assert {kind for _, kind in moves} == {MoveKind.MERGER}

    def test_general_rule_counts(self):
        for partition in enumerate_partitions(5):
            moves = list(candidate_moves(partition, StabilityRule.GB_PA))
            assert len(moves) == 2 ** 5 - 1 - len(partition)
            assert len({q for q, _ in moves}) == len(moves)
            assert not any(q in partition for q, _ in moves)

    def test_mergers_come_first_without_duplicates(self):
        partition = Partition.from_string("0,1|2|3,4", 5)
        moves = list(candidate_moves(partition, StabilityRule.RB_IA))
        kinds = [kind for _, kind in moves]
        assert kinds == sorted(kinds, key=lambda kind: kind is MoveKind.SPLIT)
        assert len({q for q, _ in moves}) == len(moves) == 4 + 2 + 2

    def test_general_labels(self):
        partition = Partition.from_string("0,1|2|3,4", 5)
        kinds = dict(candidate_moves(partition, StabilityRule.GB_PA))
        assert kinds[CoalitionSet.of([0, 1, 2])] is MoveKind.MERGER
        assert kinds[CoalitionSet.of([3])] is MoveKind.SPLIT
        assert kinds[CoalitionSet.of([1, 2])] is MoveKind.GENERAL


class TestBlocking:
    @pytest.mark.parametrize("rate", [0.3, 15.0, 300.0])
    def test_three_or_more_blocks_never_stable(self, reference, rate):
        spec = reference.with_rate(rate)
        for partition in enumerate_partitions(5):
            if len(partition) < 3:
                continue
            cfg = configure(spec, partition)
            for rule in RULES:
                assert not is_stable(spec, cfg, rule).stable

    def test_merging_all_but_one_block_blocks(self, reference):
        partition = Partition.from_string("0|1,2|3,4", 5)
        cfg = configure(reference, partition)
        merger = CoalitionSet.of([0, 1, 2])
        witness = blocks_config(reference, cfg, merger, MoveKind.MERGER, StabilityRule.RB_IA)
        assert witness is not None
        assert witness.anticipated_value > witness.prevailing_worth

    def test_merger_verdict_ignores_payoff(self, reference, rng):
        partition = Partition.from_string("0|1,2|3,4", 5)
        proportional = configure(reference, partition)
        for q, kind in candidate_moves(partition, StabilityRule.RB_IA):
            if kind is not MoveKind.MERGER:
                continue
            expected = blocks_config(reference, proportional, q, kind, StabilityRule.RB_IA) is None
            for _ in range(5):
                other = configure(reference, partition, random_payoff(reference, partition, rng))
                assert (blocks_config(reference, other, q, kind, StabilityRule.RB_IA) is None) == expected

    @pytest.mark.parametrize("rate", [0.3, 15.0, 300.0])
    def test_optimal_duopolies_resist_splits(self, reference, rng, rate):
        spec = reference.with_rate(rate)
        for coalition in optimal_coalitions(spec):
            partition = Partition([coalition, CoalitionSet.everyone(5) - coalition], 5)
            for _ in range(3):
                cfg = configure(spec, partition, random_payoff(spec, partition, rng))
                verdict = is_stable(spec, cfg, StabilityRule.RB_IA)
                assert verdict.stable
                assert not verdict.payoff_dependent

    def test_equal_halves_resist_with_proportional_payoff(self, reference):
        partitions = _equal_halves(reference)
        assert partitions
        for partition in partitions:
            cfg = configure(reference, partition)
            for q, kind in candidate_moves(partition, StabilityRule.RB_PA):
                assert blocks_config(reference, cfg, q, kind, StabilityRule.RB_PA) is None

    @pytest.mark.parametrize("spec_name", ["reference", "dominant"])
    def test_grand_coalition_blocked_with_perfect_anticipation(self, spec_name, rng, request):
        spec = request.getfixturevalue(spec_name)
        grand = Partition.grand(spec.n)
        for _ in range(20):
            cfg = configure(spec, grand, random_payoff(spec, grand, rng))
            assert not is_stable(spec, cfg, StabilityRule.RB_PA).stable


class TestScan:
    def test_imperfect_anticipation(self, reference):
        report = stable_set_scan(reference, StabilityRule.RB_IA)
        assert len(report) == 52

        stable = report.stable_partitions
        assert stable
        assert all(len(partition) == 2 for partition in stable)
        assert Partition.grand(5) not in stable
        for partition in _equal_halves(reference):
            assert partition in stable
        for coalition in optimal_coalitions(reference):
            assert Partition([coalition, CoalitionSet.everyone(5) - coalition], 5) in stable

    def test_imperfect_anticipation_exact_set(self, reference):
        # a duopoly stands when no part of either block expects more than its server share
        tol = reference.tol_feas
        expected = set()
        for partition in enumerate_partitions(5):
            if len(partition) != 2:
                continue
            standing = True
            for block in partition:
                share = psi(reference, block.servers(reference)).psi
                for sub in submasks(block.mask):
                    servers = reference.servers(sub)
                    if psi(reference, servers).lambda_k > servers * share + tol:
                        standing = False
            if standing:
                expected.add(partition)

        stable = set(stable_set_scan(reference, StabilityRule.RB_IA).stable_partitions)
        assert stable == expected

        assert k_star(reference).maximizers == (23,)
        assert Partition.from_string("0,1,3,4|2", 5) in stable
        assert len(stable) >= 13
        for partition in enumerate_partitions(5):
            if len(partition) == 2 and max(block.servers(reference) for block in partition) <= 23:
                assert partition in stable

    def test_stable_verdicts_hold_for_any_payoff(self, reference, rng):
        report = stable_set_scan(reference, StabilityRule.RB_IA)
        for partition in report.stable_partitions:
            assert not report.verdict_of(partition).payoff_dependent
            for _ in range(5):
                cfg = configure(reference, partition, random_payoff(reference, partition, rng))
                assert is_stable(reference, cfg, StabilityRule.RB_IA).stable

    def test_general_blocking_is_stronger(self, reference):
        restricted = stable_set_scan(reference, StabilityRule.RB_PA)
        general = stable_set_scan(reference, StabilityRule.GB_PA)
        for row in general.rows:
            if row.stable:
                assert restricted.verdict_of(row.partition).stable
        for row in restricted.rows:
            if not row.stable:
                assert not general.verdict_of(row.partition).stable
            if len(row.partition) >= 3:
                assert not row.stable

    def test_size_guard(self):
        with pytest.raises(SizeLimitError):
            stable_set_scan(SystemSpec([1] * 11, 5.0), StabilityRule.RB_IA)


class TestGrandCoalition:
    def test_no_payoff_without_dominant_agent(self, reference, rng):
        assert gc_analysis(reference) is None

        grand = Partition.grand(5)
        for _ in range(50):
            cfg = configure(reference, grand, random_payoff(reference, grand, rng))
            assert not is_stable(reference, cfg, StabilityRule.RB_IA).stable

    def test_dominant_agent_payoff(self, dominant):
        payoff = gc_analysis(dominant)
        assert payoff is not None
        assert sum(payoff) == pytest.approx(dominant.total_rate)

        cfg = configure(dominant, Partition.grand(3), payoff)
        assert is_stable(dominant, cfg, StabilityRule.RB_IA).stable
        assert not is_stable(dominant, cfg, StabilityRule.RB_PA).stable


class TestRadius:
    def test_equal_halves_have_slack(self, reference):
        for partition in _equal_halves(reference):
            payoff = proportional_payoff(reference, partition)
            radius = rb_pa_stability_radius(reference, partition, payoff)
            assert 0 < radius < math.inf

            block = partition[0]
            if len(block) < 2:
                continue
            first, second = block.members[:2]
            nudged = payoff.transfer(first, second, min(radius / 2, payoff[first]))
            assert is_stable(reference, configure(reference, partition, nudged), StabilityRule.RB_PA).stable

    def test_optimal_duopolies_have_slack(self, reference):
        for coalition in optimal_coalitions(reference):
            partition = Partition([coalition, CoalitionSet.everyone(5) - coalition], 5)
            cfg = configure(reference, partition)
            assert is_stable(reference, cfg, StabilityRule.RB_PA).stable
            assert rb_pa_stability_radius(reference, partition, cfg.payoff) > 0

    def test_boundary_payoff_has_no_slack(self):
        spec = SystemSpec([3, 3, 2, 2], 5.0)
        partition = Partition.from_string("0,2|1,3", 4)
        result = wardrop_split(spec, partition)
        left, right = result.rates

        edge = pessimal_rate(spec, CoalitionSet.of([0]))
        payoff = PayoffVector([edge, right * 3 / 5, left - edge, right * 2 / 5])
        assert rb_pa_stability_radius(spec, partition, payoff) == pytest.approx(0.0, abs=1e-9)

    def test_blocked_payoff_is_rejected(self, reference):
        grand = Partition.grand(5)
        with pytest.raises(NotStableError):
            rb_pa_stability_radius(reference, grand, proportional_payoff(reference, grand))

    def test_no_candidates(self):
        spec = SystemSpec([5, 5], 3.0)
        partition = Partition.singletons(2)
        assert rb_pa_stability_radius(spec, partition, proportional_payoff(spec, partition)) == math.inf


class TestOptimalSize:
    @pytest.mark.parametrize("rate, expected", [(300.0, (27,)), (0.3, (19,))])
    def test_reference_extremes(self, reference, rate, expected):
        assert k_star(reference.with_rate(rate)).maximizers == expected

    @pytest.mark.parametrize("rate, expected", [(300.0, (28,)), (0.3, (20,))])
    def test_second_extremes(self, second, rate, expected):
        assert k_star(second.with_rate(rate)).maximizers == expected

    def test_symmetric_duopoly(self):
        result = k_star(SystemSpec([5, 5], 4.0))
        assert result.maximizers == ()
        assert result.achievable_ks == ()
        assert result.half_split is not None
        assert result.half_split.k == 5
        assert result.half_split.psi == pytest.approx(0.4)
        assert result.representative == 5

    def test_maximizers_are_achievable(self, reference):
        result = k_star(reference)
        assert set(result.maximizers) <= set(result.achievable_ks)
        assert all(15 < k < 30 for k in result.achievable_ks)
        tie = 1e-9 * reference.total_rate
        assert all(point.psi <= result.psi_max + tie for point in result.points)

    @pytest.mark.parametrize("scale", [0.5, 2.0])
    def test_invariant_under_joint_rescaling(self, reference, scale):
        scaled = SystemSpec([9, 7, 6, 5, 3], 15.0 * scale, scale)
        assert k_star(scaled).maximizers == k_star(reference).maximizers

    def test_optimal_coalitions(self, reference):
        spec = reference.with_rate(0.3)
        found = optimal_coalitions(spec)
        assert {coalition.members for coalition in found} == {(0, 1, 4)}


class TestFragility:
    def test_duopoly_falls_to_general_blocking(self):
        spec = SystemSpec([9, 7, 6, 3, 3], 600.0)
        found = fragility_witness(spec)
        assert found is not None

        cfg, witness = found
        assert len(cfg.partition) == 2
        assert witness.kind is MoveKind.GENERAL
        assert witness.blocker.servers(spec) in k_star(spec).maximizers
        assert is_stable(spec, cfg, StabilityRule.RB_PA).stable
        assert not is_stable(spec, cfg, StabilityRule.GB_PA).stable

    def test_no_construction_without_optimal_coalitions(self):
        assert fragility_witness(SystemSpec([5, 5], 2.0)) is None
