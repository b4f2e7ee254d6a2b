import pytest

from concord.enums import MoveKind, StabilityRule
from concord.exceptions import InconsistentPayoffError, InvalidData
from concord.objects import (
    BlockWitness,
    CoalitionSet,
    Configuration,
    Partition,
    PayoffVector,
    RunConfig,
    StabilityVerdict,
    SystemSpec,
    WardropResult,
)


class TestSystemSpec:
    def test_counts_are_sorted_and_labels_kept(self):
        spec = SystemSpec([3, 9, 5], 2.0)
        assert spec.server_counts == (9, 5, 3)
        assert spec.labels == (1, 2, 0)
        assert spec.canonical_index(0) == 2

    def test_raw_uses_original_order(self):
        spec = SystemSpec([3, 9, 5], 2.0, 0.5)
        assert spec.raw == {'agents': [3, 9, 5], 'lambda': 2.0, 'mu': 0.5}
        assert SystemSpec.from_dict(spec.raw) == spec

    @pytest.mark.parametrize("counts, rate, mu", [
        ([], 1.0, 1.0),
        ([0, 3], 1.0, 1.0),
        ([2.5], 1.0, 1.0),
        ([3], 0.0, 1.0),
        ([3], 1.0, -1.0),
        ([3], float('inf'), 1.0),
    ])
    def test_invalid_values(self, counts, rate, mu):
        with pytest.raises(InvalidData):
            SystemSpec(counts, rate, mu)

    def test_missing_key(self):
        with pytest.raises(InvalidData, match="lambda"):
            SystemSpec.from_dict({'agents': [1, 2]})

    def test_derived_quantities(self, reference):
        assert reference.total_servers == 30
        assert reference.n == 5
        assert reference.offered_load == 15.0
        assert reference.tol_feas == pytest.approx(15e-9)
        assert reference.servers(0b10001) == 12

    def test_with_rate_keeps_labels(self):
        spec = SystemSpec([3, 9, 5], 2.0)
        assert spec.with_rate(4.0).labels == spec.labels
        assert spec.with_rate(4.0).total_rate == 4.0


class TestCoalitionSet:
    def test_set_operations(self):
        a = CoalitionSet.of([0, 2])
        b = CoalitionSet.of([2, 3])
        assert (a | b).members == (0, 2, 3)
        assert (a & b).members == (2,)
        assert (a - b).members == (0,)
        assert CoalitionSet.of([2]) < a
        assert not a <= b
        assert len(a) == 2 and 2 in a and 1 not in a
        assert str(a) == "{0,2}"

    def test_servers_recomputed(self, reference):
        assert CoalitionSet.of([0, 1]).servers(reference) == 16
        assert CoalitionSet.everyone(5).servers(reference) == 30

    def test_smallest(self):
        assert CoalitionSet.of([3, 1]).smallest == 1
        with pytest.raises(ValueError):
            CoalitionSet(0).smallest


class TestPartition:
    def test_canonical_order_and_rgs(self):
        partition = Partition([CoalitionSet.of([3, 4]), CoalitionSet.of([2]), CoalitionSet.of([0, 1])], 5)
        assert [block.members for block in partition] == [(0, 1), (2,), (3, 4)]
        assert partition.rgs == (0, 0, 1, 2, 2)
        assert partition.rgs_string == "00122"
        assert Partition.from_rgs(partition.rgs) == partition
        assert hash(Partition.from_rgs((1, 1, 0, 2, 2))) == hash(partition)

    def test_string_round_trip(self):
        partition = Partition.from_string("0,1|2|3,4", 5)
        assert partition.to_string() == "0,1|2|3,4"

    def test_string_uses_original_labels(self):
        spec = SystemSpec([3, 9, 5], 2.0)
        partition = Partition.from_string("0|1,2", 3, spec)
        assert partition.block_of(2).members == (2,)
        assert partition.to_string(spec.labels) == "0|1,2"

    @pytest.mark.parametrize("text", ["0,,1", "0|x", "0,0|1", "0|7"])
    def test_malformed_strings(self, text):
        with pytest.raises(InvalidData):
            Partition.from_string(text, 3)

    def test_merge_and_split(self):
        partition = Partition.singletons(4)
        merged = partition.merge([CoalitionSet.of([0]), CoalitionSet.of([2])])
        assert merged.to_string() == "0,2|1|3"

        split = Partition.grand(4).split(CoalitionSet.everyone(4), CoalitionSet.of([1, 3]))
        assert split.to_string() == "0,2|1,3"

        with pytest.raises(InvalidData):
            merged.split(CoalitionSet.of([0, 2]), CoalitionSet.of([0, 2]))


class TestPayoffAndConfiguration:
    def test_negative_payoff(self):
        with pytest.raises(InvalidData):
            PayoffVector([1.0, -0.5])

    def test_transfer_keeps_totals(self):
        payoff = PayoffVector([1.0, 2.0, 3.0]).transfer(0, 1, 0.5)
        assert payoff.payoffs == (0.5, 2.5, 3.0)
        assert payoff.total(CoalitionSet.of([0, 1])) == pytest.approx(3.0)

    def test_inconsistent_payoff(self):
        partition = Partition.from_string("0,1|2", 3)
        equilibrium = WardropResult(partition.blocks, (2.0, 1.0), 0.1, 0.0)
        Configuration(partition, PayoffVector([1.0, 1.0, 1.0]), equilibrium, tolerance=1e-9)

        with pytest.raises(InconsistentPayoffError):
            Configuration(partition, PayoffVector([1.0, 0.5, 1.5]), equilibrium, tolerance=1e-9)


class TestRecords:
    def test_witness_must_gain(self):
        with pytest.raises(ValueError):
            BlockWitness(CoalitionSet.of([0]), MoveKind.SPLIT, 1.0, 1.0)
        assert BlockWitness(CoalitionSet.of([0]), MoveKind.SPLIT, 2.0, 1.5).gain == pytest.approx(0.5)

    def test_verdict_witness_exclusive(self):
        witness = BlockWitness(CoalitionSet.of([0]), MoveKind.SPLIT, 2.0, 1.0)
        with pytest.raises(ValueError):
            StabilityVerdict(stable=True, rule=StabilityRule.RB_PA, witness=witness)
        with pytest.raises(ValueError):
            StabilityVerdict(stable=False, rule=StabilityRule.RB_PA)

    def test_rate_of_unknown_block(self):
        result = WardropResult((CoalitionSet.of([0]), CoalitionSet.of([1])), (1.0, 1.0), 0.2, 0.0)
        with pytest.raises(KeyError):
            result.rate_of(CoalitionSet.of([0, 1]))

    def test_run_config_round_trip(self):
        config = RunConfig.from_dict({
            'agents': [9, 7, 6, 5, 3], 'lambda': 15, 'rule': 'rb-pa', 'seed': 4, 'grid': [1, 2]
        })
        assert config.rule is StabilityRule.RB_PA
        assert config.grid == (1.0, 2.0)
        assert RunConfig.from_dict(config.raw) == config
        assert config.override(seed=None, max_steps=5).max_steps == 5
        assert config.override(seed=None).seed == 4

    def test_run_config_bad_rule(self):
        with pytest.raises(InvalidData):
            RunConfig.from_dict({'agents': [1], 'lambda': 1, 'rule': 'nope'})
