import pytest

from cxrmine.rand import SplitMix64, derive_seed, fisher_yates, fnv1a64


class TestSplitMix64:
    def test_known_stream(self):
        # the widely published output sequence for seed 1234567
        rng = SplitMix64(1234567)
        assert rng.next_u64() == 6457827717110365317
        assert rng.next_u64() == 3203168211198807973

    def test_zero_seed_stream(self):
        rng = SplitMix64(0)
        assert rng.next_u64() == 16294208416658607535

    def test_outputs_are_u64(self):
        rng = SplitMix64(99)
        for _ in range(100):
            value = rng.next_u64()
            assert 0 <= value < 2**64

    def test_seed_is_masked_to_64_bits(self):
        # the raw generator accepts any int; range policing happens in the
        # config layers that expose seeds to users
        assert SplitMix64(-1).next_u64() == SplitMix64(2**64 - 1).next_u64()
        assert SplitMix64(2**64).next_u64() == SplitMix64(0).next_u64()

    def test_next_below_range_and_reach(self):
        rng = SplitMix64(7)
        seen = set()
        for _ in range(200):
            value = rng.next_below(5)
            assert 0 <= value < 5
            seen.add(value)
        assert seen == {0, 1, 2, 3, 4}

    def test_next_below_one_is_constant(self):
        rng = SplitMix64(7)
        assert all(rng.next_below(1) == 0 for _ in range(10))

    def test_next_below_validation(self):
        rng = SplitMix64(7)
        with pytest.raises(ValueError):
            rng.next_below(0)

    def test_next_unit_interval(self):
        rng = SplitMix64(8)
        values = [rng.next_unit() for _ in range(500)]
        assert all(0.0 <= v < 1.0 for v in values)
        # 53-bit mantissa grid
        assert all(v == (round(v * 2**53)) / 2**53 for v in values)

    def test_deterministic(self):
        a = [SplitMix64(42).next_u64() for _ in range(5)]
        b = [SplitMix64(42).next_u64() for _ in range(5)]
        assert a == b


class TestFisherYates:
    def test_returns_permuted_copy(self):
        items = list(range(10))
        shuffled = fisher_yates(items, SplitMix64(3))
        assert sorted(shuffled) == list(range(10))
        assert items == list(range(10))  # input untouched

    def test_deterministic(self):
        items = list(range(20))
        assert fisher_yates(items, SplitMix64(11)) == fisher_yates(items, SplitMix64(11))

    def test_roughly_uniform_first_position(self):
        # every element should land in slot 0 sometimes
        counts = {i: 0 for i in range(4)}
        rng = SplitMix64(13)
        for _ in range(400):
            counts[fisher_yates(range(4), rng)[0]] += 1
        assert all(count > 50 for count in counts.values())

    def test_empty_and_singleton(self):
        rng = SplitMix64(1)
        assert fisher_yates([], rng) == []
        assert fisher_yates(["x"], rng) == ["x"]


class TestHashing:
    def test_fnv1a64_known_values(self):
        # standard FNV-1a 64-bit test vectors
        assert fnv1a64("") == 0xCBF29CE484222325
        assert fnv1a64("a") == 0xAF63DC4C8601EC8C
        assert fnv1a64("foobar") == 0x85944171F73967E8

    def test_derive_seed_depends_on_every_part(self):
        base = derive_seed(5, "exp", "1", "lidc")
        assert base == derive_seed(5, "exp", "1", "lidc")
        assert base != derive_seed(6, "exp", "1", "lidc")
        assert base != derive_seed(5, "exp", "2", "lidc")
        assert base != derive_seed(5, "exp", "1", "jsrt")

    def test_derive_seed_is_u64(self):
        for i in range(20):
            value = derive_seed(i, "part", str(i))
            assert 0 <= value < 2**64
