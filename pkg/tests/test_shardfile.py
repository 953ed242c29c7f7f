import random

import pytest

from coopstore.errors import CorruptShard, InvalidConfig
from coopstore.field import FieldSpec
from coopstore.shardfile import (
    HEADER_SIZE,
    ShardMeta,
    read_manifest,
    read_shard,
    shard_filename,
    write_manifest,
    write_shard,
)
from coopstore.stable import CodeParams
from coopstore.striping import (
    bytes_to_symbols,
    pack_payload,
    stripe_symbols,
    symbols_to_bytes,
    unpack_payload,
)

S1_PARAMS = CodeParams.mscr(n=6, k=3, d=3, t=2, q=11)


class TestStriping:
    @pytest.mark.parametrize("q", [11, 16, 2, 257])
    def test_byte_symbol_round_trip(self, q):
        rng = random.Random(q)
        for size in (1, 7, 64, 255):
            data = bytes(rng.randrange(256) for _ in range(size))
            symbols = bytes_to_symbols(data, q)
            assert all(0 <= v < q for v in symbols)
            assert symbols_to_bytes(symbols, q, size) == data

    @pytest.mark.parametrize("q", [11, 16])
    def test_payload_round_trip(self, q):
        rng = random.Random(q + 100)
        for size in (1, 5, 100):
            data = bytes(rng.randrange(256) for _ in range(size))
            symbols = pack_payload(data, q, 6)
            assert len(symbols) % 6 == 0
            assert unpack_payload(symbols, q) == data

    def test_twelve_symbols_make_two_generations(self):
        gens = stripe_symbols([1] * 12, 6)
        assert len(gens) == 2
        assert all(len(g) == 6 for g in gens)
        # shard payload per node would be generations * alpha = 2 * 2
        assert len(gens) * S1_PARAMS.alpha == 4

    def test_tail_zero_fill(self):
        gens = stripe_symbols([5] * 8, 6)
        assert gens[1] == [5, 5, 0, 0, 0, 0]

    def test_empty_input_rejected(self):
        with pytest.raises(InvalidConfig):
            pack_payload(b"", 11, 6)


class TestShardFile:
    def meta(self, node=3, generations=2):
        return ShardMeta(
            variant="stable",
            field_spec=FieldSpec.prime(11),
            params=S1_PARAMS,
            node_id=node,
            generations=generations,
        )

    def test_round_trip(self, tmp_path):
        path = tmp_path / shard_filename(3)
        write_shard(path, self.meta(), [1, 2, 3, 4])
        meta, symbols = read_shard(path)
        assert symbols == [1, 2, 3, 4]
        assert meta == self.meta()

    def test_binary_field_round_trip(self, tmp_path):
        params = CodeParams.mscr(n=6, k=3, d=3, t=2, q=16)
        meta = ShardMeta(
            variant="stable",
            field_spec=FieldSpec.binary(4),
            params=params,
            node_id=1,
            generations=1,
        )
        path = tmp_path / "x.shard"
        write_shard(path, meta, [15, 8])
        got, symbols = read_shard(path)
        assert got.field_spec == FieldSpec.binary(4)
        assert symbols == [15, 8]

    def test_deterministic_bytes(self, tmp_path):
        p1, p2 = tmp_path / "a.shard", tmp_path / "b.shard"
        write_shard(p1, self.meta(), [1, 2, 3, 4])
        write_shard(p2, self.meta(), [1, 2, 3, 4])
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_size_is_52(self, tmp_path):
        assert HEADER_SIZE == 52
        path = tmp_path / "x.shard"
        write_shard(path, self.meta(), [1, 2, 3, 4])
        assert len(path.read_bytes()) == 52 + 4  # 1-byte symbols

    def test_crc_detects_header_corruption(self, tmp_path):
        path = tmp_path / "x.shard"
        write_shard(path, self.meta(), [1, 2, 3, 4])
        blob = bytearray(path.read_bytes())
        blob[20] ^= 0xFF  # k field
        path.write_bytes(bytes(blob))
        with pytest.raises(CorruptShard):
            read_shard(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "x.shard"
        write_shard(path, self.meta(), [1, 2, 3, 4])
        blob = bytearray(path.read_bytes())
        blob[0] = 0x58
        path.write_bytes(bytes(blob))
        with pytest.raises(CorruptShard):
            read_shard(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "x.shard"
        write_shard(path, self.meta(), [1, 2, 3, 4])
        path.write_bytes(path.read_bytes()[:-1])
        with pytest.raises(CorruptShard):
            read_shard(path)

    def test_out_of_field_symbol(self, tmp_path):
        path = tmp_path / "x.shard"
        write_shard(path, self.meta(), [1, 2, 3, 4])
        blob = bytearray(path.read_bytes())
        blob[-1] = 12  # >= q = 11
        path.write_bytes(bytes(blob))
        with pytest.raises(CorruptShard):
            read_shard(path)


def test_manifest_round_trip(tmp_path):
    write_manifest(tmp_path, {"variant": "stable"}, [1, 2, 3])
    doc = read_manifest(tmp_path)
    assert doc["config"]["variant"] == "stable"
    assert doc["shards"]["2"] == shard_filename(2)
