import inspect
import math

import numpy as np
import pytest

from wavemark import (
    BitMatrix,
    CapacityError,
    FormatError,
    WatermarkKey,
    ber,
    embed,
    extract,
    generate_r,
    load_key,
    psnr,
    save_key,
    synthesize_host,
    xor_bits,
)
from wavemark.watermark import _embed_parities, _read_parities
from wavemark.wavelet import ll_synthesis_atom
from conftest import make_mark

_MASK64 = (1 << 64) - 1


def _splitmix64_bits_reference(seed: int, n: int) -> list[int]:
    """Scalar SplitMix64, written independently of the vectorized path."""
    out = []
    state = seed & _MASK64
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z = z ^ (z >> 31)
        out.append(z >> 63)
    return out


class TestGenerateR:
    def test_frozen_vectors(self):
        assert list(generate_r(16, 0)) == [1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1]
        assert list(generate_r(16, 42)) == [1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1, 0]
        assert list(generate_r(16, 2**64 - 1)) == [1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1]

    @pytest.mark.parametrize("seed", [0, 1, 42, 123456789, 2**64 - 1])
    def test_matches_scalar_reference(self, seed):
        assert list(generate_r(257, seed)) == _splitmix64_bits_reference(seed, 257)

    def test_determinism(self):
        assert np.array_equal(generate_r(1000, 7), generate_r(1000, 7))

    def test_ones_fraction_balanced(self):
        r = generate_r(100_000, 99)
        assert 0.49 <= r.mean() <= 0.51

    def test_seed_independence(self):
        a = generate_r(100_000, 1)
        b = generate_r(100_000, 2)
        assert 0.45 <= (a != b).mean() <= 0.55

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError):
            generate_r(0, 1)

    def test_seed_range_enforced(self):
        with pytest.raises(ValueError):
            generate_r(4, 2**64)
        with pytest.raises(ValueError):
            generate_r(4, -1)

    def test_bit_marginals_uniform_over_seeds(self):
        # for fixed W, every encrypted bit is marginally uniform across
        # seeds; chi-square with 1 dof, p > 0.001 <=> statistic < 10.83
        n_seeds, n_bits = 10_000, 64
        counts = np.zeros(n_bits)
        for s in range(n_seeds):
            counts += generate_r(n_bits, 1_000_000 + s)
        chi2 = (2.0 * counts - n_seeds) ** 2 / n_seeds
        assert chi2.max() < 10.828


class TestXorBits:
    def test_truth_table(self):
        out = xor_bits([1, 0, 1, 0], [0, 1, 1, 0])
        assert list(out) == [1, 1, 0, 0]

    def test_involution(self):
        rng = np.random.default_rng(0)
        w = rng.integers(0, 2, 500, dtype=np.uint8)
        r = rng.integers(0, 2, 500, dtype=np.uint8)
        assert np.array_equal(xor_bits(xor_bits(w, r), r), w)

    def test_self_cancellation(self):
        w = np.array([1, 1, 0, 1], dtype=np.uint8)
        assert not xor_bits(w, w).any()

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            xor_bits([1, 0], [1, 0, 1])


class TestQuantizer:
    def test_embed_rule_worked_example(self):
        # c = 0.3751, delta = 1/16: q = round(6.0016) = 6, q' = 7
        out = _embed_parities(np.array([0.3751]), np.array([1], dtype=np.uint8), 1 / 16)
        assert out[0] == 0.4375
        out = _embed_parities(np.array([0.3751]), np.array([0], dtype=np.uint8), 1 / 16)
        assert out[0] == 0.375

    def test_negative_coefficients(self):
        delta = 1 / 16
        c = np.array([-0.19, -0.22])
        for bit in (0, 1):
            bits = np.full(2, bit, dtype=np.uint8)
            out = _embed_parities(c, bits, delta)
            assert np.array_equal(_read_parities(out, delta), bits)
            assert np.abs(out - c).max() <= 1.5 * delta + 1e-12

    def test_perturbation_below_half_delta_is_harmless(self):
        rng = np.random.default_rng(1)
        delta = 1 / 16
        c = rng.random(4096) * 8.0
        bits = rng.integers(0, 2, 4096, dtype=np.uint8)
        embedded = _embed_parities(c, bits, delta)
        for amp in (0.1, 0.25, 0.49):
            noise = rng.uniform(-amp * delta, amp * delta, 4096)
            assert np.array_equal(_read_parities(embedded + noise, delta), bits)


class TestEmbedExtract:
    def test_round_trip_identity_float_pipeline(self, mark):
        # host content away from the gamut rails, so the backward-transform
        # clamp never engages and extract(embed(.)) is exact
        host = synthesize_host("checker", 256)
        for seed in (0, 1, 12345):
            w, key = embed(host, mark, seed=seed)
            rec = extract(w, key)
            assert np.array_equal(rec.bits, mark.bits)
            assert ber(mark, rec) == 0.0

    def test_extract_is_blind(self):
        params = list(inspect.signature(extract).parameters)
        assert params == ["watermarked", "key"]

    def test_key_reports_embedding_parameters(self, mark):
        host = synthesize_host("noise", 128, seed=5)
        small = make_mark(8, 16)
        _, key = embed(host, small, seed=99, delta=1 / 32)
        assert (key.rows, key.cols, key.levels) == (8, 16, 3)
        assert key.subband == "LL" and key.offset == 0
        assert key.delta == 1 / 32 and key.seed == 99
        assert np.array_equal(key.r, generate_r(small.size, 99))

    def test_capacity_error(self):
        host = synthesize_host("noise", 128, seed=0)  # LL3 is 16x16 = 256
        big = BitMatrix(np.ones((17, 17), dtype=np.uint8))
        with pytest.raises(CapacityError, match="256"):
            embed(host, big, seed=0)

    def test_extract_capacity_error(self):
        host = synthesize_host("noise", 128, seed=1)
        key = WatermarkKey(r=generate_r(512, 3), rows=16, cols=32)
        with pytest.raises(CapacityError):
            extract(host, key)

    def test_extract_from_unrelated_host_is_coin_flipping(self):
        # LSBs of unrelated coefficients XOR a random R: about half the
        # bits disagree, averaged over many hosts
        small = make_mark(16, 16)
        key = WatermarkKey(r=generate_r(256, 4), rows=16, cols=16)
        rates = []
        for i in range(100):
            host = synthesize_host("noise", 128, seed=2_000 + i)
            rates.append(ber(small, extract(host, key)))
        assert 45.0 <= np.mean(rates) <= 55.0

    def test_wrong_key_randomizes(self, mark):
        host = synthesize_host("checker", 256)
        w, key = embed(host, mark, seed=10)
        wrong = WatermarkKey(
            r=generate_r(key.n, 11), rows=key.rows, cols=key.cols,
            delta=key.delta, seed=11,
        )
        assert 40.0 <= ber(mark, extract(w, wrong)) <= 60.0

    def test_imperceptibility_bound(self, mark):
        # per-pixel Y change is bounded by the quantizer step bound
        # (1.5 * delta per coefficient) times the worst stack of
        # overlapping synthesis atoms, measured once by the impulse oracle
        host = synthesize_host("checker", 256)
        delta = 1 / 16
        w, key = embed(host, mark, seed=3, delta=delta)
        atom = np.abs(ll_synthesis_atom(256, 256, 3, 16, 16))
        stack = np.zeros((256, 256))
        for i in range(13, 20):  # all atoms overlapping the probe pixel
            for j in range(13, 20):
                stack += np.abs(ll_synthesis_atom(256, 256, 3, i, j))
        bound = 1.5 * delta * stack.max()
        diff = np.abs(w.data - host.data).max()
        assert diff <= bound
        # PSNR lower bound from n, delta, and measured atom energies
        energies = [
            (ll_synthesis_atom(256, 256, 3, i, j) ** 2).sum()
            for i, j in [(0, 0), (0, 16), (16, 16)]
        ]
        e_max = max(energies)
        overlap = math.ceil(np.ptp(atom.nonzero()[0]) / 8 + 1) ** 2
        total_sq = overlap * mark.size * (1.5 * delta) ** 2 * e_max
        psnr_floor = 10.0 * math.log10(256 * 256 / total_sq)
        assert psnr(host, w) >= psnr_floor


class TestKeyFile:
    def test_round_trip(self, tmp_path, mark):
        key = WatermarkKey(
            r=generate_r(mark.size, 77), rows=15, cols=64,
            delta=1 / 16, seed=77,
        )
        p = tmp_path / "key.txt"
        save_key(key, p)
        back = load_key(p)
        assert back.rows == key.rows and back.cols == key.cols
        assert back.levels == key.levels and back.subband == key.subband
        assert back.delta == key.delta and back.seed == key.seed
        assert back.offset == key.offset
        assert np.array_equal(back.r, key.r)

    def test_file_layout(self, tmp_path):
        key = WatermarkKey(r=np.array([1, 1, 1, 1, 0, 0, 0, 0]), rows=2, cols=4, seed=7)
        p = tmp_path / "key.txt"
        save_key(key, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "WMKEY1"
        assert lines[1] == "levels=3 subband=LL rows=2 cols=4 offset=0"
        assert lines[2] == "delta=0.0625"
        assert lines[3] == "seed=7"
        assert lines[4] == "R=F0"

    def test_hand_built_hex_expansion(self, tmp_path):
        p = tmp_path / "key.txt"
        p.write_text(
            "WMKEY1\nlevels=3 subband=LL rows=2 cols=4 offset=0\n"
            "delta=0.0625\nseed=7\nR=F0\n"
        )
        key = load_key(p)
        assert list(key.r) == [1, 1, 1, 1, 0, 0, 0, 0]

    def test_bad_magic_rejected(self, tmp_path):
        p = tmp_path / "key.txt"
        p.write_text(
            "WMKEY2\nlevels=3 subband=LL rows=2 cols=4 offset=0\n"
            "delta=0.0625\nseed=7\nR=F0\n"
        )
        with pytest.raises(FormatError, match="magic"):
            load_key(p)

    def test_unknown_field_rejected(self, tmp_path):
        p = tmp_path / "key.txt"
        p.write_text(
            "WMKEY1\nlevels=3 subband=LL rows=2 cols=4 offset=0 extra=1\n"
            "delta=0.0625\nseed=7\nR=F0\n"
        )
        with pytest.raises(FormatError):
            load_key(p)

    def test_extra_line_rejected(self, tmp_path):
        p = tmp_path / "key.txt"
        p.write_text(
            "WMKEY1\nlevels=3 subband=LL rows=2 cols=4 offset=0\n"
            "delta=0.0625\nseed=7\nR=F0\nnote=hello\n"
        )
        with pytest.raises(FormatError):
            load_key(p)

    def test_r_length_mismatch_rejected(self, tmp_path):
        p = tmp_path / "key.txt"
        p.write_text(
            "WMKEY1\nlevels=3 subband=LL rows=2 cols=4 offset=0\n"
            "delta=0.0625\nseed=7\nR=F0F0\n"
        )
        with pytest.raises(FormatError, match="R holds"):
            load_key(p)

    def test_nonzero_padding_rejected(self, tmp_path):
        p = tmp_path / "key.txt"
        # n = 6 bits, so the last 2 bits of the byte must be zero
        p.write_text(
            "WMKEY1\nlevels=3 subband=LL rows=2 cols=3 offset=0\n"
            "delta=0.0625\nseed=7\nR=FF\n"
        )
        with pytest.raises(FormatError, match="padding"):
            load_key(p)
