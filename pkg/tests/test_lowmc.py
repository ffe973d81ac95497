import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coldboot.bits import BitString
from coldboot.lowmc import (LowMCParams, PARAMSETS, cached_instance, decrypt, decrypt_int, encrypt,
                            encrypt_int, get_paramset, gf2_inverse, gf2_matmul, gf2_rank, instantiate,
                            keygen, matvec, paramset_table, sbox, sbox_inverse)


def np_rank(rows, n):
    a = np.array([[(r >> j) & 1 for j in range(n)] for r in rows], dtype=np.uint8)
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(a)) if a[i, col]), None)
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        for i in range(len(a)):
            if i != rank and a[i, col]:
                a[i] ^= a[rank]
        rank += 1
    return rank


def reference_encrypt(inst, key, block):
    """Bit-by-bit version of the round function, one S-box at a time."""
    p = inst.params

    def mv(rows, v):
        return sum((bin(r & v).count("1") & 1) << i for i, r in enumerate(rows))

    s = block ^ mv(inst.key_matrices[0], key)
    for i in range(p.r):
        for j in range(p.m):
            a, b, c = ((s >> (3 * j + t)) & 1 for t in range(3))
            x, y, z = a ^ (b & c), a ^ b ^ (a & c), a ^ b ^ c ^ (a & b)
            s &= ~(7 << 3 * j)
            s |= (x | y << 1 | z << 2) << 3 * j
        s = mv(inst.linear_layers[i], s) ^ inst.round_constants[i] ^ mv(inst.key_matrices[i + 1], key)
    return s


def test_sbox_bijective():
    outs = {sbox(*bits) for bits in itertools.product((0, 1), repeat=3)}
    assert len(outs) == 8
    for bits in itertools.product((0, 1), repeat=3):
        assert sbox_inverse(*sbox(*bits)) == bits


@given(st.lists(st.integers(0, (1 << 12) - 1), min_size=1, max_size=12))
def test_gf2_rank_matches_numpy_elimination(rows):
    assert gf2_rank(rows) == np_rank(rows, 12)


def test_gf2_inverse():
    rng = np.random.default_rng(1)
    found = 0
    for _ in range(30):
        rows = [int(x) for x in rng.integers(0, 1 << 10, 10)]
        inv = gf2_inverse(rows, 10)
        if gf2_rank(rows) < 10:
            assert inv is None
            continue
        found += 1
        ident = [1 << i for i in range(10)]
        assert gf2_matmul(rows, inv) == ident and gf2_matmul(inv, rows) == ident
    assert found > 5


def test_params_validation():
    with pytest.raises(ValueError):
        LowMCParams(n=8, k=8, m=3, r=1)
    with pytest.raises(ValueError):
        LowMCParams(n=0, k=8, m=0, r=1)


def test_instance_deterministic():
    p = LowMCParams(n=16, k=16, m=2, r=3, seed=1)
    assert instantiate(p) == instantiate(p)
    assert instantiate(p) != instantiate(LowMCParams(n=16, k=16, m=2, r=3, seed=2))


def test_matches_reference_round_function():
    inst = instantiate(LowMCParams(n=21, k=17, m=5, r=3, seed=4))
    rng = np.random.default_rng(0)
    for _ in range(50):
        k, m = int(rng.integers(0, 1 << 17)), int(rng.integers(0, 1 << 21))
        assert encrypt_int(inst, k, m) == reference_encrypt(inst, k, m)


def test_exhaustive_roundtrip_small():
    inst = instantiate(LowMCParams(n=12, k=12, m=4, r=4, seed=0))
    for key in (0, 1, 0xABC):
        images = {encrypt_int(inst, key, m) for m in range(1 << 12)}
        assert len(images) == 1 << 12
        assert all(decrypt_int(inst, key, encrypt_int(inst, key, m)) == m for m in range(1 << 12))


def test_padded_storage():
    ps = get_paramset("picnic-L1-full")
    inst = cached_instance(ps.lowmc)
    sk, (m, c) = keygen(ps, seed=3)
    assert len(sk) == 136 and sk.to_int() >> 129 == 0
    assert encrypt(inst, sk, m).resized(136) == c
    assert decrypt(inst, sk, c) == m.resized(129)
    with pytest.raises(ValueError):
        encrypt(inst, BitString.from_int(1 << 130, 136), m)
    with pytest.raises(ValueError):
        encrypt(inst, BitString.zeros(100), m)


def test_paramset_table():
    rows = {p.name: (p.state_bits, p.state_bytes) for p in paramset_table()}
    assert len(rows) == 12
    assert rows["picnic-L1-FS"] == (128, 16)
    assert rows["picnic3-L1"] == (129, 17)
    assert rows["picnic-L3-full"] == (192, 24)
    assert rows["picnic-L5-UR"] == (256, 32)
    assert rows["picnic3-L5"] == (255, 32)
    assert {p.level for p in paramset_table()} == {"L1", "L3", "L5"}
    with pytest.raises(KeyError):
        get_paramset("picnic-L7")


def test_keygen_deterministic():
    ps = PARAMSETS["picnic-L1-FS"]
    assert keygen(ps, seed=[1, 2]) == keygen(ps, seed=[1, 2])
    assert keygen(ps, seed=[1, 2])[0] != keygen(ps, seed=[1, 3])[0]
