import math
import random
import warnings

import numpy as np
import pytest

import oracles
from hienergy import groups, moments, setops
from hienergy.groups import cyclic, lattice
from hienergy.gset import GSet, full_group, zset
from hienergy.moments import (ConvTable, EnergyProfile, convolve, correlate,
                              conv_power, energy_k, energy_k_pair, energy_pair,
                              level_sequence, mult_energy_k, prodset_size,
                              quotset_size, sigma_k, t_k)


def rand_gset(rng, g, size):
    if g.is_cyclic:
        return GSet(g, [groups.from_flat(g, v) for v in rng.sample(range(g.order), size)])
    return GSet(g, rng.sample(range(40), size))


def test_correlate_example():
    a = zset([0, 1, 3])
    t = correlate(a, a)
    assert t.value(0) == 3
    for x in (1, -1, 2, -2, 3, -3):
        assert t.value(x) == 1
    assert t.total() == 9


def test_correlate_degenerate():
    single = zset([0])
    t = correlate(single, single)
    assert t.value(0) == 1 and t.total() == 1
    g = cyclic(6)
    t2 = correlate(full_group(g), full_group(g))
    assert all(t2.value(x) == 6 for x in groups.enumerate_elements(g))


def test_energy_examples():
    a = zset([0, 1, 3])
    assert energy_k(a, 2) == 15
    assert energy_k(a, 3) == 33
    assert energy_k(a, 4) == 87
    assert energy_k(a, 1) == 9
    assert energy_k(zset([5]), 3) == 1
    g = cyclic(5)
    assert energy_k(full_group(g), 3) == 5 ** 4
    assert energy_k(zset([]), 2) == 0


def test_energy_matches_oracle():
    rng = random.Random(31)
    for _ in range(25):
        g = rng.choice([cyclic(16), cyclic(4, 4), lattice(1)])
        a = rand_gset(rng, g, rng.randint(1, 8))
        mods = g.moduli if g.is_cyclic else None
        for k in (1, 2, 3):
            assert energy_k(a, k) == oracles.oracle_energy_k(mods, set(a.elems), k)


def test_energy_pair_examples():
    a = zset([0, 1])
    assert energy_k_pair(a, a, 3) == 10
    b = zset([0, 1, 3])
    assert energy_k_pair(b, b, 2) == energy_k(b, 2) == 15
    assert energy_k_pair(b, zset([]), 2) == 0
    assert energy_k_pair(b, b, 1) == len(b) ** 2


def test_energy_pair_matches_oracle():
    rng = random.Random(37)
    for _ in range(20):
        g = rng.choice([cyclic(12), lattice(1)])
        a = rand_gset(rng, g, rng.randint(1, 6))
        b = rand_gset(rng, g, rng.randint(1, 6))
        mods = g.moduli if g.is_cyclic else None
        for k in (2, 3):
            assert energy_k_pair(a, b, k) == \
                oracles.oracle_energy_k_pair(mods, set(a.elems), set(b.elems), k)
        assert energy_pair(a, b) == oracles.oracle_energy_pair(mods, set(a.elems), set(b.elems))


def test_t_k_examples():
    a = zset([0, 1, 3])
    assert t_k(a, 2) == 15
    az4 = GSet(cyclic(4), [0, 2])
    assert t_k(az4, 2) == 8
    for k in (1, 2, 3, 4):
        assert t_k(az4, k) == 2 ** (2 * k - 1)


def test_sigma_k_examples():
    a = zset([0, 1, 3])
    d = setops.diffset(a, a)
    assert sigma_k(d, 2) == 7
    assert sigma_k(zset([0]), 5) == 1


def test_t_sigma_match_oracle():
    rng = random.Random(41)
    for _ in range(15):
        g = rng.choice([cyclic(10), lattice(1)])
        a = rand_gset(rng, g, rng.randint(1, 5))
        mods = g.moduli if g.is_cyclic else None
        for k in (1, 2, 3):
            assert t_k(a, k) == oracles.oracle_t_k(mods, set(a.elems), k)
            assert sigma_k(a, k) == oracles.oracle_sigma_k(mods, set(a.elems), k)


def test_fractional_energy_monotone_chain():
    # kappa_k >= kappa_(k-1)^((k-1)/(k-2)) for k >= 3
    rng = random.Random(43)
    for _ in range(10):
        a = rand_gset(rng, cyclic(32), rng.randint(3, 10))
        prof = EnergyProfile.from_set(a, ks=(2, 3, 4, 5))
        for k in (4, 5):
            lo = prof.kappa[k - 1] ** ((k - 1) / (k - 2))
            assert prof.kappa[k] >= lo * (1 - 1e-9)


def test_level_sequence_examples():
    assert level_sequence(zset([0, 1, 3])) == [3, 1, 1, 1, 1, 1, 1]
    assert level_sequence(zset([4])) == [1]
    g = cyclic(5)
    assert level_sequence(full_group(g)) == [5] * 5


def test_mult_energy_examples():
    assert mult_energy_k([1, 2, 4], 2) == 19
    assert prodset_size([1, 2, 4]) == 5
    assert quotset_size([1, 2, 4]) == 5
    assert mult_energy_k([1], 3) == 1
    with pytest.raises(ValueError):
        mult_energy_k([0, 1], 2)


def test_mass_invariant():
    rng = random.Random(47)
    for _ in range(20):
        g = rng.choice([cyclic(20), cyclic(4, 4), lattice(1)])
        a = rand_gset(rng, g, rng.randint(1, 8))
        b = rand_gset(rng, g, rng.randint(1, 8))
        assert correlate(a, b).total() == len(a) * len(b)
        assert convolve(a, b).total() == len(a) * len(b)
        assert (correlate(a, b).values() >= 0).all()


def test_fft_equals_direct_500_instances():
    rng = random.Random(53)
    worst = 0
    for i in range(500):
        n = rng.choice([1024, 1536, 2048])
        g = cyclic(n)
        a = GSet(g, rng.sample(range(n), rng.randint(2, 48)))
        b = GSet(g, rng.sample(range(n), rng.randint(2, 48)))
        fa = ConvTable.from_gset(a).array
        fb = ConvTable.from_gset(b).array
        fft = moments._fft_cyclic(fa, fb, g.moduli)
        direct = moments._direct_cyclic(fa, fb, g.moduli)
        assert fft is not None
        assert (fft == direct).all(), f"instance {i} diverged"


def test_fft_multidim_and_lattice_paths():
    rng = random.Random(59)
    g = cyclic(32, 32)  # order 1024 >= threshold
    a = GSet(g, [groups.from_flat(g, v) for v in rng.sample(range(1024), 40)])
    b = GSet(g, [groups.from_flat(g, v) for v in rng.sample(range(1024), 40)])
    fa, fb = ConvTable.from_gset(a).array, ConvTable.from_gset(b).array
    assert (moments._fft_cyclic(fa, fb, g.moduli) ==
            moments._direct_cyclic(fa, fb, g.moduli)).all()
    # lattice windows: shift far from the origin, exactness preserved
    z = lattice(1)
    a = GSet(z, [x + 1000 for x in rng.sample(range(100), 20)])
    b = GSet(z, [x - 2000 for x in rng.sample(range(100), 20)])
    t = convolve(a, b)
    mods = None
    want = {}
    for u in a.elems:
        for v in b.elems:
            s = (u[0] + v[0],)
            want[s] = want.get(s, 0) + 1
    assert dict((e, c) for e, c in t.support()) == want


def test_conv_power_chain_exact():
    a = GSet(cyclic(4), [0, 2])
    assert conv_power(a, 1).value(0) == 1
    t3 = conv_power(a, 3)
    assert t3.total() == 8


def test_parseval_and_convolution_transform():
    rng = np.random.default_rng(61)
    g = cyclic(64)
    for _ in range(30):
        f = rng.integers(-5, 6, 64).astype(np.float64)
        h = rng.integers(-5, 6, 64).astype(np.float64)
        fh, hh = np.fft.fft(f), np.fft.fft(h)
        # Parseval
        assert math.isclose((f ** 2).sum(), (np.abs(fh) ** 2).sum() / 64, rel_tol=1e-9)
        # sum_y |sum_x f(x) h(y-x)|^2 = (1/N) sum |f^|^2 |h^|^2
        conv = np.fft.ifft(fh * hh).real
        lhs = (conv ** 2).sum()
        rhs = (np.abs(fh) ** 2 * np.abs(hh) ** 2).sum() / 64
        assert math.isclose(lhs, rhs, rel_tol=1e-9)


def test_slice_identity_micro_brute_force():
    # E_k(A) equals the slice sum enumerated over explicit tuples
    rng = random.Random(67)
    for _ in range(6):
        g = rng.choice([cyclic(10), lattice(1)])
        a = rand_gset(rng, g, rng.randint(2, 5))
        mods = g.moduli if g.is_cyclic else None
        for k in (2, 3):
            assert energy_k(a, k) == oracles.oracle_slice_energy(mods, set(a.elems), k)


def test_pair_slice_identity_micro_brute_force():
    rng = random.Random(71)
    for _ in range(4):
        a = rand_gset(rng, cyclic(8), rng.randint(2, 4))
        mods = (8,)
        for k, l in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            assert energy_k(a, k + l) == \
                oracles.oracle_pair_slice_sum(mods, set(a.elems), k, l)


def test_fft_fallback_warns_and_stays_exact():
    # force the FFT integer tolerance to zero so the fallback path fires
    old = moments.FFT_INT_TOL
    moments.FFT_INT_TOL = 0.0
    try:
        g = cyclic(1024)
        rng = random.Random(3)
        a = GSet(g, rng.sample(range(1024), 200))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            t = correlate(a, a)
        assert t.total() == len(a) ** 2
    finally:
        moments.FFT_INT_TOL = old


def test_table_csv_export():
    a = zset([0, 1, 3])
    csv = correlate(a, a).to_csv()
    assert csv.splitlines()[0] == "element,count"
    assert '"0",3' in csv
