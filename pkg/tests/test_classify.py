import numpy as np
import pytest

from bcft.classify import (
    Nimrep,
    brute_force_invariants,
    cardy_solve,
    compatibility,
    enumerate_modular_invariants,
    enumerate_nimreps,
    regular_nimrep,
)
from bcft.errors import DataInconsistencyError
from bcft.modular import ModularData
from bcft.rings import FusionRing


def test_trivial_category_single_invariant():
    ring = FusionRing(["0"], [0], np.ones((1, 1, 1), dtype=np.int64))
    md = ModularData(ring, [[1.0]], [1.0])
    invs = enumerate_modular_invariants(md)
    assert len(invs) == 1 and invs[0].tolist() == [[1]]


def test_ising_exactly_one_invariant(ising_data):
    invs = enumerate_modular_invariants(ising_data.modular)
    assert len(invs) == 1
    assert np.array_equal(invs[0], np.eye(3, dtype=np.int64))


def test_ising_brute_force_cross_check(ising_data):
    # independent oracle: all 3x3 integer matrices with entries <= 2
    fast = enumerate_modular_invariants(ising_data.modular)
    slow = brute_force_invariants(ising_data.modular, 2)
    assert [tuple(Z.reshape(-1)) for Z in fast] == [tuple(Z.reshape(-1)) for Z in slow]


def test_fibonacci_exactly_one_invariant(fib_data):
    invs = enumerate_modular_invariants(fib_data.modular)
    assert len(invs) == 1
    assert np.array_equal(invs[0], np.eye(2, dtype=np.int64))


def test_su2_4_exactly_two_invariants(su2_4_data):
    invs = enumerate_modular_invariants(su2_4_data.modular)
    assert len(invs) == 2
    keys = {tuple(Z.reshape(-1)) for Z in invs}
    assert tuple(np.eye(5, dtype=np.int64).reshape(-1)) in keys
    block = np.zeros((5, 5), dtype=np.int64)
    block[0, 0] = block[0, 4] = block[4, 0] = block[4, 4] = 1
    block[2, 2] = 2
    assert tuple(block.reshape(-1)) in keys
    # both have the vacuum row sum rule when the vacuum row is unique
    d = su2_4_data.ring.fp_dims
    for Z in invs:
        if np.array_equal(Z[0], np.eye(5, dtype=np.int64)[0]):
            assert np.max(np.abs(Z @ d - d)) < 1e-7


def test_enumeration_deterministic(su2_4_data):
    a = enumerate_modular_invariants(su2_4_data.modular)
    b = enumerate_modular_invariants(su2_4_data.modular)
    assert [Z.tolist() for Z in a] == [Z.tolist() for Z in b]


def test_regular_nimrep_valid(all_catalogs):
    for data in all_catalogs:
        assert regular_nimrep(data.ring).validate() == []


def test_fibonacci_regular_nimrep(fib_data):
    nr = regular_nimrep(fib_data.ring)
    assert nr.matrices[1].tolist() == [[0, 1], [1, 1]]


def test_ising_size3_enumeration_is_regular_orbit(ising_data):
    nims = enumerate_nimreps(ising_data.ring, 3)
    assert len(nims) == 1
    # same orbit as the regular nimrep: identical canonical keys
    from bcft.classify import _canonical_key

    reg = regular_nimrep(ising_data.ring)
    assert _canonical_key(nims[0].matrices, 3) == _canonical_key(reg.matrices, 3)


def test_ising_size2_empty(ising_data):
    assert enumerate_nimreps(ising_data.ring, 2) == []


def test_trivial_ring_size1():
    ring = FusionRing(["0"], [0], np.ones((1, 1, 1), dtype=np.int64))
    nims = enumerate_nimreps(ring, 1)
    assert len(nims) == 1
    assert nims[0].matrices[0].tolist() == [[1]]


def test_fibonacci_size2_is_regular(fib_data):
    nims = enumerate_nimreps(fib_data.ring, 2)
    assert len(nims) == 1
    from bcft.classify import _canonical_key

    assert _canonical_key(nims[0].matrices, 2) == _canonical_key(
        regular_nimrep(fib_data.ring).matrices, 2
    )


def test_cardy_solve_regular(all_catalogs):
    for data in all_catalogs:
        sol = cardy_solve(regular_nimrep(data.ring), data.modular)
        assert sol.residual < 1e-9, data.name
        # psi is S itself up to column phases; with the canonical phase fix
        # it reproduces S entrywise
        assert np.allclose(sol.psi, data.modular.S, atol=1e-9), data.name
        assert sol.exponents == tuple(range(data.ring.size))
        # rows orthonormal
        eye = np.eye(data.ring.size)
        assert np.max(np.abs(sol.psi @ sol.psi.conj().T - eye)) < 1e-9


def test_cardy_trivial():
    ring = FusionRing(["0"], [0], np.ones((1, 1, 1), dtype=np.int64))
    md = ModularData(ring, [[1.0]], [1.0])
    sol = cardy_solve(regular_nimrep(ring), md)
    assert sol.psi.tolist() == [[1.0]]


def test_cardy_rejects_foreign_spectrum(ising_data, fib_data):
    # the Fibonacci regular nimrep against a synthetic S with a foreign spectrum
    nr = regular_nimrep(fib_data.ring)
    with pytest.raises(DataInconsistencyError, match="no modular spectrum"):
        cardy_solve(
            Nimrep(fib_data.ring, nr.matrices),
            ModularData(
                fib_data.ring,
                np.array([[0.8, 0.6], [0.6, -0.8]], dtype=complex),
                np.array([1.0, 1.0j]),
            ),
        )


def test_compatibility_tables(ising_data, fib_data):
    reg = regular_nimrep(ising_data.ring)
    ok, table = compatibility(np.eye(3, dtype=np.int64), reg, ising_data.modular)
    assert ok and table == {0: 1, 1: 1, 2: 1}
    Zbad = np.eye(3, dtype=np.int64)
    Zbad[2, 2] = 0  # synthetic, not an invariant
    ok, _ = compatibility(Zbad, reg, ising_data.modular)
    assert not ok
    ok, _ = compatibility(
        np.eye(2, dtype=np.int64), regular_nimrep(fib_data.ring), fib_data.modular
    )
    assert ok


def test_su2_4_block_invariant_has_d4_nimrep(su2_4_data):
    # trace 4 invariant: a size-4 nimrep compatible with it exists
    block = np.zeros((5, 5), dtype=np.int64)
    block[0, 0] = block[0, 4] = block[4, 0] = block[4, 4] = 1
    block[2, 2] = 2
    nims = enumerate_nimreps(su2_4_data.ring, 4)
    compatible = [nr for nr in nims if compatibility(block, nr, su2_4_data.modular)[0]]
    assert len(compatible) >= 1
