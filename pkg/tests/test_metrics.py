import numpy as np
import pytest

from udwqc.channels import build_channel, channel_from_apply, unitary_channel
from udwqc.field import make_model
from udwqc.gates import build_gate
from udwqc.metrics import (
    capacity_n1,
    coherent_information,
    diamond_distance,
    sweep_capacity,
    sweep_diamond,
    unitary_diamond_oracle,
)
from udwqc.operators import entropy


def model(lam, **kw):
    return make_model(lam, warn_constraint=False, **kw)


def depolarizing(p=1.0):
    def apply(rho):
        return (1 - p) * rho + p * np.trace(rho) * np.eye(2, dtype=complex) / 2.0

    return channel_from_apply(apply, 2, 2, recipe={"kind": "depolarizing", "p": p})


def random_unitary(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


MAX_ENT = np.eye(2, dtype=complex) / 2.0


def test_identity_channel_coherent_information():
    ch = unitary_channel(np.eye(2))
    assert coherent_information(ch, MAX_ENT) == pytest.approx(1.0, abs=1e-12)
    assert capacity_n1(ch) == pytest.approx(1.0, abs=1e-12)


def test_depolarizing_coherent_information():
    assert coherent_information(depolarizing(1.0), MAX_ENT) == pytest.approx(-1.0, abs=1e-10)


def test_coherent_information_backends_agree():
    for backend in ("symbolic", "fock"):
        ch = build_channel("FieldQST", model(3.0), backend=backend)
        val = capacity_n1(ch)
        assert val >= 0.99
    sym = capacity_n1(build_channel("FieldQST", model(3.0), backend="symbolic"))
    fock = capacity_n1(build_channel("FieldQST", model(3.0), backend="fock"))
    assert sym == pytest.approx(fock, abs=1e-6)


def test_coherent_information_bounded_by_input_entropy():
    rng = np.random.default_rng(2)
    for seed in range(3):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = a @ a.conj().T
        rho /= np.trace(rho)
        for ch in (unitary_channel(random_unitary(2, rng)), depolarizing(0.3)):
            assert coherent_information(ch, rho) <= entropy(rho) + 1e-9


def test_coherent_information_rejects_bad_input():
    ch = unitary_channel(np.eye(2))
    with pytest.raises(ValueError):
        coherent_information(ch, np.diag([0.9, 0.4]))


def test_capacity_refinement_never_lower():
    ch = build_channel("FieldQST", model(1.2))
    base = capacity_n1(ch)
    refined = capacity_n1(ch, refine=True)
    assert refined >= base - 1e-12


def test_entanglement_breaking_single_unitary():
    from udwqc.metrics import encode_only_coherent_information

    for lam in (0.8, 1.5):
        assert encode_only_coherent_information(model(lam)) <= 1e-9


def test_diamond_self_distance_vanishes():
    for ch in (unitary_channel(np.eye(2)), build_channel("FieldQST", model(1.0))):
        res = diamond_distance(ch, ch, n_coarse=500, top_k=3, seed=1)
        assert res.value < 1e-8


def test_diamond_identity_vs_x():
    res = diamond_distance(unitary_channel(np.eye(2)), unitary_channel(build_gate("X")),
                           n_coarse=4000, top_k=8, seed=3)
    assert res.value == pytest.approx(2.0, abs=1e-6)
    assert res.converged


def test_diamond_identity_vs_s():
    res = diamond_distance(unitary_channel(np.eye(2)), unitary_channel(build_gate("S")),
                           n_coarse=4000, top_k=8, seed=3)
    assert res.value == pytest.approx(np.sqrt(2.0), abs=1e-6)


def test_diamond_deterministic_under_seed():
    a = unitary_channel(build_gate("T"))
    b = unitary_channel(np.eye(2))
    r1 = diamond_distance(a, b, n_coarse=1000, top_k=4, seed=9)
    r2 = diamond_distance(a, b, n_coarse=1000, top_k=4, seed=9)
    assert r1.value == r2.value
    assert np.array_equal(r1.argmax_state, r2.argmax_state)


def test_diamond_objective_reproduces_value():
    from udwqc.metrics import _objective_factory

    ch1 = unitary_channel(build_gate("S"))
    ch2 = unitary_channel(np.eye(2))
    res = diamond_distance(ch1, ch2, n_coarse=2000, top_k=5, seed=5)
    objective = _objective_factory(ch1.tensor - ch2.tensor, 2, 2)
    assert objective(res.argmax_state) == pytest.approx(res.value, abs=1e-9)


def test_diamond_dimension_mismatch():
    with pytest.raises(ValueError):
        diamond_distance(unitary_channel(np.eye(2)), unitary_channel(np.eye(4)))


def test_oracle_unitary_pairs():
    assert unitary_diamond_oracle(np.eye(2), np.eye(2)) == 0.0
    assert unitary_diamond_oracle(build_gate("X"), np.eye(2)) == pytest.approx(2.0)
    assert unitary_diamond_oracle(build_gate("S"), np.eye(2)) == pytest.approx(np.sqrt(2.0))
    # Eigenvalues {1, i}: nu = cos(pi/4), d = 2 sqrt(1 - 1/2) = sqrt(2).
    assert unitary_diamond_oracle(build_gate("T"), np.eye(2)) == pytest.approx(
        2.0 * np.sqrt(1.0 - np.cos(np.pi / 8) ** 2)
    )


def test_oracle_rejects_nonunitary():
    with pytest.raises(ValueError):
        unitary_diamond_oracle(np.diag([1.0, 2.0]), np.eye(2))


def test_optimizer_matches_oracle_on_random_pairs():
    rng = np.random.default_rng(123)
    for k in range(6):
        u = random_unitary(2, rng)
        v = random_unitary(2, rng)
        oracle = unitary_diamond_oracle(u, v)
        res = diamond_distance(unitary_channel(u), unitary_channel(v),
                               n_coarse=3000, top_k=8, seed=100 + k)
        assert res.value == pytest.approx(oracle, abs=1e-5), k


def test_triangle_inequality_spot_check():
    rng = np.random.default_rng(77)
    chans = [unitary_channel(random_unitary(2, rng)) for _ in range(3)]
    kw = dict(n_coarse=2000, top_k=5)
    d12 = diamond_distance(chans[0], chans[1], seed=1, **kw).value
    d23 = diamond_distance(chans[1], chans[2], seed=2, **kw).value
    d13 = diamond_distance(chans[0], chans[2], seed=3, **kw).value
    assert d13 <= d12 + d23 + 1e-7


def test_sweep_capacity_rows():
    rows = sweep_capacity([0.5, 1.0, 2.0, 3.0], seed=4)
    values = [r.value for r in rows]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert values[-1] > 0.99
    assert all(r.metric == "capacity" for r in rows)


def test_sweep_diamond_rows_decrease():
    rows = sweep_diamond("qst", [0.8, 1.5, 2.5], seed=6, n_coarse=2000, top_k=5)
    values = [r.value for r in rows]
    assert all(b <= a + 1e-6 for a, b in zip(values, values[1:]))
    assert values[-1] <= 0.05
    assert all(r.extra["starts"] == 5 for r in rows)


def test_sweep_identity_pair_is_zero():
    rows = sweep_diamond("qst", [2.5], seed=0, n_coarse=500, top_k=3)
    assert rows[0].value < 0.01


def test_sweep_dispatcher():
    from udwqc.metrics import sweep

    rows = sweep("capacity", [1.0, 2.0])
    assert [r.metric for r in rows] == ["capacity", "capacity"]
    with pytest.raises(ValueError):
        sweep("capacity", [])
    with pytest.raises(ValueError):
        sweep("fidelity", [1.0])
