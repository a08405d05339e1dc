"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are pinned here and nowhere else.
"""
import numpy as np
import pytest

from udwqc.channels import build_channel, unitary_channel
from udwqc.field import fock_realize, make_model
from udwqc.gates import build_gate, verify_truth_table
from udwqc.metrics import (
    build_diamond_pair,
    capacity_n1,
    diamond_distance,
    encode_only_coherent_information,
    unitary_diamond_oracle,
)
from udwqc.noise import (
    NoiseParams,
    crosstalk_factor,
    environment_dephasing_check,
    noisy_capacity,
)

EQ9 = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]], dtype=complex)


def model(lam, **kw):
    return make_model(lam, warn_constraint=False, **kw)


def report(name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {name}: {status}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_gate_identities():
    qst_ok = np.array_equal(build_gate("QST").mat, EQ9)
    c21 = build_gate("CNOT21_Z").mat
    c12 = build_gate("CNOT12").mat
    factor_ok = np.array_equal(build_gate("QST").mat, c21 @ c12)
    swap_ok = np.array_equal(build_gate("SWAP").mat, c21 @ c12 @ c21)
    tables_ok = all(
        verify_truth_table(kind).passed
        for kind in ("X", "Z", "Y", "CNOT12", "CNOT21_Z")
    )
    report(
        "gate identities (QST = 2 CNOTs, SWAP = 3 CNOTs, tables 1-5)",
        qst_ok and factor_ok and swap_ok and tables_ok,
        "exact equality",
    )


def test_coherent_overlap_oracle():
    worst = 0.0
    for lam in np.linspace(0.1, 3.0, 16):
        params = model(float(lam))
        rep = fock_realize(params, beta_max=float(lam) + 0.2)
        plus = rep.coherent_vector(params.alpha_phi)
        minus = rep.coherent_vector(-params.alpha_phi)
        worst = max(worst, abs(abs(np.vdot(plus, minus)) - params.epsilon))
    report("coherent-overlap oracle vs truncated Fock", worst < 1e-10,
           f"max dev {worst:.2e} < 1e-10 on lambda in [0.1, 3]")


def test_backend_equivalence():
    worst = 0.0
    for lam in np.linspace(0.5, 3.0, 6):
        sym = build_channel("FieldQST", model(float(lam)), backend="symbolic")
        fock = build_channel("FieldQST", model(float(lam)), backend="fock")
        worst = max(worst, float(np.max(np.abs(sym.superop - fock.superop))))
    report("backend equivalence of the transfer superoperator", worst < 1e-8,
           f"max entrywise dev {worst:.2e} < 1e-8 on 6-point grid")


def test_capacity_curve():
    lams = np.linspace(0.2, 3.0, 13)
    caps = [capacity_n1(build_channel("FieldQST", model(float(l)))) for l in lams]
    monotone = all(b >= a - 1e-9 for a, b in zip(caps, caps[1:]))
    strong_ok = all(
        cap >= 0.99 for lam, cap in zip(lams, caps) if model(float(lam)).epsilon <= 1e-3
    )
    ideal = capacity_n1(build_channel("QubitQST"))
    ideal_ok = abs(ideal - 1.0) <= 1e-9
    report("capacity curve (monotone, >= 0.99 once eps <= 1e-3, ideal = 1)",
           monotone and strong_ok and ideal_ok,
           f"final {caps[-1]:.6f}, ideal {ideal:.12f}")


def test_diamond_calibration():
    ident = unitary_channel(np.eye(2))
    d_self = diamond_distance(ident, ident, seed=0).value
    self_ok = d_self <= 1e-8

    d_x = diamond_distance(ident, unitary_channel(build_gate("X")), seed=1).value
    x_ok = abs(d_x - 2.0) <= 1e-6
    d_s = diamond_distance(ident, unitary_channel(build_gate("S")), seed=2).value
    s_ok = abs(d_s - np.sqrt(2.0)) <= 1e-6

    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in range(20):
        mats = []
        for _ in range(2):
            a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            q, r = np.linalg.qr(a)
            mats.append(q * (np.diag(r) / np.abs(np.diag(r))))
        oracle = unitary_diamond_oracle(mats[0], mats[1])
        found = diamond_distance(unitary_channel(mats[0]), unitary_channel(mats[1]),
                                 seed=300 + k).value
        worst = max(worst, abs(found - oracle))
    pairs_ok = worst < 1e-5
    report("diamond calibration against the analytic unitary oracle",
           self_ok and x_ok and s_ok and pairs_ok,
           f"d(I,I)={d_self:.1e}, d(I,X)={d_x:.8f}, d(I,S)={d_s:.8f}, "
           f"20-pair max dev {worst:.2e}")


GRID_11 = np.linspace(0.5, 3.0, 11)


def _diamond_sweep(pair):
    values = []
    for k, lam in enumerate(GRID_11):
        ch1, ch2 = build_diamond_pair(pair, model(float(lam)))
        values.append(diamond_distance(ch1, ch2, seed=41 + 7 * k).value)
    return values


@pytest.mark.parametrize("pair", ["qst", "cnot1", "cnot2q"])
def test_diamond_convergence(pair):
    values = _diamond_sweep(pair)
    monotone = all(b <= a + 1e-6 for a, b in zip(values, values[1:]))
    final_ok = values[-1] <= 0.05
    report(f"diamond convergence ({pair} pair, 11-point grid)",
           monotone and final_ok,
           f"first {values[0]:.4f}, final {values[-1]:.4f}")


def test_entanglement_breaking_single_unitary():
    value = encode_only_coherent_information(model(1.0))
    report("rank-one controlled unitary is entanglement breaking",
           value <= 1e-9, f"coherent information {value:.3e} <= 1e-9")


def test_crosstalk_oracle():
    worst = 0.0
    for g in np.linspace(0.01, 4.0, 5):
        for a in np.linspace(0.25, 4.0, 5):
            for b in np.linspace(0.0, 4.0, 5):
                p = NoiseParams(gamma_phi=float(g), alpha_sq=float(a), b=float(b))
                worst = max(worst, abs(crosstalk_factor(p, "closed")
                                       - crosstalk_factor(p, "quadrature")))
    grid_ok = worst < 1e-8
    spot = crosstalk_factor(NoiseParams(gamma_phi=1.0, alpha_sq=1.0, b=1.0), "closed")
    spot_ok = abs(spot - 0.299776) <= 1e-6
    report("cross-talk closed form vs quadrature oracle",
           grid_ok and spot_ok,
           f"125-point max dev {worst:.2e}, spot value {spot:.6f}")


def test_environment_dephasing_null_result():
    worst = 0.0
    for gamma_e in (0.5, 5.0):
        rep = environment_dephasing_check(gamma_e, model(2.0))
        worst = max(worst, rep.capacity_difference)
    report("environment dephasing leaves the capacity unchanged",
           worst < 1e-6, f"max capacity change {worst:.2e} < 1e-6")


def test_noisy_capacity_ordering():
    lams = np.linspace(0.4, 3.0, 8)
    clean = noisy_capacity(lams, b=0.0)
    slowed = noisy_capacity(lams, b=0.5)
    slow_ok = all(r.flag == "ok" for r in slowed) and all(
        rb.value <= rc.value + 1e-9 for rb, rc in zip(slowed, clean)
    )
    small = np.linspace(0.3, 0.9, 4)
    boost = noisy_capacity(small, b=10.0, sign="quadrature-matched")
    base = noisy_capacity(small, b=0.0)
    boost_ok = any(rb.value > rc.value + 1e-9 for rb, rc in zip(boost, base))
    report("noisy capacity ordering (b=0.5 slows, matched b=10 boosts small lambda)",
           slow_ok and boost_ok, "")
