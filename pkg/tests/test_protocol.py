import collections
import math

import numpy as np
import pytest

from ghzrsp import protocol
from ghzrsp.bases import BasisUnavailable
from ghzrsp.protocol import (
    ClassicalMessage,
    Enumerate,
    Party,
    ProtocolUnavailable,
    ProtocolViolation,
    QUBIT_MACHINES,
    QUBIT_ROUTES,
    Sample,
    bit_cost,
    bob_rotated_state,
    comm_cost,
    non_adaptive_control,
    run_qubit_rsp,
    run_qudit_rsp,
    stage_order_experiment,
)
from ghzrsp.qudit import Angles2, Angles4
from ghzrsp.sampling import random_angles2, random_angles4, random_angles8, rng_for

PI = math.pi
EXAMPLE2 = Angles2(PI / 3, PI / 5)
EXAMPLE4 = Angles4(PI / 4, PI / 4, PI / 4, PI / 3, PI / 5, PI / 7)


def assert_deterministic(traces, d):
    assert len(traces) == d * d
    assert sorted(t.outcomes for t in traces) == [(a, b) for a in range(d) for b in range(d)]
    for t in traces:
        assert abs(t.probability - 1 / d ** 2) <= 1e-12
        assert t.fidelity >= 1 - 1e-12
        assert t.succeeded


# --- qubit -------------------------------------------------------------------


def test_qubit_example_enumerate():
    traces = run_qubit_rsp(EXAMPLE2, Enumerate())
    assert_deterministic(traces, 2)
    assert [t.corrections[-1].name for t in traces] == ["I", "sigma_z", "sigma_z*sigma_x", "sigma_x"]


def test_qubit_pole_state():
    for t in run_qubit_rsp(Angles2(0.0, 0.0)):
        assert t.fidelity >= 1 - 1e-12
        assert abs(t.final_state.amps[0]) == pytest.approx(1.0, abs=1e-12)


def test_qubit_sample_seed7():
    traces = run_qubit_rsp(EXAMPLE2, Sample(7))
    assert len(traces) == 1
    assert traces[0].fidelity >= 1 - 1e-12
    assert traces[0].total_bits == 2


def test_qubit_messages():
    for t in run_qubit_rsp(EXAMPLE2):
        assert len(t.messages) == 2
        assert all(m.sender is Party.ALICE and m.receiver is Party.BOB for m in t.messages)
        assert [m.outcome for m in t.messages] == list(t.outcomes)
        assert [m.bit_cost for m in t.messages] == [1, 1]
        assert [c.party for c in t.corrections] == [Party.BOB]


def test_qubit_random_determinism(rng):
    for _ in range(50):
        assert_deterministic(run_qubit_rsp(random_angles2(rng)), 2)


def test_first_stage_uniform(rng):
    for _ in range(20):
        traces = run_qubit_rsp(random_angles2(rng))
        for a in (0, 1):
            p = sum(t.probability for t in traces if t.outcomes[0] == a)
            assert abs(p - 0.5) <= 1e-12


def test_sample_is_one_of_enumerated(rng):
    a = random_angles2(rng)
    outs = {t.outcomes for t in run_qubit_rsp(a)}
    for seed in range(20):
        (t,) = run_qubit_rsp(a, Sample(seed))
        assert t.outcomes in outs


def test_sample_reproducible():
    a = run_qubit_rsp(EXAMPLE2, Sample(123))[0]
    b = run_qubit_rsp(EXAMPLE2, Sample(123))[0]
    assert a.outcomes == b.outcomes
    assert np.array_equal(a.final_state.amps, b.final_state.amps)


def test_unknown_mode():
    with pytest.raises(TypeError):
        run_qubit_rsp(EXAMPLE2, "enumerate")


def _frequency_check(outcomes, d, n):
    counts = collections.Counter(outcomes)
    p = 1 / d ** 2
    se = math.sqrt(p * (1 - p) / n)
    assert set(counts) == {(a, b) for a in range(d) for b in range(d)}
    for c in counts.values():
        assert abs(c / n - p) <= 3 * se


def test_qubit_sampling_frequencies():
    n = 100_000
    outs = [run_qubit_rsp(EXAMPLE2, Sample(s))[0].outcomes for s in range(n)]
    _frequency_check(outs, 2, n)


# --- adaptivity and stage order ---------------------------------------------


def test_non_adaptive_control_breaks_fixed_set():
    rows = non_adaptive_control(EXAMPLE2)
    assert any(r.best_fixed_fidelity < 1 - 1e-3 for r in rows if r.outcomes[0] == 1)
    assert all(r.best_fixed_fidelity >= 1 - 1e-12 for r in rows if r.outcomes[0] == 0)


def test_stage_order_example():
    rep = stage_order_experiment(EXAMPLE2)
    assert rep.fixed_set_fixes_theta_first
    assert rep.fixed_set_fails_swapped
    assert rep.oracle_fixes_swapped
    bad = [b for b in rep.phi_first if b.best_fixed_fidelity < 1 - 1e-3]
    assert any(b.outcomes[1] == 1 for b in bad)


def test_stage_order_real_state():
    rep = stage_order_experiment(Angles2(PI / 2, 0.0))
    assert not rep.fixed_set_fails_swapped
    assert all(b.best_fixed_fidelity >= 1 - 1e-12 for b in rep.phi_first)


@pytest.mark.parametrize("phi", [0.0, 1.0, 4.0])
def test_stage_order_pole(phi):
    rep = stage_order_experiment(Angles2(0.0, phi))
    assert all(b.oracle_fidelity >= 1 - 1e-12 for b in rep.theta_first + rep.phi_first)


def test_swapped_oracle_is_phi_dependent():
    m1 = stage_order_experiment(Angles2(PI / 3, 0.5)).phi_first
    m2 = stage_order_experiment(Angles2(PI / 3, 1.5)).phi_first
    assert any(not np.allclose(a.oracle_matrix, b.oracle_matrix) for a, b in zip(m1, m2))


# --- qudit -------------------------------------------------------------------


def test_d4_example():
    traces = run_qudit_rsp(4, EXAMPLE4)
    assert_deterministic(traces, 4)
    for t in traces:
        assert t.total_bits == 4
        assert [(m.sender, m.receiver) for m in t.messages] == [
            (Party.ALICE, Party.BOB), (Party.BOB, Party.CHARLIE)]
        assert [c.party for c in t.corrections] == [Party.BOB, Party.CHARLIE]


def test_d4_random(rng):
    for _ in range(10):
        assert_deterministic(run_qudit_rsp(4, random_angles4(rng)), 4)


def test_d4_gamma_zero_delivers_ground_state():
    traces = run_qudit_rsp(4, Angles4(0, 0, 0, 0.3, 0.4, 0.5))
    # the GHZ marginal is maximally mixed, so no branch degenerates here
    assert len(traces) == 16
    for t in traces:
        assert abs(abs(t.final_state.amps[0]) - 1) <= 1e-12


def test_rotated_branch1_coefficients(rng):
    for _ in range(20):
        a = random_angles4(rng)
        g1, g2, g3 = a.gammas
        s1, s2 = math.sin(g1), math.sin(g2)
        want = np.zeros(16)
        want[1 * 4 + 0] = s1 * math.cos(g2)
        want[0 * 4 + 1] = math.cos(g1)
        want[3 * 4 + 2] = s1 * s2 * math.sin(g3)
        want[2 * 4 + 3] = s1 * s2 * math.cos(g3)
        got = bob_rotated_state(a, 1).amps
        assert np.max(np.abs(got - want)) <= 1e-12


def test_d4_listed_names_used():
    traces = run_qudit_rsp(4, Angles4(0.3, 0.7, 1.1, 0.2, 0.4, 0.6))
    names = {t.outcomes: t.corrections[-1].name for t in traces}
    assert names[1, 0] == "U0(C)"
    assert names[0, 1] == "diag(1,i,-1,-i)"


def test_d4_tied_magnitudes_named_after_listed_action():
    # γ3 = π/4 ties the last two magnitudes; the oracle's matrix differs but acts the same
    names = {t.outcomes: t.corrections[-1].name for t in run_qudit_rsp(4, EXAMPLE4)}
    assert names[1, 0] == "oracle~U0(C)"


def test_d4_wrong_params():
    with pytest.raises(TypeError):
        run_qudit_rsp(4, EXAMPLE2)
    with pytest.raises(ValueError):
        run_qudit_rsp(6, EXAMPLE4)


def test_d8_enumerate():
    a = random_angles8(rng_for(3))
    traces = run_qudit_rsp(8, a)
    assert_deterministic(traces, 8)
    assert {t.total_bits for t in traces} == {6}
    assert {t.corrections[-1].name for t in traces} == {"oracle"}


def test_d8_unavailable(monkeypatch):
    def broken(_thetas):
        raise BasisUnavailable("pattern rejected")

    monkeypatch.setattr(protocol.bases, "alice_basis_d8", broken)
    with pytest.raises(ProtocolUnavailable):
        run_qudit_rsp(8, random_angles8(rng_for(0)))


# --- cost and message discipline --------------------------------------------


def test_bit_cost():
    assert [bit_cost(d) for d in (2, 4, 8)] == [1, 2, 3]


def test_comm_cost_values():
    assert comm_cost(run_qubit_rsp(EXAMPLE2)[0]) == 2
    assert comm_cost(run_qudit_rsp(4, EXAMPLE4)[0]) == 4
    assert comm_cost(run_qudit_rsp(8, random_angles8(rng_for(1)))[0]) == 6


def test_message_dict():
    m = ClassicalMessage(Party.BOB, Party.CHARLIE, 3, 2)
    assert m.as_dict() == {"from": "Bob", "to": "Charlie", "outcome": 3, "bit_cost": 2}


def _qubit_world():
    return protocol._start(protocol.ghz(3, 2), (Party.ALICE, Party.ALICE, Party.BOB),
                           QUBIT_MACHINES, QUBIT_ROUTES)


def test_no_channel_bob_to_alice():
    w = _qubit_world()
    with pytest.raises(ProtocolViolation):
        protocol._send(w, Party.BOB, Party.ALICE, "sent_1", "heard_1", 2)


def test_bob_cannot_correct_before_hearing():
    w = _qubit_world()
    with pytest.raises(ProtocolViolation):
        protocol._local(w, Party.BOB, np.eye(2), "I", "corrected")


def test_alice_cannot_send_before_measuring():
    w = _qubit_world()
    with pytest.raises(ProtocolViolation):
        w.advance(Party.ALICE, "sent_1")


def test_cannot_measure_other_party_particle():
    from ghzrsp.bases import alice_basis_d2

    w = _qubit_world()
    with pytest.raises(ProtocolViolation):
        protocol._measure(w, Party.BOB, 0, alice_basis_d2(0.3), "measured_1")


def test_trace_targets():
    for t in run_qubit_rsp(EXAMPLE2):
        assert t.parameters == {"theta": PI / 3, "phi": PI / 5}
        assert t.target.dims == (2,)
        assert t.collapsed.dims == (2,)
