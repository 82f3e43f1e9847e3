"""Party state machines and drivers for the qubit and qudit protocols.

A run is a tree: every projective measurement forks the world into one child
per non-degenerate outcome. ``Enumerate`` walks the whole tree, ``Sample``
follows one path drawn with Born probabilities.

Sampling uses one PCG64 stream per measurement event, spawned from the root
seed with ``numpy.random.SeedSequence(seed).spawn(2)``: stream 0 draws the
first measurement (Alice), stream 1 the second (Alice again for the qubit
protocol, Bob for the qudit protocol).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np

from . import bases, corrections
from .bases import BasisUnavailable
from .qudit import (
    COMPARE_TOL,
    Angles2,
    Angles4,
    Angles8,
    PureState,
    apply_local,
    fidelity,
    from_angles2,
    from_angles4,
    from_angles8,
    ghz,
    measure_branches,
)


class Party(str, enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"
    CHARLIE = "Charlie"


class ProtocolUnavailable(RuntimeError):
    """A protocol stage cannot be built for the requested dimension."""


class ProtocolViolation(RuntimeError):
    """A party acted out of turn or used a channel that does not exist."""


def bit_cost(d: int) -> int:
    return math.ceil(math.log2(d))


@dataclass(frozen=True)
class ClassicalMessage:
    sender: Party
    receiver: Party
    outcome: int
    bit_cost: int

    def as_dict(self):
        return {"from": self.sender.value, "to": self.receiver.value,
                "outcome": self.outcome, "bit_cost": self.bit_cost}


@dataclass(frozen=True, eq=False)
class Correction:
    party: Party
    name: str
    matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class ProtocolTrace:
    protocol: str
    parameters: dict
    outcomes: tuple[int, ...]
    probability: float
    messages: tuple[ClassicalMessage, ...]
    corrections: tuple[Correction, ...]
    collapsed: PureState  # receiver's particle before its final correction
    final_state: PureState
    target: PureState
    fidelity: float

    @property
    def total_bits(self) -> int:
        return comm_cost(self)

    @property
    def succeeded(self) -> bool:
        return self.fidelity >= 1.0 - COMPARE_TOL


@dataclass(frozen=True)
class Sample:
    seed: int


@dataclass(frozen=True)
class Enumerate:
    pass


RunMode = Union[Sample, Enumerate]


def comm_cost(t: ProtocolTrace) -> int:
    return sum(m.bit_cost for m in t.messages)


# --- party machines ---------------------------------------------------------

# Each party walks a fixed linear sequence of phases; any other move is a
# protocol violation.
QUBIT_MACHINES = {
    Party.ALICE: ("ready", "measured_1", "sent_1", "measured_2", "sent_2"),
    Party.BOB: ("waiting", "heard_1", "heard_2", "corrected"),
}
QUDIT_MACHINES = {
    Party.ALICE: ("ready", "measured", "sent"),
    Party.BOB: ("waiting", "heard", "rotated", "measured", "sent"),
    Party.CHARLIE: ("waiting", "heard", "corrected"),
}
QUBIT_ROUTES = frozenset({(Party.ALICE, Party.BOB)})
QUDIT_ROUTES = frozenset({(Party.ALICE, Party.BOB), (Party.BOB, Party.CHARLIE)})


@dataclass(frozen=True, eq=False)
class _World:
    """One node of the run tree. ``owners[i]`` holds subsystem ``i`` of ``state``."""

    state: PureState
    owners: tuple[Party, ...]
    machines: dict
    routes: frozenset
    phases: tuple[tuple[Party, int], ...]
    outcomes: tuple[int, ...] = ()
    probability: float = 1.0
    messages: tuple[ClassicalMessage, ...] = ()
    corrections: tuple[Correction, ...] = ()

    def phase(self, party: Party) -> str:
        return self.machines[party][dict(self.phases)[party]]

    def advance(self, party: Party, to: str) -> "_World":
        pos = dict(self.phases)
        seq = self.machines[party]
        nxt = pos[party] + 1
        if nxt >= len(seq) or seq[nxt] != to:
            raise ProtocolViolation(f"{party.value} cannot move from {seq[pos[party]]!r} to {to!r}")
        pos[party] = nxt
        return replace(self, phases=tuple(pos.items()))

    def subsystem_of(self, party: Party, which: int = 0) -> int:
        held = [i for i, o in enumerate(self.owners) if o is party]
        return held[which]


def _start(state, owners, machines, routes) -> _World:
    return _World(state, owners, machines, routes, tuple((p, 0) for p in machines))


def _measure(world: _World, party: Party, subsystem: int, basis, phase: str) -> list[_World]:
    if world.owners[subsystem] is not party:
        raise ProtocolViolation(f"{party.value} does not hold subsystem {subsystem}")
    world = world.advance(party, phase)
    owners = world.owners[:subsystem] + world.owners[subsystem + 1:]
    return [
        replace(world, state=b.collapsed, owners=owners,
                outcomes=world.outcomes + (b.outcome,),
                probability=world.probability * b.probability)
        for b in measure_branches(world.state, subsystem, basis)
        if not b.degenerate
    ]


def _send(world: _World, sender: Party, receiver: Party, sent: str, heard: str, d: int) -> _World:
    if (sender, receiver) not in world.routes:
        raise ProtocolViolation(f"no classical channel {sender.value} -> {receiver.value}")
    msg = ClassicalMessage(sender, receiver, world.outcomes[-1], bit_cost(d))
    world = world.advance(sender, sent).advance(receiver, heard)
    return replace(world, messages=world.messages + (msg,))


def _local(world: _World, party: Party, u, name: str, phase: str) -> _World:
    world = world.advance(party, phase)
    k = world.subsystem_of(party)
    return replace(world, state=apply_local(u, k, world.state),
                   corrections=world.corrections + (Correction(party, name, np.asarray(u)),))


def _fork(children: list[_World], rng) -> list[_World]:
    if rng is None:
        return children
    cdf = np.cumsum([c.probability for c in children])
    i = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return [children[min(i, len(children) - 1)]]


def _streams(mode: RunMode):
    if isinstance(mode, Enumerate):
        return None, None
    if not isinstance(mode, Sample):
        raise TypeError(f"unknown run mode {mode!r}")
    children = np.random.SeedSequence(mode.seed).spawn(2)
    return tuple(np.random.Generator(np.random.PCG64(s)) for s in children)


def _correct_and_finish(world: _World, party: Party, target: PureState, protocol: str,
                        params: dict, listed: Callable[[tuple[int, ...]], tuple[str, np.ndarray]]):
    """Receiver applies the oracle correction.

    The correction is named after the listed matrix when the two coincide up to
    phase, ``oracle~<listed>`` when they differ as matrices but act identically
    on this state (tied magnitudes), and ``oracle`` otherwise.
    """
    collapsed = world.state
    try:
        m = corrections.derive_monomial_correction(collapsed, target)
        name = "oracle"
        if listed is not None:
            lname, lmat = listed(world.outcomes)
            if corrections.same_up_to_phase(m, lmat):
                name = lname
            elif fidelity(apply_local(lmat, 0, collapsed), target) >= 1.0 - COMPARE_TOL:
                name = f"oracle~{lname}"
    except corrections.NoMonomialCorrection:
        m, name = np.eye(collapsed.dim), "none"
    world = _local(world, party, m, name, "corrected")
    return ProtocolTrace(
        protocol=protocol,
        parameters=params,
        outcomes=world.outcomes,
        probability=world.probability,
        messages=world.messages,
        corrections=world.corrections,
        collapsed=collapsed,
        final_state=world.state,
        target=target,
        fidelity=fidelity(world.state, target),
    )


# --- qubit protocol ---------------------------------------------------------


def run_qubit_rsp(a: Angles2, mode: RunMode = Enumerate()) -> list[ProtocolTrace]:
    """Two-party qubit protocol: Alice holds particles 1 and 2, Bob particle 3.

    Alice measures particle 1 in the real θ basis, announces the outcome,
    then measures particle 2 in the η basis (outcome ``phi``) or the ξ basis
    (outcome ``phi_perp``) and announces again. Bob corrects particle 3.
    """
    target = from_angles2(a)
    rng1, rng2 = _streams(mode)
    world = _start(ghz(3, 2), (Party.ALICE, Party.ALICE, Party.BOB), QUBIT_MACHINES, QUBIT_ROUTES)
    second = (bases.phase_basis(2, (0.0, a.phi)), bases.xi_basis(a.phi))
    traces = []
    for w1 in _fork(_measure(world, Party.ALICE, 0, bases.alice_basis_d2(a.theta), "measured_1"), rng1):
        w1 = _send(w1, Party.ALICE, Party.BOB, "sent_1", "heard_1", 2)
        for w2 in _fork(_measure(w1, Party.ALICE, 0, second[w1.outcomes[0]], "measured_2"), rng2):
            w2 = _send(w2, Party.ALICE, Party.BOB, "sent_2", "heard_2", 2)
            traces.append(_correct_and_finish(
                w2, Party.BOB, target, "qubit", a.as_dict(),
                lambda o: (corrections.table1_name(*o), corrections.table1_correction(*o)),
            ))
    return traces


# --- qudit protocols --------------------------------------------------------


def _qudit_setup(d: int, params):
    if d == 4:
        if not isinstance(params, Angles4):
            raise TypeError("d=4 protocol needs Angles4")
        return (
            from_angles4(params),
            bases.alice_basis_d4(*params.gammas),
            lambda a: (f"U{a}" if a else "I", corrections.bob_intermediate_unitary(a)),
            params.phases,
            lambda o: (corrections.charlie_name(*o), corrections.charlie_correction(*o)),
        )
    if d == 8:
        if not isinstance(params, Angles8):
            raise TypeError("d=8 protocol needs Angles8")
        try:
            alice = bases.alice_basis_d8(params.thetas)
        except BasisUnavailable as exc:
            raise ProtocolUnavailable(str(exc)) from exc
        return (
            from_angles8(params),
            alice,
            lambda a: (f"V{a}" if a else "I", corrections.pattern_intermediate_unitary("octonion", a)),
            params.phis,
            None,
        )
    raise ValueError(f"qudit protocol supports d in (4, 8), got {d}")


def run_qudit_rsp(d: int, params, mode: RunMode = Enumerate()) -> list[ProtocolTrace]:
    """Three-party protocol: Alice (A) knows the magnitudes, Bob (B) the phases, Charlie (C) receives.

    Alice measures A and tells Bob; Bob applies a signed permutation chosen by
    Alice's outcome, measures B in the phase basis and tells Charlie; Charlie
    corrects C.
    """
    target, alice_basis, bob_unitary, phases, listed = _qudit_setup(d, params)
    bob_basis = bases.phase_basis(d, phases)
    rng1, rng2 = _streams(mode)
    world = _start(ghz(3, d), (Party.ALICE, Party.BOB, Party.CHARLIE), QUDIT_MACHINES, QUDIT_ROUTES)
    traces = []
    for w1 in _fork(_measure(world, Party.ALICE, 0, alice_basis, "measured"), rng1):
        w1 = _send(w1, Party.ALICE, Party.BOB, "sent", "heard", d)
        name, u = bob_unitary(w1.outcomes[0])
        w1 = _local(w1, Party.BOB, u, name, "rotated")
        for w2 in _fork(_measure(w1, Party.BOB, 0, bob_basis, "measured"), rng2):
            w2 = _send(w2, Party.BOB, Party.CHARLIE, "sent", "heard", d)
            traces.append(_correct_and_finish(
                w2, Party.CHARLIE, target, f"d{d}", params.as_dict(), listed))
    return traces


def bob_rotated_state(params: Angles4, a_out: int) -> PureState:
    """B⊗C state after Alice's outcome ``a_out`` and Bob's intermediate unitary."""
    branch = measure_branches(ghz(3, 4), 0, bases.alice_basis_d4(*params.gammas))[a_out]
    return apply_local(corrections.bob_intermediate_unitary(a_out), 0, branch.collapsed)


# --- stage-order experiment ---------------------------------------------------


@dataclass(frozen=True)
class OrderBranch:
    outcomes: tuple[int, int]
    probability: float
    best_fixed: str
    best_fixed_fidelity: float
    oracle_fidelity: float
    oracle_matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class StageOrderReport:
    parameters: dict
    theta_first: tuple[OrderBranch, ...]
    phi_first: tuple[OrderBranch, ...]

    @property
    def fixed_set_fails_swapped(self) -> bool:
        return any(b.best_fixed_fidelity < 1 - 1e-3 for b in self.phi_first)

    @property
    def oracle_fixes_swapped(self) -> bool:
        return all(b.oracle_fidelity >= 1 - COMPARE_TOL for b in self.phi_first)

    @property
    def fixed_set_fixes_theta_first(self) -> bool:
        return all(b.best_fixed_fidelity >= 1 - COMPARE_TOL for b in self.theta_first)


def _qubit_receiver_branches(first, second_for) -> list[tuple[tuple[int, int], float, PureState]]:
    out = []
    for b1 in measure_branches(ghz(3, 2), 0, first):
        if b1.degenerate:
            continue
        for b2 in measure_branches(b1.collapsed, 0, second_for(b1.outcome)):
            if not b2.degenerate:
                out.append(((b1.outcome, b2.outcome), b1.probability * b2.probability, b2.collapsed))
    return out


def _score(branches, target) -> tuple[OrderBranch, ...]:
    fixed = corrections.fixed_set_qubit()
    rows = []
    for outcomes, p, collapsed in branches:
        scores = {n: fidelity(apply_local(m, 0, collapsed), target) for n, m in fixed.items()}
        best = max(scores, key=scores.get)
        try:
            m = corrections.derive_monomial_correction(collapsed, target)
            f_or = fidelity(apply_local(m, 0, collapsed), target)
        except corrections.NoMonomialCorrection:
            m, f_or = np.full((2, 2), np.nan), 0.0
        rows.append(OrderBranch(outcomes, p, best, scores[best], f_or, m))
    return tuple(rows)


def stage_order_experiment(a: Angles2) -> StageOrderReport:
    """Compare θ-first and φ-first measurement orders for the qubit protocol.

    Each branch is scored by the best fidelity reachable with the fixed set
    ``{I, σ_x, σ_z, σ_z σ_x}`` and by the oracle's (φ-dependent) monomial.
    """
    target = from_angles2(a)
    theta_basis = bases.alice_basis_d2(a.theta)
    eta = bases.phase_basis(2, (0.0, a.phi))
    xi = bases.xi_basis(a.phi)
    normal = _qubit_receiver_branches(theta_basis, lambda o: (eta, xi)[o])
    swapped = _qubit_receiver_branches(eta, lambda o: theta_basis)
    return StageOrderReport(a.as_dict(), _score(normal, target), _score(swapped, target))


def non_adaptive_control(a: Angles2) -> tuple[OrderBranch, ...]:
    """θ-first order but always measuring particle 2 in the η basis."""
    eta = bases.phase_basis(2, (0.0, a.phi))
    branches = _qubit_receiver_branches(bases.alice_basis_d2(a.theta), lambda o: eta)
    return _score(branches, from_angles2(a))
