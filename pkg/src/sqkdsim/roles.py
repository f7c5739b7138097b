"""Participant state machines and the per-round transcript.

One round: the quantum sender (Alice) prepares a composite state from S1 or
S2 and sends one subsystem down each link.  Each classical receiver (Bob1 on
the 9-dim link, Bob2 on the 3-dim link) either measures in the computational
basis and returns the post-measurement state, or reflects the state untouched.
Alice remeasures whatever comes back in the preparation basis.  After all
rounds, basis choices and measure/reflect choices are disclosed publicly;
outcomes never are.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Optional

from .errors import DimensionMismatchError, IncompleteTranscriptError
from .qudit import Basis, StateVector, measure, prepare_s1, prepare_s2
from .rng import RngStream

if TYPE_CHECKING:  # pragma: no cover
    from .channel import ChannelSet


class BobAction(Enum):
    """A classical receiver's per-round choice."""

    MEASURE = "measure"
    REFLECT = "reflect"


@dataclass(frozen=True)
class PreparationRecord:
    """Alice's per-round secret: composite basis and first-subsystem index."""

    basis: Basis
    a: int

    def __post_init__(self):
        if not self.basis.is_composite:
            raise ValueError(f"preparation basis must be S1 or S2, got {self.basis}")
        if not 0 <= self.a <= 8:
            raise ValueError(f"preparation index must be in 0..8, got {self.a}")


@dataclass(frozen=True)
class RoundRecord:
    """Complete transcript entry for one round.

    ``lost`` marks rounds where a channel dropped a subsystem; fields after
    the loss point stay None.  In non-lost rounds every field is populated
    and ``bobN_outcome`` is present iff the corresponding action is MEASURE.
    """

    round_id: int
    prep: PreparationRecord
    action1: Optional[BobAction]
    action2: Optional[BobAction]
    bob1_outcome: Optional[int]
    bob2_outcome: Optional[int]
    alice_remeasure1: Optional[int]
    alice_remeasure2: Optional[int]
    lost: bool = False

    @property
    def alice_remeasure_basis(self) -> Basis:
        """Alice always remeasures in the basis she prepared in."""
        return self.prep.basis

    def __post_init__(self):
        if self.round_id < 0:
            raise ValueError("round_id must be non-negative")
        for action, outcome, dim in (
            (self.action1, self.bob1_outcome, 9),
            (self.action2, self.bob2_outcome, 3),
        ):
            if action is BobAction.MEASURE:
                if outcome is None or not 0 <= outcome < dim:
                    raise ValueError(f"MEASURE requires an outcome in 0..{dim - 1}")
            elif outcome is not None:
                raise ValueError("outcome present without a MEASURE action")
        if not self.lost:
            if self.action1 is None or self.action2 is None:
                raise ValueError("non-lost round is missing a Bob action")
            if self.alice_remeasure1 is None or self.alice_remeasure2 is None:
                raise ValueError("non-lost round is missing a remeasurement")


@dataclass
class Transcript:
    """Ordered round records plus a digest of the run configuration."""

    rounds: list[RoundRecord]
    config_digest: str = ""

    def __post_init__(self):
        for i, record in enumerate(self.rounds):
            if record.round_id != i:
                raise IncompleteTranscriptError(
                    f"round ids must be contiguous from 0; position {i} holds id {record.round_id}"
                )

    def __len__(self) -> int:
        return len(self.rounds)


@dataclass(frozen=True)
class DisclosureSet:
    """Exactly what step 4 makes public: three round-id lists, nothing else."""

    s1_rounds: tuple[int, ...]
    bob1_measured: tuple[int, ...]
    bob2_measured: tuple[int, ...]


@dataclass(frozen=True)
class ForcedRound:
    """Test hook: overrides for the random choices of one round."""

    basis: Optional[Basis] = None
    a: Optional[int] = None
    action1: Optional[BobAction] = None
    action2: Optional[BobAction] = None


def alice_prepare(
    rng: RngStream,
    *,
    basis: Optional[Basis] = None,
    a: Optional[int] = None,
) -> tuple[PreparationRecord, StateVector, StateVector]:
    """Draw a uniform (basis, index) preparation and build both subsystems.

    Forced values skip the corresponding rng draw; unforced choices are
    uniform over {S1, S2} and 0..8.
    """
    if basis is None:
        basis = Basis.S1 if rng.randrange(2) == 0 else Basis.S2
    if a is None:
        a = rng.randrange(9)
    prep = PreparationRecord(basis=basis, a=a)
    if basis is Basis.S1:
        sub1, sub2 = prepare_s1(a)
    else:
        sub1, sub2 = prepare_s2(a)
    return prep, sub1, sub2


def bob_step(
    incoming: StateVector,
    rng: RngStream,
    *,
    action: Optional[BobAction] = None,
) -> tuple[BobAction, Optional[int], StateVector]:
    """One classical receiver step: measure-and-resend or reflect.

    Classical capability constraint: the only measurement this code path can
    perform is computational, and the emitted state is either the received
    one (REFLECT) or a computational basis state (MEASURE).
    """
    if incoming.dim not in (3, 9):
        raise DimensionMismatchError(
            f"classical receivers handle dims 3 and 9, got {incoming.dim}"
        )
    if action is None:
        action = BobAction.MEASURE if rng.randrange(2) == 0 else BobAction.REFLECT
    if action is BobAction.REFLECT:
        return action, None, incoming
    outcome = measure(incoming, Basis.COMPUTATIONAL, rng)
    return action, outcome.index, outcome.post_state


def alice_remeasure(
    returned1: StateVector,
    returned2: StateVector,
    prep: PreparationRecord,
    rng: RngStream,
) -> tuple[int, int]:
    """Measure both returned subsystems in the preparation basis."""
    if returned1.dim != 9 or returned2.dim != 3:
        raise ValueError(
            f"expected returned dims (9, 3), got ({returned1.dim}, {returned2.dim})"
        )
    sub_basis = prep.basis.subsystem
    idx1 = measure(returned1, sub_basis, rng).index
    idx2 = measure(returned2, sub_basis, rng).index
    return idx1, idx2


def remeasure_returned(
    returned1: Optional[StateVector],
    returned2: Optional[StateVector],
    prep: PreparationRecord,
    rng: RngStream,
) -> tuple[Optional[int], Optional[int]]:
    """Remeasure whatever subsystems actually came back (loss-tolerant)."""
    if returned1 is not None and returned2 is not None:
        return alice_remeasure(returned1, returned2, prep, rng)
    sub_basis = prep.basis.subsystem
    idx1 = measure(returned1, sub_basis, rng).index if returned1 is not None else None
    idx2 = measure(returned2, sub_basis, rng).index if returned2 is not None else None
    return idx1, idx2


def run_round(
    round_id: int,
    alice_rng: RngStream,
    bob1_rng: RngStream,
    bob2_rng: RngStream,
    channels: "ChannelSet",
    force: Optional[ForcedRound] = None,
) -> RoundRecord:
    """Execute one full round: prepare, transmit, receive, remeasure.

    Channel loss on either link flags the round as lost; the unaffected
    subsystem still completes its chain.
    """
    from .channel import Direction, Link

    f = force or ForcedRound()
    prep, sub1, sub2 = alice_prepare(alice_rng, basis=f.basis, a=f.a)

    def link_chain(state, link, bob_rng, forced_action):
        forward = channels.transmit(link, Direction.FORWARD, state, round_id)
        if forward is None:
            return None, None, None
        action, outcome, outgoing = bob_step(forward, bob_rng, action=forced_action)
        returned = channels.transmit(link, Direction.BACKWARD, outgoing, round_id)
        return action, outcome, returned

    action1, out1, ret1 = link_chain(sub1, Link.TO_BOB1, bob1_rng, f.action1)
    action2, out2, ret2 = link_chain(sub2, Link.TO_BOB2, bob2_rng, f.action2)
    rem1, rem2 = remeasure_returned(ret1, ret2, prep, alice_rng)

    return RoundRecord(
        round_id=round_id,
        prep=prep,
        action1=action1,
        action2=action2,
        bob1_outcome=out1,
        bob2_outcome=out2,
        alice_remeasure1=rem1,
        alice_remeasure2=rem2,
        lost=ret1 is None or ret2 is None,
    )


def disclose(transcript: Transcript) -> DisclosureSet:
    """Step-4 public disclosure: S1 rounds and each Bob's measured rounds.

    Outcome values and preparation indices are never part of the disclosure.
    """
    s1_rounds = []
    bob1_measured = []
    bob2_measured = []
    for record in transcript.rounds:
        if record.prep.basis is Basis.S1:
            s1_rounds.append(record.round_id)
        if record.action1 is BobAction.MEASURE:
            bob1_measured.append(record.round_id)
        if record.action2 is BobAction.MEASURE:
            bob2_measured.append(record.round_id)
    return DisclosureSet(
        s1_rounds=tuple(s1_rounds),
        bob1_measured=tuple(bob1_measured),
        bob2_measured=tuple(bob2_measured),
    )
