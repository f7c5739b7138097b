"""Channel models for the two links: identity, loss, depolarizing noise,
and intercept-resend eavesdroppers.

A channel stack is an ordered list of :class:`ChannelModel`; each model names
the link it sits on and whether it acts on the forward pass, the backward
pass, or both.  :class:`ChannelSet` bundles the stack with the rng streams
that drive it and logs every eavesdropper outcome.

:func:`detection_probability_oracle` computes exact per-category mismatch
probabilities for Identity/InterceptResend stacks by enumerating every
measurement branch, and serves as the reference for Monte Carlo runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, UnsupportedStrategyError
from .qudit import (
    PROB_FLOOR,
    Basis,
    StateVector,
    basis_state,
    fourier_matrix,
    fourier_state,
    measure,
)
from .rng import RngStream
from .roles import BobAction


class Link(Enum):
    """The two quantum links, named by receiver."""

    TO_BOB1 = "bob1"
    TO_BOB2 = "bob2"

    @property
    def dim(self) -> int:
        return 9 if self is Link.TO_BOB1 else 3


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    BOTH = "both"


class ChannelKind(Enum):
    IDENTITY = "identity"
    LOSS = "loss"
    DEPOLARIZE = "depolarize"
    INTERCEPT_RESEND = "intercept_resend"


@dataclass(frozen=True)
class ChannelModel:
    """One channel element on one link.

    ``probability`` configures LOSS and DEPOLARIZE; ``eve_basis`` configures
    INTERCEPT_RESEND (a single-subsystem basis tag).
    """

    link: Link
    direction: Direction
    kind: ChannelKind
    probability: Optional[float] = None
    eve_basis: Optional[Basis] = None

    def __post_init__(self):
        if self.kind in (ChannelKind.LOSS, ChannelKind.DEPOLARIZE):
            if self.probability is None or not 0.0 <= self.probability <= 1.0:
                raise ValueError(
                    f"{self.kind.value} channel needs a probability in [0, 1], "
                    f"got {self.probability}"
                )
        elif self.probability is not None:
            raise ValueError(f"{self.kind.value} channel takes no probability")
        if self.kind is ChannelKind.INTERCEPT_RESEND:
            if self.eve_basis is None or self.eve_basis.is_composite:
                raise ValueError(
                    "intercept-resend needs a single-subsystem basis "
                    f"(computational or fourier), got {self.eve_basis}"
                )
        elif self.eve_basis is not None:
            raise ValueError(f"{self.kind.value} channel takes no eve_basis")

    def applies(self, link: Link, direction: Direction) -> bool:
        if self.link is not link:
            return False
        return self.direction is Direction.BOTH or self.direction is direction


@dataclass(frozen=True)
class EveRecord:
    """One logged eavesdropper measurement."""

    round_id: int
    link: Link
    direction: Direction
    outcome: int


@dataclass
class EveLog:
    """Accumulated eavesdropper outcomes; entries exist only for
    intercept-resend channels."""

    records: list[EveRecord] = field(default_factory=list)

    def record(self, round_id: int, link: Link, direction: Direction, outcome: int):
        self.records.append(EveRecord(round_id, link, direction, outcome))

    def __len__(self) -> int:
        return len(self.records)


def apply_channel(
    channel: ChannelModel, state: StateVector, rng: RngStream
) -> tuple[Optional[StateVector], Optional[int]]:
    """Apply one channel element to a state.

    Returns ``(state', eve_outcome)``; ``state'`` is None when the state was
    lost, ``eve_outcome`` is non-None only for intercept-resend.
    """
    if state.dim != channel.link.dim:
        raise DimensionMismatchError(
            f"state dim {state.dim} does not match link {channel.link.value} "
            f"(dim {channel.link.dim})"
        )
    if channel.kind is ChannelKind.IDENTITY:
        return state, None
    if channel.kind is ChannelKind.LOSS:
        if rng.bernoulli(channel.probability):
            return None, None
        return state, None
    if channel.kind is ChannelKind.DEPOLARIZE:
        if rng.bernoulli(channel.probability):
            return basis_state(state.dim, rng.randrange(state.dim)), None
        return state, None
    outcome = measure(state, channel.eve_basis, rng)
    return outcome.post_state, outcome.index


class ChannelSet:
    """A channel stack plus the per-(link, pass) rng streams that drive it."""

    def __init__(
        self,
        models: Sequence[ChannelModel],
        rngs: Mapping[tuple[Link, Direction], RngStream],
        eve_log: Optional[EveLog] = None,
    ):
        self.models = tuple(models)
        self.eve_log = eve_log if eve_log is not None else EveLog()
        self._rngs = dict(rngs)
        self._stacks: dict[tuple[Link, Direction], tuple[ChannelModel, ...]] = {}
        for link in Link:
            for direction in (Direction.FORWARD, Direction.BACKWARD):
                stack = tuple(m for m in self.models if m.applies(link, direction))
                self._stacks[(link, direction)] = stack
                if stack and (link, direction) not in self._rngs:
                    raise ValueError(
                        f"no rng stream configured for {link.value}/{direction.value}"
                    )

    @classmethod
    def for_seed(
        cls, models: Sequence[ChannelModel], seed: int, eve_log: Optional[EveLog] = None
    ) -> "ChannelSet":
        """Build the four canonical channel streams from a master seed."""
        rngs = {
            (link, direction): RngStream(seed, f"channel:{link.value}:{direction.value}")
            for link in Link
            for direction in (Direction.FORWARD, Direction.BACKWARD)
        }
        return cls(models, rngs, eve_log)

    def transmit(
        self, link: Link, direction: Direction, state: StateVector, round_id: int
    ) -> Optional[StateVector]:
        """Run a state through the configured stack for one pass of one link."""
        stack = self._stacks[(link, direction)]
        if not stack:
            return state
        rng = self._rngs[(link, direction)]
        current: Optional[StateVector] = state
        for model in stack:
            current, eve_outcome = apply_channel(model, current, rng)
            if eve_outcome is not None:
                self.eve_log.record(round_id, link, direction, eve_outcome)
            if current is None:
                return None
        return current


# --- Exact enumeration oracle -------------------------------------------------

#: Mismatch probabilities for one (basis, action-pair) category, per subsystem.
@dataclass(frozen=True)
class MismatchRates:
    sub1: float
    sub2: float


CategoryKey = tuple[Basis, BobAction, BobAction]


def _measurement_branches(
    branches: list[tuple[float, np.ndarray]], basis_columns: np.ndarray
) -> list[tuple[float, np.ndarray]]:
    """Expand each (probability, amplitude-vector) branch over all outcomes."""
    out = []
    for prob, amps in branches:
        outcome_probs = np.abs(basis_columns.conj().T @ amps) ** 2
        for k, p_k in enumerate(outcome_probs):
            if p_k > PROB_FLOOR:
                out.append((prob * float(p_k), basis_columns[:, k]))
    return out


def _subsystem_mismatch(
    models: Sequence[ChannelModel],
    link: Link,
    prep_basis: Basis,
    a_sub: int,
    action: BobAction,
) -> float:
    """Exact mismatch probability of Alice's remeasurement on one subsystem."""
    d = link.dim
    identity = np.eye(d, dtype=np.complex128)
    fourier = fourier_matrix(d)
    prep_columns = identity if prep_basis is Basis.S1 else fourier

    start = basis_state(d, a_sub) if prep_basis is Basis.S1 else fourier_state(d, a_sub)
    branches: list[tuple[float, np.ndarray]] = [(1.0, start.amps)]

    def channel_pass(branches, direction):
        for model in models:
            if not model.applies(link, direction):
                continue
            if model.kind is ChannelKind.IDENTITY:
                continue
            columns = identity if model.eve_basis is Basis.COMPUTATIONAL else fourier
            branches = _measurement_branches(branches, columns)
        return branches

    branches = channel_pass(branches, Direction.FORWARD)
    if action is BobAction.MEASURE:
        branches = _measurement_branches(branches, identity)
    branches = channel_pass(branches, Direction.BACKWARD)

    target = prep_columns[:, a_sub]
    match = sum(prob * float(np.abs(np.vdot(target, amps)) ** 2) for prob, amps in branches)
    return 1.0 - min(match, 1.0)


def detection_probability_oracle(
    models: Sequence[ChannelModel],
) -> dict[CategoryKey, MismatchRates]:
    """Exact per-category remeasurement mismatch probabilities.

    Enumerates all 18 preparations, both Bob actions per link, and every
    measurement branch introduced by the stack.  Only Identity and
    InterceptResend channels are supported; anything else raises
    :class:`UnsupportedStrategyError`.

    Returns:
        Mapping from (preparation basis, Bob1 action, Bob2 action) to the
        mismatch probability of each subsystem, averaged over the uniform
        preparation index.
    """
    for model in models:
        if model.kind not in (ChannelKind.IDENTITY, ChannelKind.INTERCEPT_RESEND):
            raise UnsupportedStrategyError(
                f"exact enumeration supports identity and intercept-resend only, "
                f"got {model.kind.value}"
            )

    result: dict[CategoryKey, MismatchRates] = {}
    for prep_basis in (Basis.S1, Basis.S2):
        # Subsystem 1 sees a uniform over 0..8; subsystem 2 sees a mod 3,
        # which is uniform over 0..2 for uniform a.
        sub1 = {
            action: float(
                np.mean(
                    [
                        _subsystem_mismatch(models, Link.TO_BOB1, prep_basis, a, action)
                        for a in range(9)
                    ]
                )
            )
            for action in BobAction
        }
        sub2 = {
            action: float(
                np.mean(
                    [
                        _subsystem_mismatch(models, Link.TO_BOB2, prep_basis, t, action)
                        for t in range(3)
                    ]
                )
            )
            for action in BobAction
        }
        for action1 in BobAction:
            for action2 in BobAction:
                result[(prep_basis, action1, action2)] = MismatchRates(
                    sub1=sub1[action1], sub2=sub2[action2]
                )
    return result
