"""Two-party sessions with an auditable message transcript.

The source hands each party its frame (distribution phase).  From then on
each party measures with nothing but its own frame, its own setting and
its own random stream; the transcript records every message that crosses
between participants so the absence of A<->B traffic can be checked.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats

from .generators import Frame, ParticleKind, expectation, generator, outcome_probability
from .rng import DOMAIN_PARTY_A, DOMAIN_PARTY_B, DOMAIN_SOURCE, TrialStream
from .source import produce_pair

DISTRIBUTION = "distribution"
MEASUREMENT = "measurement"
PARTIES = ("A", "B")


@dataclass(frozen=True)
class Message:
    round: int
    phase: str
    sender: str
    receiver: str
    payload: str = ""

    def to_json(self) -> str:
        return json.dumps({"phase": self.phase, "sender": self.sender,
                           "receiver": self.receiver, "round": self.round,
                           "payload": self.payload}, sort_keys=True)


@dataclass
class Transcript:
    messages: list[Message] = field(default_factory=list)

    def record(self, msg: Message) -> None:
        self.messages.append(msg)

    def count(self, phase: Optional[str] = None, between=None) -> int:
        """Messages in ``phase`` (any if None) whose endpoints are both in ``between``."""
        n = 0
        for m in self.messages:
            if phase is not None and m.phase != phase:
                continue
            if between is not None and not (m.sender in between and m.receiver in between):
                continue
            n += 1
        return n

    def inter_party_count(self, phase: str = MEASUREMENT) -> int:
        return self.count(phase, between=PARTIES)

    def to_lines(self) -> str:
        """One JSON object per line: phase, sender, receiver, round, payload."""
        return "".join(m.to_json() + "\n" for m in self.messages)

    @classmethod
    def from_lines(cls, text: str) -> Transcript:
        out = cls()
        for line in text.splitlines():
            if line.strip():
                d = json.loads(line)
                out.record(Message(d["round"], d["phase"], d["sender"], d["receiver"],
                                   d.get("payload", "")))
        return out


@dataclass
class PartyState:
    """One measuring station.  It only ever sees its own frame and setting."""

    identity: str
    seed: int
    frame: Optional[Frame] = None
    log: list[tuple[object, int]] = field(default_factory=list)
    # only set by fault injection; a healthy party never learns this
    leaked_setting: object = None

    def receive(self, frame: Frame) -> None:
        self.frame = frame

    def measure(self, setting, round_index: int, fault: Optional[SignalingFault] = None) -> int:
        if self.frame is None:
            raise RuntimeError(f"party {self.identity} has no particle to measure")
        domain = DOMAIN_PARTY_A if self.identity == "A" else DOMAIN_PARTY_B
        rng = TrialStream(self.seed, round_index, domain)
        p = outcome_probability(expectation(generator(setting, self.frame)))
        if fault is not None and self.leaked_setting == fault.trigger:
            p = min(1.0, p + fault.bias)
        outcome = 1 if rng.random() < p else -1
        # the particle is consumed by the measurement
        self.frame = None
        self.leaked_setting = None
        self.log.append((setting, outcome))
        return outcome


@dataclass(frozen=True)
class SignalingFault:
    """Deliberate leak used to test the harness: B tells A its setting, and
    A's probability of +1 rises by ``bias`` whenever that setting is ``trigger``."""

    bias: float
    trigger: object


@dataclass
class SessionResult:
    transcript: Transcript
    log_a: list[tuple[object, int]]
    log_b: list[tuple[object, int]]


def run_session(kind, schedule, seed: int, fault: Optional[SignalingFault] = None) -> SessionResult:
    """Run one round per ``(a, b)`` entry of ``schedule``."""
    kind = ParticleKind.parse(kind)
    schedule = list(schedule)
    if not schedule:
        raise ValueError("schedule must not be empty")
    transcript = Transcript()
    party_a = PartyState("A", seed)
    party_b = PartyState("B", seed)
    for n, (a, b) in enumerate(schedule):
        pair = produce_pair(kind, TrialStream(seed, n, DOMAIN_SOURCE))
        party_a.receive(pair.frame_1)
        transcript.record(Message(n, DISTRIBUTION, "source", "A", "frame_1"))
        party_b.receive(pair.frame_2)
        transcript.record(Message(n, DISTRIBUTION, "source", "B", "frame_2"))
        if fault is not None:
            party_a.leaked_setting = b
            transcript.record(Message(n, MEASUREMENT, "B", "A", "setting"))
        party_a.measure(a, n, fault)
        party_b.measure(b, n)
    return SessionResult(transcript, party_a.log, party_b.log)


@dataclass(frozen=True)
class NoSignalingReport:
    status: str  # "pass", "fail" or "inconclusive"
    statistic: float  # |z|, or the normal-equivalent of a chi-square p-value
    p_value: float
    threshold: float
    groups: dict

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _group_test(groups: dict) -> tuple[float, float]:
    """Return ``(|z| or z-equivalent, two-sided p)`` for equal P(+1) across groups."""
    keys = list(groups)
    plus = np.array([groups[k][0] for k in keys], dtype=float)
    n = np.array([groups[k][1] for k in keys], dtype=float)
    if len(keys) == 2:
        p1, p2 = plus / n
        pooled = plus.sum() / n.sum()
        se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n[0] + 1.0 / n[1]))
        z = 0.0 if se == 0.0 else (p1 - p2) / se
        return float(abs(z)), float(2.0 * stats.norm.sf(abs(z)))
    table = np.stack([plus, n - plus], axis=1)
    if np.any(table.sum(axis=0) == 0):
        return 0.0, 1.0
    _, p, _, _ = stats.chi2_contingency(table, correction=False)
    return float(stats.norm.isf(p / 2.0)), float(p)


def verify_no_signaling(local_log, remote_log, threshold: float = 4.0,
                        min_samples: int = 1000) -> NoSignalingReport:
    """Test whether the local party's P(+1) depends on the remote setting.

    Rounds are grouped by local setting; within each, the local outcomes are
    split by the remote setting of the same round and compared with a
    two-proportion z test (chi-square for more than two groups).  The worst
    local setting decides.  Fewer than two remote groups, or a group below
    ``min_samples``, gives ``"inconclusive"``.
    """
    if len(local_log) != len(remote_log):
        raise ValueError("logs must cover the same rounds")
    counts: dict = defaultdict(lambda: defaultdict(lambda: [0, 0]))
    for (a, o), (b, _) in zip(local_log, remote_log):
        c = counts[a][b]
        c[0] += o == 1
        c[1] += 1
    groups = {a: {b: tuple(v) for b, v in g.items()} for a, g in counts.items()}
    tested = [g for g in groups.values()
              if len(g) >= 2 and all(n >= min_samples for _, n in g.values())]
    if not tested:
        return NoSignalingReport("inconclusive", math.nan, math.nan, threshold, groups)
    worst_z, worst_p = 0.0, 1.0
    for g in tested:
        z, p = _group_test(g)
        if z >= worst_z:
            worst_z, worst_p = z, p
    status = "pass" if worst_z < threshold else "fail"
    return NoSignalingReport(status, worst_z, worst_p, threshold, groups)
