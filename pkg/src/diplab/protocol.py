"""Two-party distributed inner product in the preprocessing model.

An honest initializer hands P1 a random mask ``x0`` and P2 a mask ``y0``
together with ``s0 = <x0, y0>``.  Then:

* P2 sends ``y1 = y - y0``;
* P1 checks ``y1``, draws ``r``, sends ``x1 = x + x0`` and ``r1 = <x, y1> - r``,
  and outputs ``w1 = r``;
* P2 checks ``(x1, r1)`` and outputs ``w2 = <x1, y0> + r1 - s0``.

Malformed messages make the receiver output ``LAMBDA``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Callable

from .field import FieldElement, Rng, fe_sample, modulus
from .linalg import FieldVector, inner_product
from .membership import LAMBDA, RawVector, check_scalar, check_vector, raw
from .wire import DecodeError, decode_msg


@dataclass(frozen=True)
class SetupP1:
    x0: FieldVector


@dataclass(frozen=True)
class SetupP2:
    y0: FieldVector
    s0: FieldElement


@dataclass(frozen=True)
class Msg1:
    y1: RawVector


@dataclass(frozen=True)
class Msg2:
    x1: RawVector
    r1: int


def preprocess(k: int, q, rng: Rng, x0=None, y0=None) -> tuple[SetupP1, SetupP2]:
    """Sample the correlated masks.  ``x0``/``y0`` override the draws."""
    if k < 1:
        raise ValueError("k must be at least 1")
    m = modulus(q)
    x0 = FieldVector(rng.field_array(m.q, k), m) if x0 is None else FieldVector(x0, m)
    y0 = FieldVector(rng.field_array(m.q, k), m) if y0 is None else FieldVector(y0, m)
    if len(x0) != k or len(y0) != k:
        raise ValueError("forced masks must have length k")
    return SetupP1(x0), SetupP2(y0, inner_product(x0, y0))


def p2_round1(y: FieldVector, setup2: SetupP2) -> Msg1:
    return Msg1(raw(y - setup2.y0))


def p1_round2(x: FieldVector, setup1: SetupP1, msg1: Msg1, rng: Rng, r=None):
    """P1's only move.  Returns ``(Msg2, w1)``, or ``LAMBDA`` if ``msg1`` is malformed."""
    x0 = setup1.x0
    if len(x) != len(x0):
        raise ValueError("input length differs from the preprocessed mask length")
    y1 = check_vector(getattr(msg1, "y1", None), len(x0), x0.modulus)
    if y1 is None:
        return LAMBDA
    r = fe_sample(rng, x0.modulus) if r is None else FieldElement(r, x0.modulus)
    x1 = x + x0
    r1 = inner_product(x, y1) - r
    return Msg2(raw(x1), r1.value), r


def p2_finish(setup2: SetupP2, msg2: Msg2):
    """P2's output share, or ``LAMBDA`` if ``msg2`` is malformed."""
    y0 = setup2.y0
    x1 = check_vector(getattr(msg2, "x1", None), len(y0), y0.modulus)
    r1 = check_scalar(getattr(msg2, "r1", None), y0.modulus)
    if x1 is None or r1 is None:
        return LAMBDA
    return inner_product(x1, y0) + r1 - setup2.s0


# ---------------------------------------------------------------------------
# party state machines
# ---------------------------------------------------------------------------


class State(enum.Enum):
    AWAIT_SETUP = "await_setup"
    AWAIT_MSG = "await_msg"
    DONE = "done"
    ABORTED = "aborted"


class ProtocolStateError(RuntimeError):
    pass


def _decode(msg, expected_type):
    if isinstance(msg, (bytes, bytearray, memoryview)):
        try:
            msg = decode_msg(msg)
        except DecodeError:
            return None
    return msg if isinstance(msg, expected_type) else None


class _Party:
    def __init__(self):
        self.state = State.AWAIT_SETUP
        self.output = None

    def _require(self, state: State):
        if self.state is not state:
            raise ProtocolStateError(f"{type(self).__name__} is {self.state.value}, not {state.value}")

    def _abort(self):
        self.state = State.ABORTED
        self.output = LAMBDA


class Party1(_Party):
    """Holds ``x``; waits for the setup, then answers P2's message once."""

    def __init__(self, x: FieldVector, rng: Rng, r=None):
        super().__init__()
        self.x = x
        self.rng = rng
        self._forced_r = r
        self.setup = None

    def receive_setup(self, setup: SetupP1):
        self._require(State.AWAIT_SETUP)
        self.setup = setup
        self.state = State.AWAIT_MSG

    def receive(self, msg) -> Msg2 | None:
        """Process P2's message (object or bytes); return the reply or ``None`` on abort."""
        self._require(State.AWAIT_MSG)
        msg1 = _decode(msg, Msg1)
        if msg1 is None:
            self._abort()
            return None
        res = p1_round2(self.x, self.setup, msg1, self.rng, r=self._forced_r)
        if res is LAMBDA:
            self._abort()
            return None
        reply, self.output = res
        self.state = State.DONE
        return reply


class Party2(_Party):
    """Holds ``y``; speaks first after setup, then waits for P1's reply."""

    def __init__(self, y: FieldVector):
        super().__init__()
        self.y = y
        self.setup = None
        self._sent = False

    def receive_setup(self, setup: SetupP2):
        self._require(State.AWAIT_SETUP)
        if len(setup.y0) != len(self.y):
            raise ValueError("input length differs from the preprocessed mask length")
        self.setup = setup
        self.state = State.AWAIT_MSG

    def first_message(self) -> Msg1:
        self._require(State.AWAIT_MSG)
        if self._sent:
            raise ProtocolStateError("P2 already sent its message")
        self._sent = True
        return p2_round1(self.y, self.setup)

    def receive(self, msg):
        self._require(State.AWAIT_MSG)
        if not self._sent:
            raise ProtocolStateError("P2 must send before receiving")
        msg2 = _decode(msg, Msg2)
        out = LAMBDA if msg2 is None else p2_finish(self.setup, msg2)
        if out is LAMBDA:
            self._abort()
        else:
            self.output = out
            self.state = State.DONE
        return self.output


# ---------------------------------------------------------------------------
# sessions and transcripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class P2View:
    """Everything P2 holds after one completed session."""

    y: FieldVector
    y0: FieldVector
    s0: FieldElement
    x1: FieldVector
    r1: FieldElement
    w2: FieldElement

    @property
    def k(self) -> int:
        return len(self.y0)

    @property
    def q(self) -> int:
        return self.y0.q


def _out_json(v):
    return "lambda" if v is LAMBDA else v.value


@dataclass(frozen=True)
class Transcript:
    k: int
    q: int
    setup1: SetupP1
    setup2: SetupP2
    msg1: Msg1 | None
    msg2: Msg2 | None
    outcome1: object
    outcome2: object

    @property
    def completed(self) -> bool:
        return self.outcome1 is not LAMBDA and self.outcome2 is not LAMBDA

    def p2_view(self, y: FieldVector) -> P2View:
        """P2's view, given P2's own input ``y`` (which the transcript omits)."""
        if self.outcome2 is LAMBDA or self.msg2 is None:
            raise ValueError("P2 aborted; no completed view")
        m = modulus(self.q)
        return P2View(
            y=y,
            y0=self.setup2.y0,
            s0=self.setup2.s0,
            x1=FieldVector(list(self.msg2.x1), m),
            r1=FieldElement(self.msg2.r1, m),
            w2=self.outcome2,
        )

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "setup1": {"x0": self.setup1.x0.tolist()},
            "setup2": {"y0": self.setup2.y0.tolist(), "s0": self.setup2.s0.value},
            "msg1": None if self.msg1 is None else {"y1": list(self.msg1.y1)},
            "msg2": None if self.msg2 is None else {"x1": list(self.msg2.x1), "r1": self.msg2.r1},
            "outcome1": _out_json(self.outcome1),
            "outcome2": _out_json(self.outcome2),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> Transcript:
        m = modulus(d["q"])

        def out(v):
            return LAMBDA if v == "lambda" else FieldElement(v, m)

        return cls(
            k=d["k"],
            q=m.q,
            setup1=SetupP1(FieldVector(d["setup1"]["x0"], m)),
            setup2=SetupP2(FieldVector(d["setup2"]["y0"], m), FieldElement(d["setup2"]["s0"], m)),
            msg1=None if d["msg1"] is None else Msg1(tuple(d["msg1"]["y1"])),
            msg2=None if d["msg2"] is None else Msg2(tuple(d["msg2"]["x1"]), d["msg2"]["r1"]),
            outcome1=out(d["outcome1"]),
            outcome2=out(d["outcome2"]),
        )

    @classmethod
    def from_json(cls, s: str) -> Transcript:
        return cls.from_dict(json.loads(s))


Tamper = Callable[[object], object]


def run_session(x: FieldVector, y: FieldVector, k: int, q, rng: Rng, *,
                setup: tuple[SetupP1, SetupP2] | None = None, r=None,
                tamper: Tamper | None = None) -> Transcript:
    """Preprocess, then drive both parties to completion.

    ``setup`` and ``r`` force the randomness.  ``tamper`` sees every message
    in transit and returns what is delivered (a message object or raw bytes).
    """
    m = modulus(q)
    if len(x) != k or len(y) != k:
        raise ValueError(f"inputs must have length k={k}")
    if x.modulus != m or y.modulus != m:
        raise ValueError(f"inputs must live in F_{m.q}")
    setup1, setup2 = preprocess(k, m, rng) if setup is None else setup

    p1, p2 = Party1(x, rng, r=r), Party2(y)
    p1.receive_setup(setup1)
    p2.receive_setup(setup2)

    m1 = p2.first_message()
    if tamper is not None:
        m1 = tamper(m1)
    reply = p1.receive(m1)

    m2 = None
    if reply is None:
        p2._abort()
    else:
        m2 = reply if tamper is None else tamper(reply)
        p2.receive(m2)

    return Transcript(
        k=k, q=m.q, setup1=setup1, setup2=setup2,
        msg1=_decode(m1, Msg1), msg2=_decode(m2, Msg2) if m2 is not None else None,
        outcome1=p1.output, outcome2=p2.output,
    )


def pad_inputs(x: FieldVector, k: int) -> FieldVector:
    """Append zeros to reach length ``k``."""
    if not 1 <= len(x) <= k:
        raise ValueError(f"cannot pad a length-{len(x)} vector to length {k}")
    return FieldVector(x.tolist() + [0] * (k - len(x)), x.modulus)


def run_padded_session(x: FieldVector, y: FieldVector, k: int, q, rng: Rng, **kw) -> Transcript:
    """Length-k' inner product through a length-k session on zero-padded inputs."""
    if len(x) != len(y):
        raise ValueError("inputs differ in length")
    return run_session(pad_inputs(x, k), pad_inputs(y, k), k, q, rng, **kw)
