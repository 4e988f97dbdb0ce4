"""Byte-exact framing for setup and computation-phase messages.

Layout: ``tag (1 byte) || k (u32 LE) || values (u64 LE each)``.  Message
values are never reduced mod q on decode; range checks belong to the
receiving party.
"""

from __future__ import annotations

import struct

import numpy as np

from .field import FieldElement, modulus
from .linalg import FieldVector

TAG_SETUP1 = 0x01
TAG_SETUP2 = 0x02
TAG_MSG1 = 0x03
TAG_MSG2 = 0x04

_HEADER = struct.Struct("<BI")
_U64_MAX = 2**64 - 1


class DecodeError(ValueError):
    pass


# values after the k-vector, per tag
_EXTRA = {TAG_SETUP1: 0, TAG_SETUP2: 1, TAG_MSG1: 0, TAG_MSG2: 1}


def _pack(tag: int, k: int, values) -> bytes:
    values = [int(v) for v in values]
    for v in values:
        if not 0 <= v <= _U64_MAX:
            raise ValueError(f"value {v} does not fit in u64")
    return _HEADER.pack(tag, k) + np.array(values, dtype="<u8").tobytes()


def encode_msg(msg) -> bytes:
    from .protocol import Msg1, Msg2, SetupP1, SetupP2

    if isinstance(msg, Msg1):
        return _pack(TAG_MSG1, len(msg.y1), msg.y1)
    if isinstance(msg, Msg2):
        return _pack(TAG_MSG2, len(msg.x1), list(msg.x1) + [msg.r1])
    if isinstance(msg, SetupP1):
        return _pack(TAG_SETUP1, len(msg.x0), msg.x0.tolist())
    if isinstance(msg, SetupP2):
        return _pack(TAG_SETUP2, len(msg.y0), msg.y0.tolist() + [msg.s0.value])
    raise TypeError(f"cannot encode {type(msg).__name__}")


def decode_msg(buf: bytes, q=None):
    """Parse one framed message.

    ``q`` is needed only for setup messages, whose values must be canonical.
    """
    from .protocol import Msg1, Msg2, SetupP1, SetupP2

    buf = bytes(buf)
    if len(buf) < _HEADER.size:
        raise DecodeError(f"buffer of {len(buf)} bytes is shorter than the header")
    tag, k = _HEADER.unpack_from(buf)
    if tag not in _EXTRA:
        raise DecodeError(f"unknown tag 0x{tag:02x}")
    n = k + _EXTRA[tag]
    want = _HEADER.size + 8 * n
    if len(buf) != want:
        kind = "truncated" if len(buf) < want else "overlong"
        raise DecodeError(f"{kind} buffer: {len(buf)} bytes, expected {want} for k={k}")
    values = [int(v) for v in np.frombuffer(buf, dtype="<u8", offset=_HEADER.size, count=n)]

    if tag == TAG_MSG1:
        return Msg1(tuple(values))
    if tag == TAG_MSG2:
        return Msg2(tuple(values[:k]), values[k])

    if q is None:
        raise DecodeError("setup messages need the field modulus to decode")
    m = modulus(q)
    if k < 1 or any(v >= m.q for v in values):
        raise DecodeError("setup values must be canonical residues")
    if tag == TAG_SETUP1:
        return SetupP1(FieldVector(values, m))
    return SetupP2(FieldVector(values[:k], m), FieldElement(values[k], m))
