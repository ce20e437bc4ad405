"""
Master checkpoint blobs.

Layout: 4-byte magic, big-endian u32 payload length, JSON payload, and a
trailing big-endian u32 CRC32 over everything before it.
"""

import json
import struct
import zlib

from kernelsrc.src.errors import CheckpointCorruptError

MAGIC = b"MRCK"
HEADER = struct.Struct(">4sI")
TRAILER = struct.Struct(">I")


def encode_checkpoint(state: dict) -> bytes:
    payload = json.dumps(state, sort_keys=True, separators=(",", ":")).encode("utf-8")
    body = HEADER.pack(MAGIC, len(payload)) + payload
    return body + TRAILER.pack(zlib.crc32(body) & 0xFFFFFFFF)


def decode_checkpoint(blob: bytes) -> dict:
    if len(blob) < HEADER.size + TRAILER.size:
        raise CheckpointCorruptError("truncated")
    body, (crc,) = blob[:-TRAILER.size], TRAILER.unpack(blob[-TRAILER.size:])
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise CheckpointCorruptError("bad checksum")
    magic, length = HEADER.unpack(body[:HEADER.size])
    if magic != MAGIC:
        raise CheckpointCorruptError("bad magic")
    payload = body[HEADER.size:]
    if len(payload) != length:
        raise CheckpointCorruptError("length mismatch")
    try:
        return json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointCorruptError(str(e)) from e
