"""Byte stream <-> field symbols <-> fixed-size generations.

Bytes map to symbols through s-bit chunks, s = floor(log2 q), LSB-first,
so every field can carry arbitrary data exactly.  The stream is prefixed
with its 8-byte little-endian byte length and zero-filled at the tail up
to a whole number of B-symbol generations; decoding reads the prefix and
cuts the fill.  Each generation is one t x k data matrix, row-major.
"""

from __future__ import annotations

from .errors import InvalidConfig

LENGTH_PREFIX_BYTES = 8


def symbol_bits(q: int) -> int:
    return q.bit_length() - 1


def bytes_to_symbols(data: bytes, q: int) -> list[int]:
    s = symbol_bits(q)
    acc = int.from_bytes(data, "little")
    nbits = len(data) * 8
    mask = (1 << s) - 1
    return [(acc >> shift) & mask for shift in range(0, nbits, s)]


def symbols_to_bytes(symbols, q: int, nbytes: int) -> bytes:
    s = symbol_bits(q)
    acc = 0
    for i, v in enumerate(symbols):
        acc |= v << (i * s)
    acc &= (1 << (nbytes * 8)) - 1
    return acc.to_bytes(nbytes, "little")


def pack_payload(data: bytes, q: int, block: int) -> list[int]:
    """Length-prefixed symbol stream, zero-filled to a multiple of block."""
    if not data:
        raise InvalidConfig("refusing to encode an empty input")
    framed = len(data).to_bytes(LENGTH_PREFIX_BYTES, "little") + data
    symbols = bytes_to_symbols(framed, q)
    fill = (-len(symbols)) % block
    return symbols + [0] * fill


def unpack_payload(symbols, q: int) -> bytes:
    s = symbol_bits(q)
    total_bytes = len(symbols) * s // 8
    if total_bytes < LENGTH_PREFIX_BYTES:
        raise InvalidConfig("symbol stream shorter than the length prefix")
    stream = symbols_to_bytes(symbols, q, total_bytes)
    length = int.from_bytes(stream[:LENGTH_PREFIX_BYTES], "little")
    if length > total_bytes - LENGTH_PREFIX_BYTES:
        raise InvalidConfig("corrupt stream: length prefix exceeds available data")
    return stream[LENGTH_PREFIX_BYTES : LENGTH_PREFIX_BYTES + length]


def stripe_symbols(symbols, block: int) -> list[list[int]]:
    """Split into generations of exactly block symbols (zero-fill the tail)."""
    out = []
    for start in range(0, len(symbols), block):
        gen = list(symbols[start : start + block])
        if len(gen) < block:
            gen += [0] * (block - len(gen))
        out.append(gen)
    return out
