"""Classical LSB-substitution and Hamming matrix-coding embedders.

These closed-form implementations are the ground truth that every trained
network is verified against.  All functions are pure and safe for concurrent
use.

Conventions: bit positions are 1-based in the coding formulas (position 1 is
index 0 of a Python sequence), and a k-bit message maps to the integer
``M = sum(m_j * 2**(j-1))``, i.e. the first message bit is the least
significant.  The same convention is applied on both the embedding and the
extraction side, so roundtrips do not depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from nnsteg.errors import CapacityError, ParseError, ShapeError

BitVector = list[int]


def _check_bits(bits: Sequence[int], what: str) -> None:
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"{what} must contain only 0/1, found {b!r}")


# -- LSB substitution ------------------------------------------------------


def lsb_embed(x: int, m: int) -> int:
    """Replace the least significant bit of sample ``x`` with message bit ``m``."""
    if x < 0:
        raise ValueError(f"cover sample must be non-negative, got {x}")
    if m not in (0, 1):
        raise ValueError(f"message bit must be 0 or 1, got {m!r}")
    return x - (x & 1) + m


def lsb_extract(y: int) -> int:
    """Read the message bit back from a stego sample's least significant bit."""
    if y < 0:
        raise ValueError(f"stego sample must be non-negative, got {y}")
    return y & 1


# -- Hamming matrix coding -------------------------------------------------


def block_length(k: int) -> int:
    """Cover bits per block for k message bits: 2**k - 1."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return 2**k - 1


def message_int(m: Sequence[int]) -> int:
    """Integer value of a message bit vector, first bit least significant."""
    _check_bits(m, "message")
    value = 0
    for j, bit in enumerate(m):
        value |= bit << j
    return value


def int_to_bits(value: int, k: int) -> BitVector:
    """Inverse of message_int: the k low bits of ``value``, LSB first."""
    return [(value >> j) & 1 for j in range(k)]


def mc_syndrome(x: Sequence[int], k: int) -> int:
    """XOR of the 1-based positions of set bits; the block's hash value."""
    n = block_length(k)
    if len(x) != n:
        raise ShapeError(f"cover block must have {n} bits for k={k}, got {len(x)}")
    _check_bits(x, "cover block")
    s = 0
    for pos, bit in enumerate(x, start=1):
        if bit:
            s ^= pos
    return s


def mc_embed(x: Sequence[int], m: Sequence[int], k: int) -> BitVector:
    """Embed k message bits into a block by flipping at most one cover bit.

    The flip position is ``s = syndrome(x) XOR M``; position 0 means the
    block already carries the message and is returned unchanged.  The result
    always satisfies ``mc_syndrome(result) == M``.
    """
    if len(m) != k:
        raise ShapeError(f"message must have {k} bits, got {len(m)}")
    s = mc_syndrome(x, k) ^ message_int(m)
    y = list(x)
    if s != 0:
        y[s - 1] = 1 - y[s - 1]
    return y


def mc_extract(y: Sequence[int], k: int) -> BitVector:
    """Recover the k message bits of a block: the syndrome's bit decomposition."""
    return int_to_bits(mc_syndrome(y, k), k)


@dataclass(frozen=True)
class CodeStats:
    """Rate/distortion/efficiency of matrix coding at a given k.

    ``embedding_rate`` is message bits per cover bit, ``avg_distortion`` the
    expected changed cover bits per cover bit over uniform inputs, and
    ``efficiency`` message bits per changed bit.
    """

    embedding_rate: float
    avg_distortion: float
    efficiency: float


def mc_stats(k: int) -> CodeStats:
    """Closed-form statistics: (k/(2^k-1), 1/2^k, k*2^k/(2^k-1))."""
    n = block_length(k)
    rate = Fraction(k, n)
    distortion = Fraction(1, 2**k)
    efficiency = Fraction(k * 2**k, n)
    return CodeStats(float(rate), float(distortion), float(efficiency))


# -- stream embedding over long bit vectors ---------------------------------


def parse_scheme(text: str) -> tuple[str, int]:
    """Parse a scheme token: 'lsb', 'lsb:<n1>', 'matrix:<k>' or 'matrixc'.

    Returns (kind, width) where width is n1 for lsb and k for matrix kinds.
    """
    kind, _, arg = text.partition(":")
    if kind == "lsb":
        n1 = int(arg) if arg else 1
        if n1 < 1:
            raise ValueError(f"lsb width must be >= 1, got {n1}")
        return "lsb", n1
    if kind == "matrix":
        if not arg:
            raise ValueError("matrix scheme needs a k, e.g. matrix:2")
        k = int(arg)
        if k < 1:
            raise ValueError(f"matrix k must be >= 1, got {k}")
        return "matrix", k
    if kind == "matrixc":
        if arg and arg != "2":
            raise ValueError("matrixc is defined for k=2 only")
        return "matrixc", 2
    raise ValueError(f"unknown scheme {text!r}")


def lsb_embed_stream(cover: Sequence[int], message: Sequence[int]) -> BitVector:
    """Substitute the first len(message) cover bits; the tail passes through."""
    if len(message) > len(cover):
        raise CapacityError(len(message), len(cover))
    _check_bits(cover, "cover")
    _check_bits(message, "message")
    return list(message) + list(cover[len(message):])


def mc_embed_stream(cover: Sequence[int], message: Sequence[int], k: int) -> BitVector:
    """Matrix-code consecutive disjoint blocks; untouched tail passes through.

    The message is consumed k bits per block; a short final chunk is padded
    with zeros.
    """
    n = block_length(k)
    _check_bits(cover, "cover")
    _check_bits(message, "message")
    blocks = (len(message) + k - 1) // k
    if blocks * n > len(cover):
        raise CapacityError(blocks * n, len(cover))
    out = list(cover)
    for b in range(blocks):
        chunk = list(message[b * k:(b + 1) * k])
        chunk += [0] * (k - len(chunk))
        out[b * n:(b + 1) * n] = mc_embed(out[b * n:(b + 1) * n], chunk, k)
    return out


def mc_extract_stream(stego: Sequence[int], nbits: int, k: int) -> BitVector:
    """Read ``nbits`` message bits back from consecutive blocks."""
    n = block_length(k)
    blocks = (nbits + k - 1) // k
    if blocks * n > len(stego):
        raise CapacityError(blocks * n, len(stego))
    out: BitVector = []
    for b in range(blocks):
        out.extend(mc_extract(list(stego[b * n:(b + 1) * n]), k))
    return out[:nbits]


def embed_stream(cover: Sequence[int], message: Sequence[int], scheme: str) -> BitVector:
    """Apply the per-block embedder of ``scheme`` ('lsb' or 'matrix:<k>')."""
    kind, width = parse_scheme(scheme)
    if kind == "lsb":
        return lsb_embed_stream(cover, message)
    if kind == "matrix":
        return mc_embed_stream(cover, message, width)
    raise ValueError(f"embed_stream supports lsb and matrix schemes, not {kind!r}")


def extract_stream(stego: Sequence[int], nbits: int, scheme: str) -> BitVector:
    """Recover ``nbits`` message bits embedded with ``scheme``."""
    kind, width = parse_scheme(scheme)
    if kind == "lsb":
        if nbits > len(stego):
            raise CapacityError(nbits, len(stego))
        return [int(b) for b in stego[:nbits]]
    if kind == "matrix":
        return mc_extract_stream(stego, nbits, width)
    raise ValueError(f"extract_stream supports lsb and matrix schemes, not {kind!r}")


# -- bit-vector text format --------------------------------------------------


def parse_bits(text: str) -> BitVector:
    """Parse a bit file: 0/1 characters with whitespace ignored.

    A ``0x`` prefix switches to hex; each digit expands to four bits, most
    significant first.
    """
    stripped = "".join(text.split())
    if stripped.lower().startswith("0x"):
        digits = stripped[2:]
        if not digits:
            raise ParseError("hex bit string has no digits after 0x")
        bits: BitVector = []
        for ch in digits:
            try:
                value = int(ch, 16)
            except ValueError:
                raise ParseError(f"invalid hex digit {ch!r} in bit string") from None
            bits.extend((value >> shift) & 1 for shift in (3, 2, 1, 0))
        return bits
    out: BitVector = []
    for ch in stripped:
        if ch == "0":
            out.append(0)
        elif ch == "1":
            out.append(1)
        else:
            raise ParseError(f"invalid character {ch!r} in bit string")
    return out


def bits_to_text(bits: Sequence[int]) -> str:
    """Render bits as a plain 0/1 line."""
    _check_bits(bits, "bits")
    return "".join(str(b) for b in bits)
