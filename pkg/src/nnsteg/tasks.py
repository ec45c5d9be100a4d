"""Embedding/decoding tasks: the functions a network is trained to replicate.

A task declares the input split (cover bits then message bits for embed
tasks, stego bits for decoder tasks), the output arity, and the classical
oracle that labels every input.  Tasks are the glue between dataset
generation, training early-stop checks, and codec verification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from nnsteg import classic
from nnsteg.errors import ConventionError, ShapeError

TASK_KINDS = ("lsb", "matrix", "matrixc", "decoder_lsb", "decoder_matrix")


def appendixc_embed(x: Sequence[int], m: Sequence[int]) -> list[int]:
    """k=2 matrix coding under the permuted parity assignment.

    Flips at most one of the three cover bits so that the checks
    ``(y0 + y1) % 2 == m0`` and ``(y0 + y2) % 2 == m1`` both hold (position 1
    corrects both checks, position 2 the first, position 3 the second).  The
    branch cascade intentionally re-tests the partially updated block.
    """
    if len(x) != 3 or len(m) != 2:
        raise ShapeError(f"need 3 cover bits and 2 message bits, got {len(x)} and {len(m)}")
    z = list(x)
    if (z[0] + z[1]) % 2 != m[0] and (z[0] + z[2]) % 2 == m[1]:
        z[1] = 1 - z[1]
    if (z[0] + z[1]) % 2 != m[0] and (z[0] + z[2]) % 2 != m[1]:
        z[0] = 1 - z[0]
    if (z[0] + z[1]) % 2 == m[0] and (z[0] + z[2]) % 2 != m[1]:
        z[2] = 1 - z[2]
    return z


def appendixc_extract(y: Sequence[int]) -> list[int]:
    """Read the two parity checks back from a 3-bit block."""
    if len(y) != 3:
        raise ShapeError(f"need a 3-bit stego block, got {len(y)}")
    return [(y[0] + y[1]) % 2, (y[0] + y[2]) % 2]


@dataclass(frozen=True)
class Task:
    """A named oracle function with fixed input/output arities.

    ``width`` is n1 for the lsb kinds and k for the matrix kinds.
    """

    kind: str
    width: int

    def __post_init__(self):
        if self.kind not in TASK_KINDS:
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.width < 1:
            raise ValueError(f"task width must be >= 1, got {self.width}")
        if self.kind in ("matrixc", "decoder_matrix") and self.width != 2:
            raise ConventionError(f"{self.kind} is defined for k=2 only, got k={self.width}")

    # -- arities ---------------------------------------------------------

    @property
    def is_decoder(self) -> bool:
        return self.kind.startswith("decoder_")

    @property
    def cover_len(self) -> int:
        if self.kind == "lsb":
            return self.width
        if self.kind in ("matrix", "matrixc"):
            return classic.block_length(self.width)
        raise ValueError(f"{self.kind} task has no cover split")

    @property
    def msg_len(self) -> int:
        if self.kind == "lsb":
            return self.width
        if self.kind in ("matrix", "matrixc"):
            return self.width
        raise ValueError(f"{self.kind} task has no message split")

    @property
    def input_len(self) -> int:
        if self.kind == "lsb":
            return 2 * self.width
        if self.kind in ("matrix", "matrixc"):
            return classic.block_length(self.width) + self.width
        if self.kind == "decoder_lsb":
            return self.width
        return classic.block_length(self.width)  # decoder_matrix

    @property
    def output_len(self) -> int:
        if self.kind == "lsb":
            return self.width
        if self.kind in ("matrix", "matrixc"):
            return classic.block_length(self.width)
        if self.kind == "decoder_lsb":
            return self.width
        return self.width  # decoder_matrix

    # -- the oracle --------------------------------------------------------

    def oracle(self, bits: Sequence[int]) -> list[int]:
        """Target output for one raw input vector."""
        if len(bits) != self.input_len:
            raise ShapeError(f"{self} expects {self.input_len} input bits, got {len(bits)}")
        if self.kind == "lsb":
            return list(bits[self.width:])
        if self.kind == "matrix":
            n = classic.block_length(self.width)
            return classic.mc_embed(bits[:n], bits[n:], self.width)
        if self.kind == "matrixc":
            return appendixc_embed(bits[:3], bits[3:])
        if self.kind == "decoder_lsb":
            return list(bits)
        return classic.mc_extract(list(bits), self.width)  # decoder_matrix

    def enumerate_inputs(self) -> Iterator[tuple[int, ...]]:
        """Every input vector, in ascending binary order (first bit = MSB)."""
        yield from itertools.product((0, 1), repeat=self.input_len)

    def split(self, bits: Sequence[int]) -> tuple[list[int], list[int]]:
        """Split an embed-task input into its (cover, message) halves."""
        if self.is_decoder:
            raise ValueError(f"{self} input has no cover/message split")
        return list(bits[:self.cover_len]), list(bits[self.cover_len:])

    def __str__(self):
        return f"{self.kind}:{self.width}"


def parse_task(text: str) -> Task:
    """Parse tokens like 'lsb:3', 'matrix:2', 'matrixc', 'decoder_lsb:1'."""
    kind, _, arg = text.partition(":")
    if kind not in TASK_KINDS:
        raise ValueError(f"unknown task {text!r} (kinds: {', '.join(TASK_KINDS)})")
    if kind in ("matrixc", "decoder_matrix"):
        width = int(arg) if arg else 2
    else:
        if not arg:
            raise ValueError(f"task {kind!r} needs a width, e.g. {kind}:3")
        width = int(arg)
    return Task(kind, width)
