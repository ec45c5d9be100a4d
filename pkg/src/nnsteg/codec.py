"""Trained networks as steganographic codecs, verified against the oracles.

BembER (embed direction) and BextER (decode direction) are computed per
output bit: every enumerated or sampled input contributes output_len bit
comparisons.  Exhaustive enumeration is exact and is the acceptance path;
Monte-Carlo sampling is the fallback for spaces the guard refuses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from nnsteg.errors import ShapeError, SpaceTooLarge
from nnsteg.network import DenseNetwork, threshold_output
from nnsteg.tasks import Task

MAX_EXHAUSTIVE_SPACE = 2**20


@dataclass
class NeuralCodec:
    """A network plus the task it claims to implement and the bit threshold."""

    net: DenseNetwork
    task: Task
    theta: float = 0.5

    def __post_init__(self):
        if self.net.input_size != self.task.input_len:
            raise ShapeError(
                f"network takes {self.net.input_size} inputs but task {self.task} "
                f"has {self.task.input_len}"
            )
        if self.net.output_size != self.task.output_len:
            raise ShapeError(
                f"network emits {self.net.output_size} outputs but task {self.task} "
                f"has {self.task.output_len}"
            )
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.theta}")


@dataclass
class CodecReport:
    """Exact or sampled disagreement between a codec and its oracle.

    Exactly one of ``bember``/``bexter`` is populated, matching the codec's
    direction.  ``mismatches`` holds (input, expected, actual) bit tuples for
    every input with at least one wrong output bit.
    """

    total_inputs: int
    total_bits: int
    mismatched_bits: int
    bember: float | None = None
    bexter: float | None = None
    mismatches: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = field(
        default_factory=list
    )

    @property
    def error_rate(self) -> float:
        return self.bember if self.bember is not None else self.bexter

    def to_text(self) -> str:
        name = "bember" if self.bember is not None else "bexter"
        lines = [
            f"inputs evaluated = {self.total_inputs}",
            f"output bits compared = {self.total_bits}",
            f"mismatched bits = {self.mismatched_bits}",
            f"{name} = {self.error_rate!r}",
            f"inputs with errors = {len(self.mismatches)}",
        ]
        return "\n".join(lines) + "\n"

    def mismatches_csv(self) -> str:
        lines = ["input_bits,expected_bits,actual_bits"]
        for inp, exp, act in self.mismatches:
            lines.append(
                "".join(map(str, inp))
                + ","
                + "".join(map(str, exp))
                + ","
                + "".join(map(str, act))
            )
        return "\n".join(lines) + "\n"


def nn_embed(codec: NeuralCodec, x: Sequence[int], m: Sequence[int]) -> list[int]:
    """Thresholded network output for cover bits ``x`` and message bits ``m``."""
    if codec.task.is_decoder:
        raise ShapeError(f"{codec.task} is a decoder task; use nn_extract")
    if len(x) != codec.task.cover_len or len(m) != codec.task.msg_len:
        raise ShapeError(
            f"task {codec.task} takes {codec.task.cover_len}+{codec.task.msg_len} bits, "
            f"got {len(x)}+{len(m)}"
        )
    z = codec.net.forward(list(x) + list(m))
    return threshold_output(z, codec.theta)


def nn_extract(codec: NeuralCodec, y: Sequence[int]) -> list[int]:
    """Thresholded network output interpreted as the recovered message."""
    if not codec.task.is_decoder:
        raise ShapeError(f"{codec.task} is an embed task; use nn_embed")
    if len(y) != codec.task.input_len:
        raise ShapeError(f"task {codec.task} takes {codec.task.input_len} stego bits, got {len(y)}")
    z = codec.net.forward(list(y))
    return threshold_output(z, codec.theta)


def _compare(codec: NeuralCodec, rows: np.ndarray) -> CodecReport:
    """Run the network on all rows, compare thresholded bits to the oracle."""
    raw = codec.net.forward_batch(rows)
    bits = (raw >= codec.theta).astype(np.int64)
    mismatches = []
    bad_bits = 0
    for r in range(rows.shape[0]):
        inp = tuple(int(v) for v in rows[r])
        expected = tuple(codec.task.oracle(list(inp)))
        actual = tuple(int(v) for v in bits[r])
        wrong = sum(e != a for e, a in zip(expected, actual))
        if wrong:
            bad_bits += wrong
            mismatches.append((inp, expected, actual))
    total_bits = rows.shape[0] * codec.task.output_len
    rate = bad_bits / total_bits
    report = CodecReport(
        total_inputs=rows.shape[0],
        total_bits=total_bits,
        mismatched_bits=bad_bits,
        mismatches=mismatches,
    )
    if codec.task.is_decoder:
        report.bexter = rate
    else:
        report.bember = rate
    return report


def exhaustive_equivalence(codec: NeuralCodec) -> CodecReport:
    """Exact error rate over the task's entire input space.

    Refuses spaces larger than 2**20 inputs; use sampled_error there.
    """
    n = codec.task.input_len
    if 2**n > MAX_EXHAUSTIVE_SPACE:
        raise SpaceTooLarge(
            f"2^{n} inputs exceed the exhaustive limit of {MAX_EXHAUSTIVE_SPACE}; "
            "use sampled_error"
        )
    rows = np.array(list(codec.task.enumerate_inputs()), dtype=np.float64)
    return _compare(codec, rows)


def sampled_error(codec: NeuralCodec, samples: int, seed: int) -> CodecReport:
    """Monte-Carlo error estimate over uniform inputs, deterministic per seed."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = random.Random(seed)
    n = codec.task.input_len
    rows = np.empty((samples, n), dtype=np.float64)
    for r in range(samples):
        for c in range(n):
            rows[r, c] = rng.getrandbits(1)
    return _compare(codec, rows)


def is_exact(codec: NeuralCodec) -> bool:
    """True when the codec reproduces its oracle on every input."""
    return exhaustive_equivalence(codec).mismatched_bits == 0
