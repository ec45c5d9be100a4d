"""Seeded synthetic training data labelled by the classical oracles."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from nnsteg.errors import ConventionError
from nnsteg.tasks import Task

CONVENTIONS = ("standard", "appendixc")


@dataclass
class Dataset:
    """Input rows paired with oracle targets, plus the task that labelled them."""

    task: Task
    inputs: np.ndarray   # (count, input_len) float64 of 0.0/1.0
    targets: np.ndarray  # (count, output_len) float64 of 0.0/1.0

    def __len__(self):
        return self.inputs.shape[0]


def gen_dataset(task: Task, count: int, seed: int) -> Dataset:
    """Uniformly random input bits, targets from the task oracle.

    Bits are drawn input-position order, one sample at a time, from
    ``random.Random(seed)``, so a given seed always yields the same dataset.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = random.Random(seed)
    n_in = task.input_len
    inputs = np.empty((count, n_in), dtype=np.float64)
    targets = np.empty((count, task.output_len), dtype=np.float64)
    for r in range(count):
        bits = [rng.getrandbits(1) for _ in range(n_in)]
        inputs[r, :] = bits
        targets[r, :] = task.oracle(bits)
    return Dataset(task, inputs, targets)


def gen_lsb_dataset(n1: int, count: int, seed: int) -> Dataset:
    """Cover bits x and message bits m as input, target equal to m."""
    return gen_dataset(Task("lsb", n1), count, seed)


def gen_mc_dataset(k: int, count: int, seed: int, convention: str = "standard") -> Dataset:
    """Matrix-coding blocks: input x ++ m, target the embedded block.

    ``convention`` selects the position-value parity assignment ('standard')
    or the permuted three-branch variant ('appendixc', defined for k=2 only).
    """
    if convention == "standard":
        return gen_dataset(Task("matrix", k), count, seed)
    if convention == "appendixc":
        if k != 2:
            raise ConventionError(f"appendixc convention is defined for k=2 only, got k={k}")
        return gen_dataset(Task("matrixc", 2), count, seed)
    raise ConventionError(f"unknown convention {convention!r} (choose from {CONVENTIONS})")


def gen_decoder_dataset(task: Task, count: int, seed: int) -> Dataset:
    """Stego bits as input, recovered message as target."""
    if not task.is_decoder:
        raise ValueError(f"{task} is not a decoder task")
    return gen_dataset(task, count, seed)
