"""Dense feed-forward networks with linear/sigmoid units.

A network is an ordered list of layer specs (index 0 is the input layer) plus
one weight matrix per non-input layer.  Layers may carry a constant-1 bias
unit appended to their outputs; the weight matrix feeding layer ``k`` then has
``n_{k-1} + 1`` rows, with the bias row last.  The output layer never carries
a bias unit.

Networks are immutable during evaluation: ``forward`` is read-only and safe to
call concurrently; training code mutates the weight arrays and requires
exclusive access.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from nnsteg import _kernels
from nnsteg.errors import ParseError, ShapeError

ACTIVATIONS = ("linear", "sigmoid")
_ACT_CODE = {"linear": 0, "sigmoid": 1}

MODEL_HEADER = "fnn v1"


def sigmoid(x: float) -> float:
    """Logistic function 1/(1 + exp(-x)); strictly inside (0, 1) for finite x.

    Same formula as the evaluation kernels, so scalar checks agree with
    ``DenseNetwork.forward`` bit for bit.
    """
    try:
        e = math.exp(-x)
    except OverflowError:
        return 0.0
    return 1.0 / (1.0 + e)


@dataclass(frozen=True)
class LayerSpec:
    """One layer: unit count, activation kind, and bias-unit flag.

    ``size`` counts non-bias units only; ``has_bias`` says whether a
    constant-1 unit is appended to this layer's outputs.  The activation of
    the input layer is ignored.
    """

    size: int
    activation: str = "linear"
    has_bias: bool = False

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"layer size must be >= 1, got {self.size}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")


class DenseNetwork:
    """Fully-connected feed-forward network over float64 weights."""

    def __init__(self, layers: Sequence[LayerSpec], weights: Iterable[np.ndarray]):
        layers = list(layers)
        if len(layers) < 2:
            raise ValueError("a network needs at least an input and an output layer")
        if layers[-1].has_bias:
            raise ValueError("the output layer cannot carry a bias unit")
        weights = [np.ascontiguousarray(w, dtype=np.float64) for w in weights]
        if len(weights) != len(layers) - 1:
            raise ShapeError(
                f"expected {len(layers) - 1} weight matrices, got {len(weights)}"
            )
        for k, w in enumerate(weights, start=1):
            rows = layers[k - 1].size + (1 if layers[k - 1].has_bias else 0)
            cols = layers[k].size
            if w.shape != (rows, cols):
                raise ShapeError(
                    f"weight matrix {k} has shape {w.shape}, expected ({rows}, {cols})"
                )
            if not np.all(np.isfinite(w)):
                raise ValueError(f"weight matrix {k} contains non-finite values")
        self.layers = layers
        self.weights = weights

    # -- kernel encoding -------------------------------------------------

    @property
    def activation_codes(self) -> list[int]:
        return [_ACT_CODE[spec.activation] for spec in self.layers[1:]]

    @property
    def bias_flags(self) -> list[int]:
        return [1 if spec.has_bias else 0 for spec in self.layers[:-1]]

    @property
    def input_size(self) -> int:
        return self.layers[0].size

    @property
    def output_size(self) -> int:
        return self.layers[-1].size

    # -- evaluation ------------------------------------------------------

    def forward(self, x: Sequence[float]) -> np.ndarray:
        """Evaluate the network on one input vector of length ``n_0``."""
        return self.forward_batch(np.asarray(x, dtype=np.float64).reshape(1, -1))[0]

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        """Evaluate the network on each row of ``X``; returns (m, n_L)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.input_size:
            raise ShapeError(
                f"input has shape {X.shape}, expected (*, {self.input_size})"
            )
        return _kernels.forward_batch(
            self.weights, self.activation_codes, self.bias_flags, X
        )

    def copy(self) -> "DenseNetwork":
        return DenseNetwork(self.layers, [w.copy() for w in self.weights])

    @classmethod
    def zeros(cls, layers: Sequence[LayerSpec]) -> "DenseNetwork":
        """Network with every weight zero, shaped per the layer specs."""
        layers = list(layers)
        weights = []
        for k in range(1, len(layers)):
            rows = layers[k - 1].size + (1 if layers[k - 1].has_bias else 0)
            weights.append(np.zeros((rows, layers[k].size)))
        return cls(layers, weights)

    def __repr__(self):
        sizes = "-".join(str(spec.size) for spec in self.layers)
        return f"DenseNetwork({sizes}, backend={_kernels.backend_name()})"


def threshold_output(z: Sequence[float], theta: float = 0.5) -> list[int]:
    """Map raw outputs to bits: 1 where z_i >= theta (ties go to 1)."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {theta}")
    return [1 if v >= theta else 0 for v in z]


# -- model document ------------------------------------------------------
#
# Line-oriented text format:
#
#   fnn v1
#   layers <n_0> ... <n_L>
#   activations <a_1> ... <a_L>        tokens: linear | sigmoid
#   bias <0|1> ... <0|1>               one flag per layer 0..L-1
#   w <k> <i> <j> <decimal>            one line per weight entry
#
# Weight values are written with repr(), i.e. shortest text that round-trips
# the exact float64, so serialize/deserialize is bit-exact.


def serialize(net: DenseNetwork) -> str:
    """Render a network as the line-oriented text model document."""
    lines = [MODEL_HEADER]
    lines.append("layers " + " ".join(str(spec.size) for spec in net.layers))
    lines.append("activations " + " ".join(spec.activation for spec in net.layers[1:]))
    lines.append("bias " + " ".join("1" if spec.has_bias else "0" for spec in net.layers[:-1]))
    for k, w in enumerate(net.weights, start=1):
        rows, cols = w.shape
        for i in range(rows):
            for j in range(cols):
                lines.append(f"w {k} {i} {j} {w[i, j]!r}")
    return "\n".join(lines) + "\n"


def _fail(lineno: int, line: str, why: str):
    raise ParseError(f"line {lineno}: {why}: {line!r}")


def deserialize(text: str) -> DenseNetwork:
    """Parse a model document; raises ParseError naming the offending line."""
    sizes = None
    acts = None
    bias = None
    entries = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not header_seen:
            if line != MODEL_HEADER:
                _fail(lineno, raw, f"expected header {MODEL_HEADER!r}")
            header_seen = True
            continue
        fields = line.split()
        tag = fields[0]
        if tag == "layers":
            try:
                sizes = [int(f) for f in fields[1:]]
            except ValueError:
                _fail(lineno, raw, "layer sizes must be integers")
            if len(sizes) < 2 or any(n < 1 for n in sizes):
                _fail(lineno, raw, "need at least two positive layer sizes")
        elif tag == "activations":
            acts = fields[1:]
            if any(a not in ACTIVATIONS for a in acts):
                _fail(lineno, raw, "activation tokens must be linear|sigmoid")
        elif tag == "bias":
            if any(f not in ("0", "1") for f in fields[1:]):
                _fail(lineno, raw, "bias flags must be 0 or 1")
            bias = [f == "1" for f in fields[1:]]
        elif tag == "w":
            if sizes is None or bias is None:
                _fail(lineno, raw, "weight line before layers/bias declaration")
            if len(fields) != 5:
                _fail(lineno, raw, "weight line needs: w <k> <i> <j> <value>")
            try:
                k, i, j = int(fields[1]), int(fields[2]), int(fields[3])
                value = float(fields[4])
            except ValueError:
                _fail(lineno, raw, "malformed weight entry")
            if not 1 <= k <= len(sizes) - 1:
                _fail(lineno, raw, f"layer index {k} out of range")
            if k - 1 >= len(bias):
                _fail(lineno, raw, f"bias line has no flag for layer {k - 1}")
            rows = sizes[k - 1] + (1 if bias[k - 1] else 0)
            cols = sizes[k]
            if not (0 <= i < rows and 0 <= j < cols):
                _fail(lineno, raw, f"weight index ({i}, {j}) out of range for layer {k}")
            if (k, i, j) in entries:
                _fail(lineno, raw, f"duplicate weight entry ({k}, {i}, {j})")
            entries[(k, i, j)] = value
        else:
            _fail(lineno, raw, f"unknown directive {tag!r}")
    if not header_seen:
        raise ParseError("line 1: empty document, expected header 'fnn v1'")
    if sizes is None:
        raise ParseError("end of document: missing 'layers' line")
    if acts is None or len(acts) != len(sizes) - 1:
        raise ParseError("end of document: missing or mis-sized 'activations' line")
    if bias is None or len(bias) != len(sizes) - 1:
        raise ParseError("end of document: missing or mis-sized 'bias' line")

    layers = [LayerSpec(sizes[0], "linear", bias[0])]
    for k in range(1, len(sizes)):
        has_bias = bias[k] if k < len(sizes) - 1 else False
        layers.append(LayerSpec(sizes[k], acts[k - 1], has_bias))
    weights = []
    for k in range(1, len(sizes)):
        rows = sizes[k - 1] + (1 if bias[k - 1] else 0)
        cols = sizes[k]
        w = np.empty((rows, cols))
        for i in range(rows):
            for j in range(cols):
                if (k, i, j) not in entries:
                    raise ParseError(
                        f"end of document: layer {k} is missing weight ({i}, {j})"
                    )
                w[i, j] = entries.pop((k, i, j))
        weights.append(w)
    return DenseNetwork(layers, weights)


def save_model(net: DenseNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(net))


def load_model(path) -> DenseNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return deserialize(fh.read())
