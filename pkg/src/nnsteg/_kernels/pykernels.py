"""Pure-Python evaluation and training kernels.

This is the fallback backend used when the compiled extension is not
available, and the reference the extension is tested against.  Every function
mirrors its compiled counterpart operation for operation: both backends run
the same IEEE-754 double operations in the same order, so their results are
bit-identical, not merely close.  Keep the two files in sync.

Network encoding shared by both backends:

* ``weights`` -- list of C-contiguous float64 matrices, one per non-input
  layer.  Matrix ``t`` has shape ``(n_t + bias_t, n_{t+1})``: row index is the
  source unit (constant-1 bias unit last, when present), column index the
  destination unit.
* ``acts`` -- activation code per non-input layer: 0 = linear, 1 = sigmoid.
* ``biases`` -- flag per layer ``0 .. L-1``: 1 if a constant-1 unit is
  appended to that layer's outputs before they feed the next matrix.
"""

from math import exp

import numpy as np

LINEAR = 0
SIGMOID = 1

BACKEND_NAME = "python"


def _sigmoid(x):
    # exp() overflow in C yields +inf and hence 0.0; match that here.
    try:
        e = exp(-x)
    except OverflowError:
        return 0.0
    return 1.0 / (1.0 + e)


def _forward_store(wl, acts, biases, x):
    """Forward pass keeping every layer's outputs (bias appended where set).

    ``wl`` is the weight matrices as nested lists, ``x`` the raw input as a
    list.  Returns the list of per-layer activation lists, index 0 = input.
    """
    nlayers = len(wl)
    a = list(x)
    if biases[0]:
        a.append(1.0)
    stored = [a]
    for t in range(nlayers):
        w = wl[t]
        rows = len(w)
        cols = len(w[0])
        kind = acts[t]
        out = [0.0] * cols
        for j in range(cols):
            s = 0.0
            for i in range(rows):
                s += a[i] * w[i][j]
            out[j] = s if kind == LINEAR else _sigmoid(s)
        if t + 1 < nlayers and biases[t + 1]:
            out.append(1.0)
        stored.append(out)
        a = out
    return stored


def _backward(wl, acts, biases, stored, z):
    """Loss and per-layer deltas (d loss / d pre-activation) for one sample.

    Loss is the squared error summed over output units.  Returns
    ``(loss, deltas)`` where ``deltas[t]`` covers the non-bias units of layer
    ``t + 1``.
    """
    nlayers = len(wl)
    out = stored[nlayers]
    nz = len(z)
    loss = 0.0
    delta = [0.0] * nz
    kind = acts[nlayers - 1]
    for j in range(nz):
        d = out[j] - z[j]
        loss += d * d
        g = 2.0 * d
        if kind == SIGMOID:
            g = g * (out[j] * (1.0 - out[j]))
        delta[j] = g
    deltas = [None] * nlayers
    deltas[nlayers - 1] = delta
    for t in range(nlayers - 2, -1, -1):
        a_t = stored[t + 1]
        w_up = wl[t + 1]
        nxt = deltas[t + 1]
        n_units = len(wl[t][0])  # non-bias units of layer t + 1
        kind = acts[t]
        cur = [0.0] * n_units
        for i in range(n_units):
            s = 0.0
            for j in range(len(nxt)):
                s += w_up[i][j] * nxt[j]
            if kind == SIGMOID:
                s = s * (a_t[i] * (1.0 - a_t[i]))
            cur[i] = s
        deltas[t] = cur
    return loss, deltas


def forward_batch(weights, acts, biases, X):
    """Evaluate the network on every row of ``X``; returns an (m, n_L) array."""
    wl = [w.tolist() for w in weights]
    xs = np.asarray(X, dtype=np.float64).tolist()
    n_out = len(wl[-1][0])
    out = np.empty((len(xs), n_out), dtype=np.float64)
    for r, x in enumerate(xs):
        stored = _forward_store(wl, acts, biases, x)
        out[r, :] = stored[-1]
    return out


def grad_one(weights, acts, biases, x, z):
    """Squared-error loss and weight gradients for a single sample.

    Returns ``(loss, grads)`` with ``grads[t][i, j] = a_i * delta_j`` shaped
    like ``weights[t]``.
    """
    wl = [w.tolist() for w in weights]
    stored = _forward_store(wl, acts, biases, list(np.asarray(x, dtype=np.float64).tolist()))
    loss, deltas = _backward(wl, acts, biases, stored, list(np.asarray(z, dtype=np.float64).tolist()))
    grads = []
    for t in range(len(wl)):
        a_prev = stored[t]
        dlt = deltas[t]
        g = np.empty((len(a_prev), len(dlt)), dtype=np.float64)
        for i in range(len(a_prev)):
            av = a_prev[i]
            for j in range(len(dlt)):
                g[i, j] = av * dlt[j]
        grads.append(g)
    return loss, grads


def sgd_epoch(weights, acts, biases, X, Z, lr):
    """One pass of per-sample gradient updates, rows visited in order.

    Mutates ``weights`` in place and returns the summed squared-error loss,
    each sample's loss evaluated just before its own update.
    """
    wl = [w.tolist() for w in weights]
    xs = np.asarray(X, dtype=np.float64).tolist()
    zs = np.asarray(Z, dtype=np.float64).tolist()
    nlayers = len(wl)
    total = 0.0
    for x, z in zip(xs, zs):
        stored = _forward_store(wl, acts, biases, x)
        loss, deltas = _backward(wl, acts, biases, stored, z)
        total += loss
        for t in range(nlayers):
            a_prev = stored[t]
            dlt = deltas[t]
            w = wl[t]
            for i in range(len(a_prev)):
                av = a_prev[i]
                row = w[i]
                for j in range(len(dlt)):
                    row[j] -= lr * (av * dlt[j])
    for t in range(nlayers):
        weights[t][:, :] = wl[t]
    return total


def hill_climb(w0, delta, V, Z):
    """Coordinate-perturbation search for the 3-weight single unit.

    Per iteration: take the pre-drawn sample ``V[it] = (x, m, 1)`` with target
    ``Z[it]``, try all 27 candidates ``w + delta * e`` for
    ``e in {-1, 0, 1}^3`` in lexicographic order, and adopt the first
    candidate whose squared error is strictly below the best seen so far
    (starting from the incumbent, so no move is made without improvement).

    Returns a ``(T + 1, 3)`` trace; row 0 is ``w0``, row ``T`` the result.
    """
    vl = np.asarray(V, dtype=np.float64).tolist()
    zl = np.asarray(Z, dtype=np.float64).tolist()
    iters = len(vl)
    trace = np.empty((iters + 1, 3), dtype=np.float64)
    w1 = float(w0[0])
    w2 = float(w0[1])
    w3 = float(w0[2])
    trace[0, 0] = w1
    trace[0, 1] = w2
    trace[0, 2] = w3
    steps = (-1.0, 0.0, 1.0)
    for it in range(iters):
        v1, v2, v3 = vl[it]
        z = zl[it]
        d = z - (w1 * v1 + w2 * v2 + w3 * v3)
        best = d * d
        b1 = w1
        b2 = w2
        b3 = w3
        for e1 in steps:
            c1 = w1 + delta * e1
            for e2 in steps:
                c2 = w2 + delta * e2
                for e3 in steps:
                    c3 = w3 + delta * e3
                    d = z - (c1 * v1 + c2 * v2 + c3 * v3)
                    l = d * d
                    if l < best:
                        best = l
                        b1 = c1
                        b2 = c2
                        b3 = c3
        w1 = b1
        w2 = b2
        w3 = b3
        trace[it + 1, 0] = w1
        trace[it + 1, 1] = w2
        trace[it + 1, 2] = w3
    return trace
