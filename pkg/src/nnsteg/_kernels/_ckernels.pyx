# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled evaluation and training kernels.

Transcribed operation for operation from ``pykernels``; see that module for
the network encoding and the reference semantics.  The extension is built
with FMA contraction disabled so results stay bit-identical to the
pure-Python backend.  Keep the two files in sync.
"""

from libc.math cimport exp

import numpy as np

LINEAR = 0
SIGMOID = 1

BACKEND_NAME = "c"


cdef void _forward(double[::1] wf, Py_ssize_t[::1] woff,
                   Py_ssize_t[::1] rows, Py_ssize_t[::1] cols,
                   Py_ssize_t[::1] act, Py_ssize_t[::1] hasb,
                   Py_ssize_t nlayers,
                   double[::1] af, Py_ssize_t[::1] aoff) noexcept nogil:
    # af[aoff[0]:] must already hold the input (with 1.0 appended when
    # biases[0] is set); writes every later layer's activations in place.
    cdef Py_ssize_t t, i, j, nr, nc, wbase, abase, obase
    cdef double s
    for t in range(nlayers):
        nr = rows[t]
        nc = cols[t]
        wbase = woff[t]
        abase = aoff[t]
        obase = aoff[t + 1]
        for j in range(nc):
            s = 0.0
            for i in range(nr):
                s += af[abase + i] * wf[wbase + i * nc + j]
            if act[t] == SIGMOID:
                s = 1.0 / (1.0 + exp(-s))
            af[obase + j] = s
        if t + 1 < nlayers and hasb[t + 1] == 1:
            af[obase + nc] = 1.0


cdef double _backward(double[::1] wf, Py_ssize_t[::1] woff,
                      Py_ssize_t[::1] rows, Py_ssize_t[::1] cols,
                      Py_ssize_t[::1] act,
                      Py_ssize_t nlayers,
                      double[::1] af, Py_ssize_t[::1] aoff,
                      double[::1] df, Py_ssize_t[::1] doff,
                      const double[::1] z, Py_ssize_t zbase) noexcept nogil:
    # Squared-error loss plus per-layer deltas written into df; the output
    # layer's delta folds in the activation derivative.
    cdef Py_ssize_t t, i, j, nz, n_units, nxt_n, wbase, abase, obase, dbase
    cdef double loss = 0.0
    cdef double d, g, s
    nz = cols[nlayers - 1]
    obase = aoff[nlayers]
    dbase = doff[nlayers - 1]
    for j in range(nz):
        d = af[obase + j] - z[zbase + j]
        loss += d * d
        g = 2.0 * d
        if act[nlayers - 1] == SIGMOID:
            g = g * (af[obase + j] * (1.0 - af[obase + j]))
        df[dbase + j] = g
    for t in range(nlayers - 2, -1, -1):
        n_units = cols[t]
        nxt_n = cols[t + 1]
        wbase = woff[t + 1]
        abase = aoff[t + 1]
        dbase = doff[t]
        for i in range(n_units):
            s = 0.0
            for j in range(nxt_n):
                s += wf[wbase + i * nxt_n + j] * df[doff[t + 1] + j]
            if act[t] == SIGMOID:
                s = s * (af[abase + i] * (1.0 - af[abase + i]))
            df[dbase + i] = s
    return loss


def _prep(weights, acts, biases):
    """Flatten the network into contiguous buffers plus index tables."""
    nlayers = len(weights)
    rows = np.empty(nlayers, dtype=np.intp)
    cols = np.empty(nlayers, dtype=np.intp)
    act = np.empty(nlayers, dtype=np.intp)
    hasb = np.empty(nlayers, dtype=np.intp)
    woff = np.empty(nlayers + 1, dtype=np.intp)
    aoff = np.empty(nlayers + 2, dtype=np.intp)
    doff = np.empty(nlayers + 1, dtype=np.intp)
    parts = []
    wo = 0
    ao = 0
    do = 0
    for t, w in enumerate(weights):
        w = np.ascontiguousarray(w, dtype=np.float64)
        parts.append(w.ravel())
        rows[t] = w.shape[0]
        cols[t] = w.shape[1]
        act[t] = acts[t]
        hasb[t] = 1 if biases[t] else 0
        woff[t] = wo
        wo += w.shape[0] * w.shape[1]
        aoff[t] = ao
        ao += w.shape[0]  # rows == stored activation length of layer t
        doff[t] = do
        do += w.shape[1]
    woff[nlayers] = wo
    aoff[nlayers] = ao
    aoff[nlayers + 1] = ao + int(cols[nlayers - 1])
    doff[nlayers] = do
    wf = np.concatenate(parts)
    af = np.zeros(int(aoff[nlayers + 1]), dtype=np.float64)
    df = np.zeros(do, dtype=np.float64)
    return wf, woff, rows, cols, act, hasb, af, aoff, df, doff


def forward_batch(weights, acts, biases, X):
    """Evaluate the network on every row of ``X``; returns an (m, n_L) array."""
    wf, woff, rows, cols, act, hasb, af, aoff, df, doff = _prep(weights, acts, biases)
    cdef double[::1] wfv = wf
    cdef Py_ssize_t[::1] woffv = woff
    cdef Py_ssize_t[::1] rowsv = rows
    cdef Py_ssize_t[::1] colsv = cols
    cdef Py_ssize_t[::1] actv = act
    cdef Py_ssize_t[::1] hasbv = hasb
    cdef double[::1] afv = af
    cdef Py_ssize_t[::1] aoffv = aoff
    cdef Py_ssize_t nlayers = len(weights)
    Xc = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[:, ::1] Xv = Xc
    cdef Py_ssize_t m = Xv.shape[0]
    cdef Py_ssize_t nx = Xv.shape[1]
    cdef Py_ssize_t n_out = colsv[nlayers - 1]
    out = np.empty((m, n_out), dtype=np.float64)
    cdef double[:, ::1] outv = out
    cdef Py_ssize_t r, i, obase
    with nogil:
        for r in range(m):
            for i in range(nx):
                afv[i] = Xv[r, i]
            if hasbv[0] == 1:
                afv[nx] = 1.0
            _forward(wfv, woffv, rowsv, colsv, actv, hasbv, nlayers, afv, aoffv)
            obase = aoffv[nlayers]
            for i in range(n_out):
                outv[r, i] = afv[obase + i]
    return out


def grad_one(weights, acts, biases, x, z):
    """Squared-error loss and weight gradients for a single sample."""
    wf, woff, rows, cols, act, hasb, af, aoff, df, doff = _prep(weights, acts, biases)
    cdef double[::1] wfv = wf
    cdef Py_ssize_t[::1] woffv = woff
    cdef Py_ssize_t[::1] rowsv = rows
    cdef Py_ssize_t[::1] colsv = cols
    cdef Py_ssize_t[::1] actv = act
    cdef Py_ssize_t[::1] hasbv = hasb
    cdef double[::1] afv = af
    cdef Py_ssize_t[::1] aoffv = aoff
    cdef double[::1] dfv = df
    cdef Py_ssize_t[::1] doffv = doff
    cdef Py_ssize_t nlayers = len(weights)
    xc = np.ascontiguousarray(x, dtype=np.float64)
    zc = np.ascontiguousarray(z, dtype=np.float64)
    cdef double[::1] xv = xc
    cdef double[::1] zv = zc
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        afv[i] = xv[i]
    if hasbv[0] == 1:
        afv[xv.shape[0]] = 1.0
    _forward(wfv, woffv, rowsv, colsv, actv, hasbv, nlayers, afv, aoffv)
    cdef double loss = _backward(wfv, woffv, rowsv, colsv, actv, nlayers,
                                 afv, aoffv, dfv, doffv, zv, 0)
    grads = []
    cdef Py_ssize_t t, j, nr, nc, abase, dbase
    cdef double av
    cdef double[:, ::1] gv
    for t in range(nlayers):
        nr = rowsv[t]
        nc = colsv[t]
        abase = aoffv[t]
        dbase = doffv[t]
        g = np.empty((nr, nc), dtype=np.float64)
        gv = g
        for i in range(nr):
            av = afv[abase + i]
            for j in range(nc):
                gv[i, j] = av * dfv[dbase + j]
        grads.append(g)
    return loss, grads


def sgd_epoch(weights, acts, biases, X, Z, double lr):
    """One pass of per-sample gradient updates, rows visited in order.

    Mutates ``weights`` in place and returns the summed squared-error loss.
    """
    wf, woff, rows, cols, act, hasb, af, aoff, df, doff = _prep(weights, acts, biases)
    cdef double[::1] wfv = wf
    cdef Py_ssize_t[::1] woffv = woff
    cdef Py_ssize_t[::1] rowsv = rows
    cdef Py_ssize_t[::1] colsv = cols
    cdef Py_ssize_t[::1] actv = act
    cdef Py_ssize_t[::1] hasbv = hasb
    cdef double[::1] afv = af
    cdef Py_ssize_t[::1] aoffv = aoff
    cdef double[::1] dfv = df
    cdef Py_ssize_t[::1] doffv = doff
    cdef Py_ssize_t nlayers = len(weights)
    Xc = np.ascontiguousarray(X, dtype=np.float64)
    Zc = np.ascontiguousarray(Z, dtype=np.float64)
    cdef double[:, ::1] Xv = Xc
    cdef double[:, ::1] Zv = Zc
    cdef Py_ssize_t m = Xv.shape[0]
    cdef Py_ssize_t nx = Xv.shape[1]
    cdef double total = 0.0
    cdef Py_ssize_t r, t, i, j, nr, nc, wbase, abase, dbase
    cdef double av
    with nogil:
        for r in range(m):
            for i in range(nx):
                afv[i] = Xv[r, i]
            if hasbv[0] == 1:
                afv[nx] = 1.0
            _forward(wfv, woffv, rowsv, colsv, actv, hasbv, nlayers, afv, aoffv)
            total += _backward(wfv, woffv, rowsv, colsv, actv, nlayers,
                               afv, aoffv, dfv, doffv, Zv[r], 0)
            for t in range(nlayers):
                nr = rowsv[t]
                nc = colsv[t]
                wbase = woffv[t]
                abase = aoffv[t]
                dbase = doffv[t]
                for i in range(nr):
                    av = afv[abase + i]
                    for j in range(nc):
                        wfv[wbase + i * nc + j] -= lr * (av * dfv[dbase + j])
    cdef Py_ssize_t nr2, nc2
    for t in range(nlayers):
        nr2 = rows[t]
        nc2 = cols[t]
        weights[t][:, :] = wf[woff[t]:woff[t + 1]].reshape(nr2, nc2)
    return total


def hill_climb(w0, double delta, V, Z):
    """Coordinate-perturbation search for the 3-weight single unit.

    Same candidate enumeration and adoption rule as the pure-Python backend;
    returns the (T + 1, 3) weight trace with row 0 equal to ``w0``.
    """
    Vc = np.ascontiguousarray(V, dtype=np.float64)
    Zc = np.ascontiguousarray(Z, dtype=np.float64)
    cdef double[:, ::1] Vv = Vc
    cdef double[::1] Zv = Zc
    cdef Py_ssize_t iters = Vv.shape[0]
    trace = np.empty((iters + 1, 3), dtype=np.float64)
    cdef double[:, ::1] tv = trace
    cdef double w1 = w0[0]
    cdef double w2 = w0[1]
    cdef double w3 = w0[2]
    cdef double[3] steps
    steps[0] = -1.0
    steps[1] = 0.0
    steps[2] = 1.0
    cdef Py_ssize_t it, i1, i2, i3
    cdef double v1, v2, v3, z, d, l, best, b1, b2, b3, c1, c2, c3
    tv[0, 0] = w1
    tv[0, 1] = w2
    tv[0, 2] = w3
    with nogil:
        for it in range(iters):
            v1 = Vv[it, 0]
            v2 = Vv[it, 1]
            v3 = Vv[it, 2]
            z = Zv[it]
            d = z - (w1 * v1 + w2 * v2 + w3 * v3)
            best = d * d
            b1 = w1
            b2 = w2
            b3 = w3
            for i1 in range(3):
                c1 = w1 + delta * steps[i1]
                for i2 in range(3):
                    c2 = w2 + delta * steps[i2]
                    for i3 in range(3):
                        c3 = w3 + delta * steps[i3]
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
            tv[it + 1, 0] = w1
            tv[it + 1, 1] = w2
            tv[it + 1, 2] = w3
    return trace
