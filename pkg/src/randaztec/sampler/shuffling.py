"""Generalized weighted domino shuffling.

Edges of the size-n diamond graph are stored in a ``2n x 2n`` array.  Entry
``(i, j)`` is the unit square ``(p, q) = (i - n, j - n)`` of the rotated
lattice (see :mod:`randaztec.aztec`); the edge it holds joins ``(p, q)`` and
``(p+1, q+1)`` when ``p + q`` is odd and ``(p+1, q)``, ``(p, q+1)`` otherwise.
The aligned ``2 x 2`` blocks are the n^2 square faces that get urban renewal.

Reduction: block ``[[a, b], [d, c]]`` becomes ``[[c, d], [b, a]] / (ac + bd)``
and the size n-1 array is the interior ``[1:-1, 1:-1]``.  Growth from size
n-1 to n: embed; a block holding an opposite pair is cleared, a block holding
one edge moves it to the opposite corner, and a block that held no edge gets
the diagonal pair with probability ``ac / (ac + bd)`` (size-n weights), else
the anti-diagonal pair.

Multiplying every weight of one size by a constant changes nothing (the
creation probabilities are ratios within a face and the next size is scaled
by the inverse), so each size is rescaled to max 1 to keep floats in range.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

from ..aztec import Tiling, _domino_from_cells, _from_rot
from ..rng import MASK64, uniforms


def one_periodic_weights(W: Sequence[float]) -> np.ndarray:
    """Full ``2M x 2M`` edge-weight array; level t carries W_t at the entries
    (2(M-t), odd j)."""
    M = len(W)
    A = np.ones((2 * M, 2 * M), dtype=float)
    for t, w in enumerate(W, start=1):
        A[2 * (M - t), 1::2] = float(w)
    return A


def _renew(A):
    n = A.shape[0] // 2
    a = A[0::2, 0::2]
    b = A[0::2, 1::2]
    d = A[1::2, 0::2]
    c = A[1::2, 1::2]
    delta = a * c + b * d
    out = np.empty_like(A)
    out[0::2, 0::2] = c / delta
    out[1::2, 1::2] = a / delta
    out[0::2, 1::2] = d / delta
    out[1::2, 0::2] = b / delta
    return out[1:-1, 1:-1] if n > 1 else out[:0, :0]


def _creation_probs(A):
    a = A[0::2, 0::2]
    b = A[0::2, 1::2]
    d = A[1::2, 0::2]
    c = A[1::2, 1::2]
    return a * c / (a * c + b * d)


def reduce_weights(A: np.ndarray, normalize: bool = True) -> list[np.ndarray]:
    """Creation probability tables for sizes 1..M (list index n-1 has shape (n, n)).

    Works with float arrays or object arrays of Fractions (exact; no rescaling)."""
    A = np.asarray(A)
    if A.shape[0] != A.shape[1] or A.shape[0] % 2:
        raise ValueError("weight array must be 2M x 2M")
    exact = A.dtype == object
    if not exact and not np.all(A > 0):
        raise ValueError("weights must be positive")
    M = A.shape[0] // 2
    probs: list = [None] * M
    cur = A if exact else A.astype(float)
    for n in range(M, 0, -1):
        if normalize and not exact:
            cur = cur / cur.max()
        probs[n - 1] = _creation_probs(cur)
        if n > 1:
            cur = _renew(cur)
    return probs


def reduce_weights_one_periodic(W: Sequence[float]) -> list[np.ndarray]:
    """Same tables as :func:`reduce_weights` for one-periodic input, computed on
    one 2x2 pattern per block row (O(M^2) work).  Entry n-1 has shape (n,)."""
    M = len(W)
    pat = np.ones((M, 2, 2), dtype=float)
    for t, w in enumerate(W, start=1):
        pat[M - t, 0, 1] = float(w)
    probs: list = [None] * M
    for n in range(M, 0, -1):
        pat = pat / pat.max()
        a, b, d, c = pat[:, 0, 0], pat[:, 0, 1], pat[:, 1, 0], pat[:, 1, 1]
        ac = a * c
        bd = b * d
        probs[n - 1] = ac / (ac + bd)
        if n > 1:
            delta = ac + bd
            ren = np.empty_like(pat)
            ren[:, 0, 0] = c / delta
            ren[:, 1, 1] = a / delta
            ren[:, 0, 1] = d / delta
            ren[:, 1, 0] = b / delta
            # interior shift: new block row I uses row 1 of old row I and row 0 of old row I+1,
            # columns (1, 0) of the repeated pattern
            new = np.empty((n - 1, 2, 2), dtype=float)
            new[:, 0, 0] = ren[:-1, 1, 1]
            new[:, 0, 1] = ren[:-1, 1, 0]
            new[:, 1, 0] = ren[1:, 0, 1]
            new[:, 1, 1] = ren[1:, 0, 0]
            pat = new
    return probs


# ---------------------------------------------------------------- growth


def _grow_numpy(state: np.ndarray, prob: np.ndarray, u: np.ndarray) -> np.ndarray:
    """One growth step from size n-1 to n.  ``prob`` and ``u`` have shape (n, n)."""
    n = prob.shape[0]
    X = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    if n > 1:
        X[1:-1, 1:-1] = state
    x00 = X[0::2, 0::2].copy()
    x01 = X[0::2, 1::2].copy()
    x10 = X[1::2, 0::2].copy()
    x11 = X[1::2, 1::2].copy()
    empty = (x00 | x01 | x10 | x11) == 0
    kill = (x00 & x11).astype(bool)
    x00[kill] = 0
    x11[kill] = 0
    kill = (x01 & x10).astype(bool)
    x01[kill] = 0
    x10[kill] = 0
    Y = np.zeros_like(X)
    Y[0::2, 0::2] = x11
    Y[1::2, 1::2] = x00
    Y[0::2, 1::2] = x10
    Y[1::2, 0::2] = x01
    diag = (empty & (u < prob)).astype(np.uint8)
    anti = (empty & ~(u < prob)).astype(np.uint8)
    Y[0::2, 0::2] |= diag
    Y[1::2, 1::2] |= diag
    Y[0::2, 1::2] |= anti
    Y[1::2, 0::2] |= anti
    return Y


def _prob_grid(p: np.ndarray, n: int) -> np.ndarray:
    if p.ndim == 1:
        return np.ascontiguousarray(np.broadcast_to(p[:, None], (n, n)))
    return np.ascontiguousarray(p)


def _block_offsets(M: int) -> np.ndarray:
    # counter offset of growth step n: sum_{m<n} m^2
    return np.concatenate([[0], np.cumsum(np.arange(1, M + 1) ** 2)]).astype(np.int64)


def grow_reference(probs: Sequence[np.ndarray], seed: int) -> np.ndarray:
    """Plain numpy growth; consumes exactly the uniforms :func:`grow` uses."""
    M = len(probs)
    off = _block_offsets(M)
    state = np.zeros((0, 0), dtype=np.uint8)
    for n in range(1, M + 1):
        u = uniforms(seed, int(off[n - 1]) + 1, n * n).reshape(n, n)
        state = _grow_numpy(state, _prob_grid(np.asarray(probs[n - 1], dtype=float), n), u)
    return state


if numba is not None:

    @numba.njit(cache=True)
    def _uniform(seed, k):  # pragma: no cover - compiled
        z = seed + k * np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        return np.float64(z >> np.uint64(11)) * (1.0 / 9007199254740992.0)

    @numba.njit(cache=True)
    def _grow_all(M, flat, rowwise, seed):  # pragma: no cover - compiled
        # Every size lives in one 2M x 2M frame: entry (i, j) of the size-n array
        # is frame entry (i + M - n, j + M - n).  The size n-1 state therefore
        # already sits where the embedding puts it, and since blocks do not
        # share entries the update can be done in place.
        X = np.zeros((2 * M, 2 * M), dtype=np.uint8)
        counter = 0
        poff = 0
        for n in range(1, M + 1):
            o = M - n
            for I in range(n):
                if rowwise:
                    prow = flat[poff + I]
                i = o + 2 * I
                for J in range(n):
                    j = o + 2 * J
                    x00 = X[i, j]
                    x01 = X[i, j + 1]
                    x10 = X[i + 1, j]
                    x11 = X[i + 1, j + 1]
                    counter += 1
                    if x00 + x01 + x10 + x11 == 0:
                        p = prow if rowwise else flat[poff + I * n + J]
                        d = 1 if _uniform(seed, np.uint64(counter)) < p else 0
                        X[i, j] = d
                        X[i + 1, j + 1] = d
                        X[i, j + 1] = 1 - d
                        X[i + 1, j] = 1 - d
                    elif x00 + x11 == 1 or x01 + x10 == 1:
                        X[i, j] = x11
                        X[i + 1, j + 1] = x00
                        X[i, j + 1] = x10
                        X[i + 1, j] = x01
                    else:
                        X[i, j] = 0
                        X[i + 1, j + 1] = 0
                        X[i, j + 1] = 0
                        X[i + 1, j] = 0
            poff += n if rowwise else n * n
        return X
else:  # pragma: no cover
    _grow_all = None


def grow(probs: Sequence[np.ndarray], seed: int, use_numba: bool = True) -> np.ndarray:
    """Growth phase driven by the counter stream of ``seed``; returns the
    final 2M x 2M edge-indicator array."""
    M = len(probs)
    if M == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    if not use_numba or _grow_all is None:
        return grow_reference(probs, seed)
    rowwise = np.asarray(probs[0]).ndim == 1
    flat = np.concatenate([np.ravel(np.asarray(p, dtype=float)) for p in probs])
    return _grow_all(M, flat, rowwise, np.uint64(seed & MASK64))


def edges_to_tiling(X: np.ndarray) -> Tiling:
    M = X.shape[0] // 2
    ii, jj = np.nonzero(X)
    dominos = []
    for i, j in zip(ii.tolist(), jj.tolist()):
        p, q = i - M, j - M
        if (p + q) % 2:
            a, b = (p, q), (p + 1, q + 1)
        else:
            a, b = (p + 1, q), (p, q + 1)
        dominos.append(_domino_from_cells(_from_rot(*a), _from_rot(*b)))
    return Tiling.from_dominos(M, dominos)


def level_signature_from_edges(X: np.ndarray, N: int) -> tuple[int, ...]:
    """lam^(N) read straight off the edge array, without building a Tiling.

    The lambda line is u = M - 2N with cells v = 2j - M + 1.  A cell is a
    particle iff its edge goes to line u + 1, i.e. sits in array row u + M:
    column v + M for the '/' edge or v - 1 + M for the '\\' edge."""
    M = X.shape[0] // 2
    if not 1 <= N <= M:
        raise ValueError("level out of range")
    row = X[M - 2 * N + M]
    v = 2 * np.arange(M) - M + 1
    occ = np.zeros(M, dtype=bool)
    for q in (v + M, v - 1 + M):
        ok = (q >= 0) & (q < 2 * M)
        occ[ok] |= row[q[ok]].astype(bool)
    pos = np.nonzero(occ)[0][::-1]
    t = len(pos)
    return tuple(int(p) - (t - 1 - i) for i, p in enumerate(pos))


def shuffle_edges(W: Sequence[float], seed: int, use_numba: bool = True) -> np.ndarray:
    if any(w <= 0 for w in W):
        raise ValueError("weights must be positive")
    return grow(reduce_weights_one_periodic(W), seed, use_numba=use_numba)


def shuffle_sample(W: Sequence[float], seed: int, use_numba: bool = True) -> Tiling:
    """One exact sample of the one-periodic Boltzmann measure with weights W."""
    if len(W) == 0:
        return Tiling(0, ())
    return edges_to_tiling(shuffle_edges(W, seed, use_numba=use_numba))


def shuffle_sample_general(A: np.ndarray, seed: int) -> Tiling:
    """Sample for an arbitrary positive 2M x 2M edge-weight array."""
    return edges_to_tiling(grow(reduce_weights(A), seed))


# ----------------------------------------------------- exact law of the algorithm


def algorithm_law_exact(A) -> dict[Tiling, object]:
    """Exact output distribution of the growth procedure, enumerating every
    creation choice.  ``A`` is an object array of Fractions.  Small M only."""
    probs = reduce_weights(np.asarray(A, dtype=object))
    M = len(probs)
    states = {b"": (np.zeros((0, 0), dtype=np.uint8), 1)}
    for n in range(1, M + 1):
        P = probs[n - 1]
        new_states: dict = {}
        for key, (st, pr) in states.items():
            # which blocks are empty after deletion + slide does not depend on u
            base = _grow_numpy(st, np.zeros((n, n)), np.ones((n, n)))
            X = np.zeros((2 * n, 2 * n), dtype=np.uint8)
            if n > 1:
                X[1:-1, 1:-1] = st
            e = (X[0::2, 0::2] | X[0::2, 1::2] | X[1::2, 0::2] | X[1::2, 1::2]) == 0
            empties = list(zip(*np.nonzero(e)))
            for choice in range(1 << len(empties)):
                Y = base.copy()
                p = pr
                for bit, (I, J) in enumerate(empties):
                    Y[2 * I:2 * I + 2, 2 * J:2 * J + 2] = 0
                    if (choice >> bit) & 1:
                        Y[2 * I, 2 * J] = Y[2 * I + 1, 2 * J + 1] = 1
                        p = p * P[I, J]
                    else:
                        Y[2 * I, 2 * J + 1] = Y[2 * I + 1, 2 * J] = 1
                        p = p * (1 - P[I, J])
                k = Y.tobytes()
                if k in new_states:
                    new_states[k] = (Y, new_states[k][1] + p)
                else:
                    new_states[k] = (Y, p)
        states = new_states
    return {edges_to_tiling(Y): p for Y, p in states.values()}
