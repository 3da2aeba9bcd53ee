"""Signatures, Schur functions and the transition coefficients of the
Aztec diamond measure.

Everything on the oracle path is exact (``fractions.Fraction``); the only
floating point routines are :func:`schur_eval` and
:func:`dk_eigenrelation_check`.

A signature is a weakly decreasing tuple of integers.  Its shifted
coordinates ``lam[i] + N - 1 - i`` (0-based ``i``) are the particle positions.
"""
from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

Signature = tuple[int, ...]

MAX_EXHAUSTIVE_M = 5


class SignatureError(ValueError):
    pass


def as_signature(parts: Sequence[int]) -> Signature:
    sig = tuple(int(p) for p in parts)
    for a, b in zip(sig, sig[1:]):
        if a < b:
            raise SignatureError(f"not weakly decreasing: {sig}")
    return sig


def shifted(lam: Sequence[int]) -> list[int]:
    n = len(lam)
    return [lam[i] + n - 1 - i for i in range(n)]


def size(lam: Sequence[int]) -> int:
    return sum(lam)


def conjugate(lam: Sequence[int]) -> Signature:
    """Conjugate partition (trailing zeros dropped)."""
    if not lam or lam[0] <= 0:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def interlace_check(a: Sequence[int], b: Sequence[int], mode: str) -> bool:
    """``horizontal``: a has one part less than b and b_i >= a_i >= b_{i+1}.
    ``vertical``: equal lengths and b_i - a_i in {0, 1}."""
    if mode == "horizontal":
        if len(a) != len(b) - 1:
            raise SignatureError(
                f"horizontal interlacing needs len(a) = len(b) - 1, got {len(a)}, {len(b)}")
        return all(b[i] >= a[i] >= b[i + 1] for i in range(len(a)))
    if mode == "vertical":
        if len(a) != len(b):
            raise SignatureError(
                f"vertical interlacing needs equal lengths, got {len(a)}, {len(b)}")
        return all(b[i] - a[i] in (0, 1) for i in range(len(a)))
    raise ValueError(f"unknown interlacing mode {mode!r}")


# ---------------------------------------------------------------- Schur


def schur_at_ones(lam: Sequence[int], N: int) -> Fraction:
    """s_lam(1^N) from the Weyl dimension product."""
    if len(lam) != N:
        raise SignatureError(f"signature length {len(lam)} != N={N}")
    num = 1
    den = 1
    for i in range(N):
        for j in range(i + 1, N):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return Fraction(num, den)


def schur_eval(lam: Sequence[int], xs: Sequence[complex], tol: float = 1e-12) -> complex:
    """Bialternant det[x_i^{lam_j+N-j}] / prod_{i<j}(x_i - x_j)."""
    import numpy as np

    n = len(lam)
    if len(xs) != n:
        raise SignatureError(f"need {n} variables, got {len(xs)}")
    if n == 0:
        return 1.0 + 0j
    x = np.asarray(xs, dtype=complex)
    vand = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            d = x[i] - x[j]
            if abs(d) < tol:
                raise ValueError(
                    "coincident evaluation points; perturb them or use schur_at_ones "
                    "/ schur_exact for repeated values")
            vand *= d
    exps = np.array(shifted(lam))
    mat = x[:, None] ** exps[None, :]
    return complex(np.linalg.det(mat) / vand)


def _complete_homogeneous(values: Sequence[Fraction], kmax: int) -> list[Fraction]:
    # h_k of the given values, k = 0..kmax, by adding one variable at a time
    h = [Fraction(1)] + [Fraction(0)] * kmax
    for v in values:
        for k in range(1, kmax + 1):
            h[k] += v * h[k - 1]
    return h


def _elementary(values: Sequence[Fraction], kmax: int) -> list[Fraction]:
    e = [Fraction(1)] + [Fraction(0)] * kmax
    for v in values:
        for k in range(kmax, 0, -1):
            e[k] += v * e[k - 1]
    return e


def _det_fraction(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    a = [row[:] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for cc in range(c, n):
                    a[r][cc] -= f * a[c][cc]
    return det


def schur_exact(lam: Sequence[int], values: Sequence) -> Fraction:
    """s_lam(values) exactly via Jacobi-Trudi; repeated values are fine.

    ``lam`` is a partition (nonnegative, zeros allowed).  Returns 0 when lam
    has more nonzero parts than there are values."""
    vals = [Fraction(v) for v in values]
    parts = [p for p in lam if p > 0]
    if any(p < 0 for p in lam):
        raise SignatureError("negative parts not supported")
    if len(parts) > len(vals):
        return Fraction(0)
    if not parts:
        return Fraction(1)
    n = len(parts)
    h = _complete_homogeneous(vals, parts[0] + n)
    mat = [[h[parts[i] - i + j] if parts[i] - i + j >= 0 else Fraction(0)
            for j in range(n)] for i in range(n)]
    return _det_fraction(mat)


def schur_exact_dual(lam: Sequence[int], values: Sequence) -> Fraction:
    """s_{lam'}(values), the conjugate shape, via the dual Jacobi-Trudi identity
    det[e_{lam_i - i + j}]."""
    vals = [Fraction(v) for v in values]
    parts = [p for p in lam if p > 0]
    if not parts:
        return Fraction(1)
    if parts[0] > len(vals):
        return Fraction(0)
    n = len(parts)
    e = _elementary(vals, parts[0] + n)
    mat = [[e[parts[i] - i + j] if 0 <= parts[i] - i + j <= len(e) - 1 else Fraction(0)
            for j in range(n)] for i in range(n)]
    return _det_fraction(mat)


# ---------------------------------------------------- transition weights


def _vertical_ok(lam: Sequence[int], ups: Sequence[int]) -> bool:
    return len(lam) == len(ups) and all(u - l in (0, 1) for l, u in zip(lam, ups)) and all(
        ups[i] >= ups[i + 1] for i in range(len(ups) - 1))


def kappa_coefficient(lam: Sequence[int], ups: Sequence[int], beta) -> Fraction:
    """kappa_beta(lam -> ups); zero unless ups is a signature with ups - lam in {0,1}^t."""
    t = len(lam)
    if len(ups) != t:
        raise SignatureError("kappa needs equal lengths")
    if not _vertical_ok(lam, ups):
        return Fraction(0)
    beta = Fraction(beta)
    d = size(ups) - size(lam)
    return beta ** d * (1 - beta) ** (t - d) * schur_at_ones(ups, t) / schur_at_ones(lam, t)


def kappa_float(lam: Sequence[int], ups: Sequence[int], beta: float) -> float:
    """Double precision twin of :func:`kappa_coefficient` for the sampler path."""
    t = len(lam)
    if not _vertical_ok(lam, ups):
        return 0.0
    d = size(ups) - size(lam)
    ratio = 1.0
    xl = shifted(lam)
    xu = shifted(ups)
    for i in range(t):
        for j in range(i + 1, t):
            ratio *= (xu[i] - xu[j]) / (xl[i] - xl[j])
    return beta ** d * (1.0 - beta) ** (t - d) * ratio


def pr_coefficient(ups: Sequence[int], lam: Sequence[int]) -> Fraction:
    """pr(ups -> lam) = s_lam(1^{t-1}) / s_ups(1^t) when lam interlaces ups."""
    t = len(ups)
    if len(lam) != t - 1:
        raise SignatureError("pr needs len(lam) = len(ups) - 1")
    if not interlace_check(lam, ups, "horizontal"):
        return Fraction(0)
    return schur_at_ones(lam, t - 1) / schur_at_ones(ups, t)


def vertical_successors(lam: Sequence[int]) -> Iterator[Signature]:
    """All ups with lam <_v ups."""
    t = len(lam)
    for eps in itertools.product((0, 1), repeat=t):
        ups = tuple(l + e for l, e in zip(lam, eps))
        if all(ups[i] >= ups[i + 1] for i in range(t - 1)):
            yield ups


def horizontal_predecessors(ups: Sequence[int]) -> Iterator[Signature]:
    """All lam of length len(ups)-1 with ups_i >= lam_i >= ups_{i+1}."""
    ranges = [range(ups[i + 1], ups[i] + 1) for i in range(len(ups) - 1)]
    for lam in itertools.product(*ranges):
        yield tuple(lam)


# ------------------------------------------------------- sequences


@dataclass(frozen=True)
class SignatureSequence:
    """(lam^(M), ups^(M), lam^(M-1), ..., lam^(1), ups^(1)).

    ``lambdas[j]`` is lam^(M-j) and ``upsilons[j]`` is ups^(M-j), so both lists
    run over lengths M, M-1, ..., 1."""

    M: int
    lambdas: tuple[Signature, ...]
    upsilons: tuple[Signature, ...]

    def lam(self, t: int) -> Signature:
        if t == 0:
            return ()
        return self.lambdas[self.M - t]

    def ups(self, t: int) -> Signature:
        return self.upsilons[self.M - t]

    def violations(self) -> list[str]:
        out = []
        M = self.M
        if len(self.lambdas) != M or len(self.upsilons) != M:
            return [f"expected {M} lambdas and upsilons"]
        for t in range(1, M + 1):
            lam, ups = self.lam(t), self.ups(t)
            if len(lam) != t or len(ups) != t:
                out.append(f"level {t}: wrong lengths")
                continue
            if any(lam[i] < lam[i + 1] for i in range(t - 1)) or any(
                    ups[i] < ups[i + 1] for i in range(t - 1)):
                out.append(f"level {t}: not a signature")
                continue
            if not interlace_check(lam, ups, "vertical"):
                out.append(f"level {t}: lam^({t}) does not vertically interlace ups^({t})")
            if t > 1 and not interlace_check(self.lam(t - 1), ups, "horizontal"):
                out.append(f"level {t}: lam^({t - 1}) does not interlace ups^({t})")
        if M and any(self.lam(M)):
            out.append("lam^(M) is not zero")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def jumps(self) -> list[int]:
        """|ups^(t)| - |lam^(t)| for t = 1..M."""
        return [size(self.ups(t)) - size(self.lam(t)) for t in range(1, self.M + 1)]


def make_sequence(M: int, chain: Sequence[Sequence[int]]) -> SignatureSequence:
    """Build from the flat list (lam^(M), ups^(M), ..., lam^(1), ups^(1))."""
    if len(chain) != 2 * M:
        raise SignatureError(f"need {2 * M} signatures, got {len(chain)}")
    lambdas = tuple(as_signature(chain[2 * j]) for j in range(M))
    upsilons = tuple(as_signature(chain[2 * j + 1]) for j in range(M))
    return SignatureSequence(M, lambdas, upsilons)


@dataclass(frozen=True)
class WeightResult:
    value: Fraction
    valid: bool
    reason: str = ""


def sequence_probability(seq: SignatureSequence, betas: Sequence) -> WeightResult:
    """Probability of the sequence under the product of kappa and pr factors.

    The product is checked against the closed form
    prod (1-b_i)^i prod (b_i/(1-b_i))^{|ups^(i)|-|lam^(i)|}."""
    M = seq.M
    if len(betas) != M:
        raise ValueError("need one beta per level")
    problems = seq.violations()
    if problems:
        return WeightResult(Fraction(0), False, "; ".join(problems))
    bs = [Fraction(b) for b in betas]
    prod = Fraction(1)
    for t in range(M, 0, -1):
        prod *= kappa_coefficient(seq.lam(t), seq.ups(t), bs[t - 1])
        prod *= pr_coefficient(seq.ups(t), seq.lam(t - 1))
    closed = Fraction(1)
    for t, d in zip(range(1, M + 1), seq.jumps()):
        b = bs[t - 1]
        closed *= (1 - b) ** t
        if d:
            closed *= (b / (1 - b)) ** d
    if prod != closed:
        raise AssertionError(f"product form {prod} != closed form {closed}")
    return WeightResult(prod, True)


def all_sequences(M: int) -> Iterator[SignatureSequence]:
    """Every valid sequence of size M (exhaustive, M <= 5)."""
    if M > MAX_EXHAUSTIVE_M:
        raise ValueError(f"exhaustive enumeration refused for M={M} > {MAX_EXHAUSTIVE_M}")

    def rec(t: int, lam: Signature, acc: list):
        for ups in vertical_successors(lam):
            if t == 1:
                yield acc + [lam, ups]
                continue
            for nxt in horizontal_predecessors(ups):
                yield from rec(t - 1, nxt, acc + [lam, ups])

    if M == 0:
        yield SignatureSequence(0, (), ())
        return
    for chain in rec(M, (0,) * M, []):
        yield make_sequence(M, chain)


# ---------------------------------------------------------- moments


def moments_pk(lam: Sequence[int], k: int) -> int:
    if k < 1:
        raise ValueError("k >= 1 required")
    return sum(x ** k for x in shifted(lam))


def empirical_measure(lam: Sequence[int]) -> list[float]:
    n = len(lam)
    if n < 1:
        raise ValueError("empty signature")
    return [x / n for x in shifted(lam)]


# ------------------------------------------------- D_k eigenrelation


def _alternant(lam: Sequence[int], x: Sequence[complex]) -> complex:
    import numpy as np

    exps = np.array(shifted(lam))
    xa = np.asarray(x, dtype=complex)
    return complex(np.linalg.det(xa[:, None] ** exps[None, :]))


def _euler_power(f, x: list[complex], i: int, k: int, h: float) -> complex:
    """(x_i d/dx_i)^k f at x, k <= 3, central differences in log x_i.

    With x_i = exp(s), x_i d/dx_i = d/ds, so this is the k-th derivative in s."""
    def g(s):
        y = list(x)
        y[i] = x[i] * cmath.exp(s)
        return f(y)

    if k == 0:
        return f(x)
    if k == 1:
        return (g(h) - g(-h)) / (2 * h)
    if k == 2:
        return (g(h) - 2 * g(0) + g(-h)) / (h * h)
    if k == 3:
        return (g(2 * h) - 2 * g(h) + 2 * g(-h) - g(-2 * h)) / (2 * h ** 3)
    raise ValueError("k <= 3 supported")


def dk_value(lam: Sequence[int], k: int, x: Sequence[complex], h: float = 1e-3) -> complex:
    """(D_k s_lam)/s_lam at x from finite differences with one Richardson step."""
    x = list(x)
    N = len(lam)

    def est(step):
        tot = sum(_euler_power(lambda y: _alternant(lam, y), x, i, k, step) for i in range(N))
        return tot / _alternant(lam, x)

    a, b = est(h), est(h / 2)
    return (4 * b - a) / 3


def dk_eigenrelation_check(lam: Sequence[int], k: int, tol: float = 1e-6,
                           seed: int = 0) -> bool:
    """Check D_k s_lam = p_k(lam) s_lam numerically at a generic complex point.

    D_k = V^{-1} sum_i (x_i d_i)^k V, and V s_lam is the alternant."""
    N = len(lam)
    if N > 3 or k > 3 or N < 1:
        raise ValueError("N <= 3 and k <= 3 required")
    rng = random.Random(seed)
    for _ in range(20):
        x = [complex(rng.uniform(0.6, 1.4), rng.uniform(-0.4, 0.4)) for _ in range(N)]
        gaps = [abs(x[i] - x[j]) for i in range(N) for j in range(i + 1, N)]
        if N == 1 or min(gaps) > 0.15:
            break
    else:  # pragma: no cover
        raise RuntimeError("could not find a generic evaluation point")
    val = dk_value(lam, k, x)
    target = moments_pk(lam, k)
    return abs(val - target) < tol * max(1.0, abs(target))
