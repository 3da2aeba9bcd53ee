"""Aztec diamond geometry.

Coordinates
-----------
Cell ``(x, y)`` is the unit square ``[x-1, x] x [y-1, y]``; the diamond of
size M is the set of cells with ``|x - 1/2| + |y - 1/2| <= M``, so
``x, y`` range over ``-M+1 .. M``.  Lattice vertices ``(a, b)`` range over
``-M .. M``.

A domino is stored as ``(x, y, orient)`` where ``(x, y)`` is its left cell
(horizontal, ``orient = 0``) or its bottom cell (vertical, ``orient = 1``).

For the bijection with signatures we rotate: ``u = x + y - 1`` and
``v = x - y``.  Cells become the points of ``[-M, M]^2`` with ``u + v`` odd
and every domino joins two cells whose ``u`` differ by one::

      u = -M     -M+1     -M+2   ...    M-1      M
      lam^(M)   ups^(M)  lam^(M-1) ... ups^(1)  (empty)

On a lambda line a cell holds a particle when its partner lies on line
``u + 1``; on an upsilon line when its partner lies on ``u - 1``.  The part
``lam_i`` counts the empty sites to the left of the i-th particle.  A
particle that moves from ``lam^(t)`` to ``ups^(t)`` by one site uses a
horizontal domino whose left cell is on the lambda line; these are the
weighted dominos (class ``N`` below) and carry ``W_t``.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import SignatureSequence, SignatureError, make_sequence

HORIZONTAL = 0
VERTICAL = 1

MAX_ENUM_M = 5

Domino = tuple[int, int, int]


def cells(M: int) -> list[tuple[int, int]]:
    return [(x, y) for y in range(-M + 1, M + 1) for x in range(-M + 1, M + 1)
            if abs(2 * x - 1) + abs(2 * y - 1) <= 2 * M]


def in_diamond(M: int, x: int, y: int) -> bool:
    return abs(2 * x - 1) + abs(2 * y - 1) <= 2 * M


def domino_cells(d: Domino) -> tuple[tuple[int, int], tuple[int, int]]:
    x, y, o = d
    return ((x, y), (x + 1, y)) if o == HORIZONTAL else ((x, y), (x, y + 1))


def color(M: int, x: int, y: int) -> int:
    """Checkerboard colour anchored to the diamond: 0 on lambda-line cells."""
    return (x + y + M + 1) % 2


def domino_class(M: int, d: Domino) -> str:
    """N: horizontal, left cell colour 0 (the weighted class);
    S: horizontal, colour 1; E: vertical, bottom colour 0; W: vertical, colour 1."""
    x, y, o = d
    c = color(M, x, y)
    if o == HORIZONTAL:
        return "N" if c == 0 else "S"
    return "E" if c == 0 else "W"


def weighted_level(M: int, d: Domino) -> int:
    """Level t whose weight W_t the domino carries, or 0 if unweighted."""
    if domino_class(M, d) != "N":
        return 0
    x, y, _ = d
    return (M - x - y + 1) // 2


@dataclass(frozen=True)
class Tiling:
    M: int
    dominos: tuple[Domino, ...]

    @staticmethod
    def from_dominos(M: int, dominos: Iterable[Sequence[int]]) -> "Tiling":
        ds = tuple(sorted((int(d[1]), int(d[0]), int(d[2])) for d in dominos))
        return Tiling(M, tuple((x, y, o) for y, x, o in ds))

    def classes(self) -> list[str]:
        return [domino_class(self.M, d) for d in self.dominos]

    def validate(self) -> None:
        M = self.M
        if len(self.dominos) != M * (M + 1):
            raise ValueError(f"expected {M * (M + 1)} dominos, got {len(self.dominos)}")
        seen = set()
        for d in self.dominos:
            if d[2] not in (HORIZONTAL, VERTICAL):
                raise ValueError(f"bad orientation in {d}")
            for c in domino_cells(d):
                if not in_diamond(M, *c):
                    raise ValueError(f"domino {d} leaves the diamond")
                if c in seen:
                    raise ValueError(f"cell {c} covered twice")
                seen.add(c)
        if len(seen) != 2 * M * (M + 1):
            raise ValueError("region not covered")

    def partner_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        out = {}
        for d in self.dominos:
            a, b = domino_cells(d)
            out[a] = b
            out[b] = a
        return out


# --------------------------------------------------------- enumeration


def enumerate_tilings(M: int) -> list[Tiling]:
    """All tilings of the size-M diamond by backtracking (M <= 5)."""
    if M > MAX_ENUM_M:
        raise ValueError(f"enumeration refused for M={M} > {MAX_ENUM_M}")
    order = cells(M)
    region = set(order)
    covered: set = set()
    out: list[Tiling] = []
    current: list[Domino] = []

    def rec(pos: int):
        while pos < len(order) and order[pos] in covered:
            pos += 1
        if pos == len(order):
            out.append(Tiling.from_dominos(M, current))
            return
        x, y = order[pos]
        for d in ((x, y, HORIZONTAL), (x, y, VERTICAL)):
            a, b = domino_cells(d)
            if b in region and b not in covered:
                covered.update((a, b))
                current.append(d)
                rec(pos + 1)
                current.pop()
                covered.difference_update((a, b))

    rec(0)
    return out


# -------------------------------------------------------------- weights


def weight_exponents(t: Tiling) -> list[int]:
    """n_i = number of weighted dominos at level i, i = 1..M."""
    n = [0] * t.M
    for d in t.dominos:
        lvl = weighted_level(t.M, d)
        if lvl:
            n[lvl - 1] += 1
    return n


def tiling_weight(t: Tiling, W: Sequence[float]) -> float:
    if len(W) != t.M:
        raise ValueError("need one weight per level")
    out = 1.0
    for w, n in zip(W, weight_exponents(t)):
        out *= float(w) ** n
    return out


def tiling_weight_exact(t: Tiling, W: Sequence) -> Fraction:
    if len(W) != t.M:
        raise ValueError("need one weight per level")
    out = Fraction(1)
    for w, n in zip(W, weight_exponents(t)):
        out *= Fraction(w) ** n
    return out


def partition_function_exact(W: Sequence) -> Fraction:
    z = Fraction(1)
    for i, w in enumerate(W, start=1):
        z *= (1 + Fraction(w)) ** i
    return z


# ----------------------------------------------------------- bijection


def _to_rot(x: int, y: int) -> tuple[int, int]:
    return x + y - 1, x - y


def _from_rot(u: int, v: int) -> tuple[int, int]:
    return (u + v + 1) // 2, (u - v + 1) // 2


def _domino_from_cells(a: tuple[int, int], b: tuple[int, int]) -> Domino:
    (x1, y1), (x2, y2) = sorted([a, b], key=lambda c: (c[1], c[0]))
    if y1 == y2:
        return (min(x1, x2), y1, HORIZONTAL)
    return (x1, min(y1, y2), VERTICAL)


def _signature_from_positions(occupied: Sequence[int]) -> tuple[int, ...]:
    pos = sorted(occupied, reverse=True)
    t = len(pos)
    return tuple(p - (t - 1 - i) for i, p in enumerate(pos))


def _positions_from_signature(lam: Sequence[int]) -> list[int]:
    t = len(lam)
    return [lam[i] + t - 1 - i for i in range(t)]


def tiling_to_signatures(t: Tiling) -> SignatureSequence:
    M = t.M
    partner = t.partner_map()
    chain = []
    for lvl in range(M, 0, -1):
        u = M - 2 * lvl
        lam_occ = []
        for j in range(M):
            v = 2 * j - M + 1
            pu, _ = _to_rot(*partner[_from_rot(u, v)])
            if pu == u + 1:
                lam_occ.append(j)
        ups_occ = []
        for j in range(M + 1):
            v = 2 * j - M
            pu, _ = _to_rot(*partner[_from_rot(u + 1, v)])
            if pu == u:
                ups_occ.append(j)
        chain.append(_signature_from_positions(lam_occ))
        chain.append(_signature_from_positions(ups_occ))
    return make_sequence(M, chain)


def signatures_to_tiling(seq: SignatureSequence) -> Tiling:
    problems = seq.violations()
    if problems:
        raise SignatureError("invalid sequence: " + "; ".join(problems))
    M = seq.M
    dominos = []
    for lvl in range(M, 0, -1):
        u = M - 2 * lvl
        lam_pos = sorted(_positions_from_signature(seq.lam(lvl)))
        ups_pos = sorted(_positions_from_signature(seq.ups(lvl)))
        for j, k in zip(lam_pos, ups_pos):
            if k - j not in (0, 1):
                raise SignatureError(f"level {lvl}: particle jump {k - j}")
            a = _from_rot(u, 2 * j - M + 1)
            b = _from_rot(u + 1, 2 * k - M)
            dominos.append(_domino_from_cells(a, b))
        ups_holes = sorted(set(range(M + 1)) - set(ups_pos))
        nxt_pos = set(_positions_from_signature(seq.lam(lvl - 1)))
        nxt_holes = sorted(set(range(M)) - nxt_pos)
        if len(ups_holes) != len(nxt_holes):
            raise SignatureError(f"level {lvl}: hole counts differ")
        for k, j in zip(ups_holes, nxt_holes):
            if k - j not in (0, 1):
                raise SignatureError(f"level {lvl}: hole shift {k - j}")
            a = _from_rot(u + 1, 2 * k - M)
            b = _from_rot(u + 2, 2 * j - M + 1)
            dominos.append(_domino_from_cells(a, b))
    til = Tiling.from_dominos(M, dominos)
    til.validate()
    return til


# ------------------------------------------------------ height function


@dataclass(frozen=True)
class HeightFunction:
    """Heights on vertices (a, b), a, b in -M..M, stored at [b + M, a + M].
    ``mask`` marks the vertices that are corners of diamond cells."""

    M: int
    values: np.ndarray
    mask: np.ndarray

    def at(self, a: int, b: int) -> int:
        if not self.mask[b + self.M, a + self.M]:
            raise KeyError((a, b))
        return int(self.values[b + self.M, a + self.M])


def _vertex_edges(M: int, a: int, b: int):
    """Neighbours of a vertex along region edges, with the increment rule
    inputs: (neighbour, left cell, right cell) for the edge directed away."""
    out = []
    # east: left = cell above, right = cell below
    for (na, nb), left, right in (
        ((a + 1, b), (a + 1, b + 1), (a + 1, b)),
        ((a - 1, b), (a, b), (a, b + 1)),
        ((a, b + 1), (a, b + 1), (a + 1, b + 1)),
        ((a, b - 1), (a + 1, b), (a, b)),
    ):
        if in_diamond(M, *left) or in_diamond(M, *right):
            out.append(((na, nb), left, right))
    return out


def height_function(t: Tiling) -> HeightFunction:
    """Heights with +-1 along domino boundaries and -+3 across dominos.

    Walking an edge with a colour-0 cell on the left adds +1, or -3 if the
    edge cuts through a domino; the signs flip for a colour-1 left cell.
    The bottom corner vertex (0, -M) has height 0."""
    M = t.M
    partner = t.partner_map()
    n = 2 * M + 1
    vals = np.zeros((n, n), dtype=np.int64)
    mask = np.zeros((n, n), dtype=bool)
    start = (0, -M)
    mask[start[1] + M, start[0] + M] = True
    stack = [start]
    while stack:
        a, b = stack.pop()
        h = vals[b + M, a + M]
        for (na, nb), left, right in _vertex_edges(M, a, b):
            s = 1 if color(M, *left) == 0 else -1
            inside = partner.get(left) == right
            inc = -3 * s if inside else s
            if mask[nb + M, na + M]:
                if vals[nb + M, na + M] != h + inc:
                    raise ValueError("inconsistent height increments; tiling invalid")
                continue
            mask[nb + M, na + M] = True
            vals[nb + M, na + M] = h + inc
            stack.append((na, nb))
    return HeightFunction(M, vals, mask)


def reconstruct_tiling(h: HeightFunction) -> Tiling:
    """Dominos are exactly the edges whose height increment is +-3."""
    M = h.M
    dominos = set()
    for b in range(-M, M + 1):
        for a in range(-M, M + 1):
            if not h.mask[b + M, a + M]:
                continue
            for (na, nb), left, right in _vertex_edges(M, a, b):
                if not (in_diamond(M, *left) and in_diamond(M, *right)):
                    continue
                if abs(h.at(na, nb) - h.at(a, b)) == 3:
                    dominos.add(_domino_from_cells(left, right))
    til = Tiling.from_dominos(M, dominos)
    til.validate()
    return til


# ------------------------------------------------------------- output


FOUR_COLORS = {"N": "#d62728", "S": "#2ca02c", "E": "#f2c80f", "W": "#1f77b4"}
_CLASS_INDEX = {"N": 0, "S": 1, "E": 2, "W": 3}
GRAY_SHADES = ["#101010", "#303030", "#505050", "#707070",
               "#909090", "#b0b0b0", "#d0d0d0", "#f0f0f0"]


def render_svg(t: Tiling, palette: str = "four-color", unit: int = 10) -> str:
    if palette not in ("four-color", "eight-shade-grayscale"):
        raise ValueError(f"unknown palette {palette!r}")
    M = t.M
    side = 2 * M * unit
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{side}" height="{side}" viewBox="0 0 {side} {side}">',
    ]
    for d in t.dominos:
        x, y, o = d
        cls = domino_class(M, d)
        if palette == "four-color":
            fill = FOUR_COLORS[cls]
        else:
            par = (x if o == HORIZONTAL else y) % 2
            fill = GRAY_SHADES[2 * _CLASS_INDEX[cls] + par]
        w, hgt = (2, 1) if o == HORIZONTAL else (1, 2)
        left = (x - 1 + M) * unit
        top = (M - (y - 1) - hgt) * unit
        lines.append(
            f'<rect x="{left}" y="{top}" width="{w * unit}" height="{hgt * unit}" '
            f'fill="{fill}" stroke="#000000" stroke-width="0.5" class="{cls}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


MAGIC = b"AZTC"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sBi")
_RECORD = np.dtype([("x", "<i4"), ("y", "<i4"), ("orient", "u1")])


def tiling_to_bytes(t: Tiling) -> bytes:
    arr = np.zeros(len(t.dominos), dtype=_RECORD)
    if t.dominos:
        d = np.asarray(t.dominos, dtype=np.int64)
        arr["x"], arr["y"], arr["orient"] = d[:, 0], d[:, 1], d[:, 2]
    return _HEADER.pack(MAGIC, FORMAT_VERSION, t.M) + arr.tobytes()


def tiling_from_bytes(data: bytes) -> Tiling:
    if len(data) < _HEADER.size:
        raise ValueError("truncated tiling file")
    magic, ver, M = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ValueError("not an AZTC file")
    if ver != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {ver}")
    n = M * (M + 1)
    body = data[_HEADER.size:]
    if len(body) != n * _RECORD.itemsize:
        raise ValueError("tiling file has the wrong length")
    arr = np.frombuffer(body, dtype=_RECORD)
    t = Tiling.from_dominos(M, zip(arr["x"].tolist(), arr["y"].tolist(), arr["orient"].tolist()))
    t.validate()
    return t


def write_pgm(path, field: np.ndarray, mask: np.ndarray | None = None) -> None:
    """Binary PGM (P5), 8-bit, linearly rescaled; masked pixels are 0.
    Row 0 of ``field`` is written as the bottom image row."""
    f = np.asarray(field, dtype=float)
    if mask is None:
        mask = np.isfinite(f)
    out = np.zeros(f.shape, dtype=np.uint8)
    if mask.any():
        lo, hi = f[mask].min(), f[mask].max()
        scale = 254.0 / (hi - lo) if hi > lo else 0.0
        out[mask] = (1 + np.round((f[mask] - lo) * scale)).astype(np.uint8)
    out = out[::-1]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{out.shape[1]} {out.shape[0]}\n255\n".encode("ascii"))
        fh.write(out.tobytes())
