"""Rank-1 lattices and their unions.

A rank-1 lattice with generating vector ``z`` and size ``M`` has nodes
``x_j = (j z mod M) / M`` for ``j = 0..M-1``.  A frequency ``k`` is seen on
it through its residue ``k . z mod M``.  Two frequencies with the same
residue alias each other, so the useful quantities are the residues and the
subset of frequencies that have no collision partner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .index_sets import FrequencyIndexSet

_INT64_SAFE_M = 2**31


@dataclass(frozen=True)
class RankOneLattice:
    z: tuple[int, ...]
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("lattice size must be positive")
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))

    @property
    def dim(self) -> int:
        return len(self.z)

    def nodes(self) -> np.ndarray:
        """Nodes as an ``(M, d)`` float array in ``[0, 1)^d``."""
        return nodes(self.z, self.M)

    def residues(self, freqs) -> np.ndarray:
        return residue(freqs, self.z, self.M)


def nodes(z, M: int) -> np.ndarray:
    j = np.arange(M, dtype=np.int64)[:, None]
    zz = np.asarray(z, dtype=np.int64) % M
    if M < _INT64_SAFE_M:
        idx = (j * zz[None, :]) % M
    else:
        idx = np.array([[(int(a) * int(b)) % M for b in zz] for a in j[:, 0]], dtype=np.int64)
    return idx / M


def residue(freqs, z, M: int) -> np.ndarray:
    """``k . z mod M`` for every row ``k`` of ``freqs``, computed without overflow."""
    k = np.atleast_2d(np.asarray(freqs, dtype=np.int64))
    zz = np.asarray(z, dtype=np.int64)
    if k.shape[1] != zz.shape[0]:
        raise ValueError("generating vector and frequencies differ in dimension")
    if M < _INT64_SAFE_M:
        kr = k % M
        zr = zz % M
        acc = np.zeros(k.shape[0], dtype=np.int64)
        for s in range(k.shape[1]):
            acc = (acc + kr[:, s] * zr[s]) % M
        return acc
    zs = [int(v) for v in zz]
    out = [sum(int(a) * b for a, b in zip(row, zs)) % M for row in k]
    return np.array(out, dtype=np.int64)


def aliasing_free_mask(freqs, z, M: int) -> np.ndarray:
    """Boolean mask of frequencies whose residue no other frequency shares."""
    r = residue(freqs, z, M)
    if r.size == 0:
        return np.zeros(0, dtype=bool)
    _, inverse, counts = np.unique(r, return_inverse=True, return_counts=True)
    return counts[inverse] == 1


def aliasing_free_subset(I: FrequencyIndexSet, z, M: int) -> FrequencyIndexSet:
    return I.subset(aliasing_free_mask(I.frequencies, z, M))


def is_reconstructing_single(I: FrequencyIndexSet, z, M: int) -> bool:
    """True when ``k -> k . z mod M`` is injective on ``I``."""
    if len(I) > M:
        return False
    r = residue(I.frequencies, z, M)
    return np.unique(r).size == r.size


def in_dual(h, z, M: int) -> np.ndarray:
    """Membership of ``h`` in the dual lattice ``{h : h . z = 0 mod M}``."""
    return residue(h, z, M) == 0


@dataclass
class MultipleLattice:
    """Union of rank-1 lattices, plus construction provenance.

    ``meta`` holds the fields echoed into the JSON form (seed, c, delta and
    the hash of the index set the lattice was built for).
    """

    components: list[RankOneLattice]
    meta: dict = field(default_factory=dict)

    @property
    def L(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return self.components[0].dim if self.components else 0

    @property
    def total_size(self) -> int:
        """``sum_l M_l``, the nominal sample count used in error plots."""
        return sum(c.M for c in self.components)

    def node_count_bound(self) -> int:
        return node_count_bound(self)

    def to_json(self) -> str:
        payload = {
            "d": self.dim,
            "index_set_hash": self.meta.get("index_set_hash"),
            "components": [{"z": list(c.z), "M": c.M} for c in self.components],
            "seed": self.meta.get("seed"),
            "c": self.meta.get("c"),
            "delta": self.meta.get("delta"),
        }
        return json.dumps(payload, indent=2)

    def write(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def from_json(cls, text: str) -> "MultipleLattice":
        data = json.loads(text)
        d = int(data["d"])
        comps = [RankOneLattice(tuple(c["z"]), int(c["M"])) for c in data["components"]]
        if any(c.dim != d for c in comps):
            raise ValueError("component dimension does not match d")
        meta = {key: data.get(key) for key in ("index_set_hash", "seed", "c", "delta")}
        return cls(comps, meta)

    @classmethod
    def read(cls, path) -> "MultipleLattice":
        return cls.from_json(Path(path).read_text())


def coverage_counts(I: FrequencyIndexSet, ml: MultipleLattice) -> tuple[np.ndarray, list[np.ndarray]]:
    """Per-frequency counter of aliasing-free components and the per-component masks."""
    counts = np.zeros(len(I), dtype=np.int64)
    masks = []
    for comp in ml.components:
        mask = aliasing_free_mask(I.frequencies, comp.z, comp.M)
        counts += mask
        masks.append(mask)
    return counts, masks


def coverage_check(I: FrequencyIndexSet, ml: MultipleLattice) -> tuple[bool, FrequencyIndexSet]:
    """Whether the aliasing-free subsets cover ``I``; also returns what is left over."""
    counts, _ = coverage_counts(I, ml)
    uncovered = I.subset(counts == 0)
    return len(uncovered) == 0, uncovered


def node_count_bound(ml: MultipleLattice) -> int:
    """``1 - L + sum M_l``: every component contains the origin."""
    if ml.L == 0:
        return 0
    return 1 - ml.L + ml.total_size


def distinct_node_count(ml: MultipleLattice) -> int:
    """Exact number of distinct nodes across all components.

    Each node ``a / M`` is reduced to lowest terms (common denominator over
    the coordinates) before deduplication, so shared nodes of components with
    different sizes are identified correctly.
    """
    keys = []
    for comp in ml.components:
        M = comp.M
        j = np.arange(M, dtype=np.int64)
        zz = np.asarray(comp.z, dtype=np.int64) % M
        if M < _INT64_SAFE_M:
            num = (j[:, None] * zz[None, :]) % M
        else:
            num = np.array([[(int(a) * int(b)) % M for b in zz] for a in j], dtype=np.int64)
        g = np.gcd.reduce(np.concatenate([num, np.full((M, 1), M, dtype=np.int64)], axis=1), axis=1)
        keys.append(np.concatenate([(M // g)[:, None], num // g[:, None]], axis=1))
    if not keys:
        return 0
    allkeys = np.concatenate(keys, axis=0)
    return int(np.unique(allkeys, axis=0).shape[0])
