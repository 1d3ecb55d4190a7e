"""Derived structures on a valid configuration: nests, chains and summary counts.

A *nest* is a maximal tree of the nesting forest (an outermost ring plus
everything it surrounds); the *basic nest* is the one containing the
omitted cluster.  A *chain* starts at a ring that surrounds the omitted
cluster but no pole and follows the shift dynamics until the first
pole-surrounding ring; the *basic chain* is the chain starting at the
innermost omitted-surrounder.  The summary gathers the three counts the
period bounds are phrased in: number of poles h, number of nests n, and
basic-chain length l.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    Configuration,
    _ancestor_masks,
    _pole_mask,
    _upset_mask,
    require_valid,
)

__all__ = [
    "Nest",
    "Chain",
    "AnalysisSummary",
    "nest_partition",
    "innermost_ring",
    "basic_chain",
    "all_chains",
    "summarize",
]


@dataclass(frozen=True)
class Nest:
    root: int
    members: frozenset[int]
    pole: Optional[str]
    is_basic: bool

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "members": sorted(self.members),
            "pole": self.pole,
            "is_basic": self.is_basic,
        }


@dataclass(frozen=True)
class Chain:
    rings: tuple[int, ...]
    pole: str
    is_basic: bool

    @property
    def start(self) -> int:
        return self.rings[0]

    @property
    def length(self) -> int:
        return len(self.rings)

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "rings": list(self.rings),
            "pole": self.pole,
            "length": self.length,
            "is_basic": self.is_basic,
        }


@dataclass(frozen=True)
class AnalysisSummary:
    h: int
    n: int
    l: int
    basic_nest_has_pole: bool
    independent_count: int
    h1: int
    chains: tuple[Chain, ...]
    nests: tuple[Nest, ...]

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "n": self.n,
            "l": self.l,
            "basic_nest_has_pole": self.basic_nest_has_pole,
            "independent_count": self.independent_count,
            "H1": self.h1,
            "chains": [c.to_dict() for c in self.chains],
            "nests": [n.to_dict() for n in self.nests],
        }


def nest_partition(config: Configuration) -> list[Nest]:
    """One nest per forest root, ascending by root index."""
    require_valid(config)
    masks = _ancestor_masks(config)
    nests = []
    for root in range(config.p):
        if config.parent[root] is not None:
            continue
        members = frozenset(
            i for i in range(config.p) if i == root or (masks[i] >> root) & 1
        )
        pole = next((m.id for m in config.poles if m.host in members), None)
        nests.append(Nest(
            root=root,
            members=members,
            pole=pole,
            is_basic=config.omitted_host in members,
        ))
    return nests


def innermost_ring(config: Configuration) -> int:
    """The minimal ring (by nesting) surrounding the omitted cluster."""
    require_valid(config)
    return config.omitted_host


def _walk_chain(config: Configuration, start: int, masks, p_mask: int,
                is_basic: bool) -> Chain:
    rings = [start]
    cur = start
    for _ in range(config.p):
        if (p_mask >> cur) & 1:
            break
        cur = (cur + 1) % config.p
        rings.append(cur)
    pole = next(
        m.id for m in config.poles
        if (_upset_mask(config, masks, m.host) >> rings[-1]) & 1
    )
    return Chain(rings=tuple(rings), pole=pole, is_basic=is_basic)


def basic_chain(config: Configuration) -> Chain:
    """The chain starting at the innermost omitted-surrounder."""
    require_valid(config)
    masks = _ancestor_masks(config)
    p_mask = _pole_mask(config, masks)
    return _walk_chain(config, config.omitted_host, masks, p_mask, True)


def all_chains(config: Configuration) -> list[Chain]:
    """One chain per pole-free ring surrounding the omitted cluster, ascending by start."""
    require_valid(config)
    masks = _ancestor_masks(config)
    p_mask = _pole_mask(config, masks)
    s_mask = _upset_mask(config, masks, config.omitted_host)
    chains = []
    for start in range(config.p):
        if (s_mask >> start) & 1 and not (p_mask >> start) & 1:
            chains.append(_walk_chain(
                config, start, masks, p_mask, start == config.omitted_host))
    return chains


def summarize(config: Configuration) -> AnalysisSummary:
    """Counts and structures used by every theorem checker, in one pass."""
    require_valid(config)
    nests = tuple(nest_partition(config))
    chains = tuple(all_chains(config))
    basic = next(c for c in chains if c.is_basic)
    basic_nest = next(n for n in nests if n.is_basic)
    return AnalysisSummary(
        h=len(config.poles),
        n=len(nests),
        l=basic.length,
        basic_nest_has_pole=basic_nest.pole is not None,
        independent_count=len({c.pole for c in chains}),
        h1=config.omitted_host,
        chains=chains,
        nests=nests,
    )
