"""Core data model for cycles of Herman rings.

A period-p cycle of rings is encoded purely combinatorially: a laminar
nesting forest over ring indices 0..p-1 (``parent[i]`` is the ring
immediately surrounding ring i, or None for an outermost ring), the shift
dynamics i -> i+1 (mod p), pole markers (each pole carries the index of the
innermost ring surrounding it), one omitted-value marker, and an optional
periodic Fatou-component cycle given by marker locations.

Ring a *surrounds* ring b exactly when a is a proper ancestor of b in the
forest, and surrounds a pole or the omitted cluster exactly when it is the
marker's host or one of the host's ancestors.

``validate`` checks the axiom catalogue A1..A7 (plus F1..F3 for Fatou
cycles) and returns a report listing every violation with a witness;
``canonical_form`` picks the index rotation with the lexicographically
smallest encoding, the symmetry-breaking representative used everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional

__all__ = [
    "ConfigurationError",
    "InvalidConfigurationError",
    "PoleMarker",
    "FatouMarker",
    "FatouCycle",
    "Configuration",
    "Violation",
    "ViolationReport",
    "parse_configuration",
    "configuration_from_dict",
    "configuration_to_dict",
    "serialize_configuration",
    "ancestors",
    "descendants",
    "roots",
    "surrounds",
    "pole_surrounders",
    "omitted_surrounders",
    "rotate",
    "encoding",
    "canonical_form",
    "validate",
    "require_valid",
]

MARKER_RING = "ring"
MARKER_FREE_BOUNDED = "free_bounded"
MARKER_UNBOUNDED = "unbounded"
MARKER_KINDS = (MARKER_RING, MARKER_FREE_BOUNDED, MARKER_UNBOUNDED)


class ConfigurationError(ValueError):
    """Raised for malformed documents or structurally broken configurations."""


class InvalidConfigurationError(ValueError):
    """Raised when an operation requiring a valid configuration gets an invalid one."""

    def __init__(self, report: "ViolationReport"):
        ids = ", ".join(v.axiom_id for v in report.entries)
        super().__init__(f"configuration violates: {ids}")
        self.report = report


@dataclass(frozen=True)
class PoleMarker:
    id: str
    host: int


@dataclass(frozen=True)
class FatouMarker:
    kind: str
    host: Optional[int] = None


@dataclass(frozen=True)
class FatouCycle:
    q: int
    is_ring_cycle: bool = False
    markers: Optional[tuple[FatouMarker, ...]] = None


@dataclass(frozen=True)
class Configuration:
    p: int
    parent: tuple[Optional[int], ...]
    poles: tuple[PoleMarker, ...]
    omitted_host: int
    fatou: Optional[FatouCycle] = None


@dataclass(frozen=True)
class Violation:
    axiom_id: str
    witness: tuple
    message: str

    def to_dict(self) -> dict:
        return {
            "axiom_id": self.axiom_id,
            "witness": list(self.witness),
            "message": self.message,
        }


@dataclass(frozen=True)
class ViolationReport:
    entries: tuple[Violation, ...]

    @property
    def is_valid(self) -> bool:
        return not self.entries

    def axiom_ids(self) -> tuple[str, ...]:
        return tuple(v.axiom_id for v in self.entries)

    def to_dict(self) -> dict:
        return {
            "valid": self.is_valid,
            "violations": [v.to_dict() for v in self.entries],
        }


# ---------------------------------------------------------------------------
# Parsing / serialization


def _require(cond: bool, where: str, what: str) -> None:
    if not cond:
        raise ConfigurationError(f"{where}: {what}")


def configuration_from_dict(doc: dict) -> Configuration:
    """Build a structurally valid Configuration from a JSON document."""
    _require(isinstance(doc, dict), "document", "expected a JSON object")
    _require("p" in doc, "p", "missing field")
    p = doc["p"]
    _require(isinstance(p, int) and not isinstance(p, bool) and p >= 1,
             "p", "expected a positive integer")

    raw_parent = doc.get("parent")
    _require(isinstance(raw_parent, list), "parent", "expected an array")
    _require(len(raw_parent) == p, "parent", f"expected length {p}, got {len(raw_parent)}")
    parent: list[Optional[int]] = []
    for i, entry in enumerate(raw_parent):
        if entry is None:
            parent.append(None)
            continue
        _require(isinstance(entry, int) and not isinstance(entry, bool),
                 f"parent[{i}]", "expected an integer or null")
        _require(0 <= entry < p, f"parent[{i}]", f"index out of range (p={p})")
        _require(entry != i, f"parent[{i}]", "ring cannot surround itself")
        parent.append(entry)

    cycle = _find_parent_cycle(parent)
    if cycle is not None:
        rings = ", ".join(str(i) for i in sorted(cycle))
        raise ConfigurationError(f"parent: parent cycle detected at rings {{{rings}}}")

    raw_poles = doc.get("poles", [])
    _require(isinstance(raw_poles, list), "poles", "expected an array")
    poles: list[PoleMarker] = []
    seen_ids: set[str] = set()
    for i, entry in enumerate(raw_poles):
        _require(isinstance(entry, dict), f"poles[{i}]", "expected an object")
        pid = entry.get("id")
        _require(isinstance(pid, str) and pid, f"poles[{i}].id", "expected a non-empty string")
        _require(pid not in seen_ids, f"poles[{i}].id", f"duplicate pole id {pid!r}")
        seen_ids.add(pid)
        host = entry.get("host")
        _require(isinstance(host, int) and not isinstance(host, bool),
                 f"poles[{i}].host", "expected an integer")
        _require(0 <= host < p, f"poles[{i}].host", f"index out of range (p={p})")
        poles.append(PoleMarker(pid, host))

    _require("omitted_host" in doc, "omitted_host", "missing field")
    omitted = doc["omitted_host"]
    _require(isinstance(omitted, int) and not isinstance(omitted, bool),
             "omitted_host", "expected an integer")
    _require(0 <= omitted < p, "omitted_host", f"index out of range (p={p})")

    fatou = None
    if doc.get("fatou_cycle") is not None:
        fatou = _fatou_from_dict(doc["fatou_cycle"], p)

    return Configuration(p, tuple(parent), tuple(poles), omitted, fatou)


def _fatou_from_dict(raw: dict, p: int) -> FatouCycle:
    _require(isinstance(raw, dict), "fatou_cycle", "expected an object")
    q = raw.get("q")
    _require(isinstance(q, int) and not isinstance(q, bool) and q >= 1,
             "fatou_cycle.q", "expected a positive integer")
    is_ring_cycle = raw.get("is_ring_cycle", False)
    _require(isinstance(is_ring_cycle, bool), "fatou_cycle.is_ring_cycle", "expected a boolean")
    if is_ring_cycle:
        _require(raw.get("markers") is None, "fatou_cycle.markers",
                 "must be absent when is_ring_cycle is set")
        return FatouCycle(q=q, is_ring_cycle=True, markers=None)
    raw_markers = raw.get("markers")
    _require(isinstance(raw_markers, list), "fatou_cycle.markers", "expected an array")
    _require(len(raw_markers) == q, "fatou_cycle.markers", f"expected length q={q}")
    markers: list[FatouMarker] = []
    for i, entry in enumerate(raw_markers):
        where = f"fatou_cycle.markers[{i}]"
        _require(isinstance(entry, dict), where, "expected an object")
        kind = entry.get("kind")
        _require(kind in MARKER_KINDS, where, f"kind must be one of {MARKER_KINDS}")
        if kind == MARKER_RING:
            host = entry.get("host")
            _require(isinstance(host, int) and not isinstance(host, bool),
                     f"{where}.host", "expected an integer")
            _require(0 <= host < p, f"{where}.host", f"index out of range (p={p})")
            markers.append(FatouMarker(MARKER_RING, host))
        else:
            _require(entry.get("host") is None, f"{where}.host",
                     f"must be absent for kind {kind!r}")
            markers.append(FatouMarker(kind))
    return FatouCycle(q=q, is_ring_cycle=False, markers=tuple(markers))


def parse_configuration(text: str) -> Configuration:
    """Parse a configuration JSON document; structure is checked, axioms are not."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed document: {exc}") from exc
    return configuration_from_dict(doc)


def configuration_to_dict(config: Configuration) -> dict:
    doc = {
        "p": config.p,
        "parent": list(config.parent),
        "poles": [{"id": m.id, "host": m.host} for m in config.poles],
        "omitted_host": config.omitted_host,
    }
    if config.fatou is not None:
        fc: dict = {"q": config.fatou.q, "is_ring_cycle": config.fatou.is_ring_cycle}
        if not config.fatou.is_ring_cycle:
            fc["markers"] = [
                {"kind": m.kind} if m.host is None else {"kind": m.kind, "host": m.host}
                for m in config.fatou.markers
            ]
        doc["fatou_cycle"] = fc
    return doc


def serialize_configuration(config: Configuration) -> str:
    """One-line JSON form (JSONL friendly); parse_configuration inverts it."""
    return json.dumps(configuration_to_dict(config), separators=(",", ":"))


def _find_parent_cycle(parent: Iterable[Optional[int]]) -> Optional[set[int]]:
    """Return the set of rings on a parent cycle, or None when acyclic."""
    parent = list(parent)
    state = [0] * len(parent)  # 0 unseen, 1 on current walk, 2 done
    for start in range(len(parent)):
        if state[start]:
            continue
        path = []
        cur: Optional[int] = start
        while cur is not None and state[cur] == 0:
            state[cur] = 1
            path.append(cur)
            cur = parent[cur]
        if cur is not None and state[cur] == 1:
            return set(path[path.index(cur):])
        for ring in path:
            state[ring] = 2
    return None


# ---------------------------------------------------------------------------
# Forest queries


def _bit(i: int) -> int:
    return 1 << i


def _ancestor_masks(config: Configuration) -> list[int]:
    """Proper-ancestor bitmask per ring; requires an acyclic parent array."""
    p = config.p
    masks = [-1] * p

    def walk(i: int) -> int:
        if masks[i] >= 0:
            return masks[i]
        pa = config.parent[i]
        masks[i] = 0 if pa is None else (walk(pa) | _bit(pa))
        return masks[i]

    for i in range(p):
        walk(i)
    return masks


def ancestors(config: Configuration, i: int) -> tuple[int, ...]:
    """Rings properly surrounding ring i, innermost first."""
    out = []
    cur = config.parent[i]
    steps = 0
    while cur is not None:
        out.append(cur)
        cur = config.parent[cur]
        steps += 1
        if steps > config.p:
            raise ConfigurationError("parent cycle detected")
    return tuple(out)


def descendants(config: Configuration, i: int) -> frozenset[int]:
    """Rings properly surrounded by ring i."""
    masks = _ancestor_masks(config)
    return frozenset(b for b in range(config.p) if (masks[b] >> i) & 1)


def roots(config: Configuration) -> tuple[int, ...]:
    """Outermost rings (no surrounding ring), ascending."""
    return tuple(i for i in range(config.p) if config.parent[i] is None)


def surrounds(config: Configuration, a: int, b: int) -> bool:
    """True iff ring a properly surrounds ring b."""
    return a in ancestors(config, b)


def _upset_mask(config: Configuration, masks: list[int], i: int) -> int:
    """Ring i together with everything surrounding it."""
    return masks[i] | _bit(i)


def _pole_mask(config: Configuration, masks: list[int]) -> int:
    mask = 0
    for pole in config.poles:
        mask |= _upset_mask(config, masks, pole.host)
    return mask


def pole_surrounders(config: Configuration) -> frozenset[int]:
    """Rings surrounding at least one pole."""
    masks = _ancestor_masks(config)
    mask = _pole_mask(config, masks)
    return frozenset(i for i in range(config.p) if (mask >> i) & 1)


def omitted_surrounders(config: Configuration) -> frozenset[int]:
    """Rings surrounding the omitted cluster (the host and its ancestors)."""
    masks = _ancestor_masks(config)
    mask = _upset_mask(config, masks, config.omitted_host)
    return frozenset(i for i in range(config.p) if (mask >> i) & 1)


# ---------------------------------------------------------------------------
# Rotation and canonical form


def rotate(config: Configuration, k: int) -> Configuration:
    """Relabel ring i as i-k (mod p); the dynamics commutes with this shift."""
    p = config.p
    k %= p

    def rel(i: int) -> int:
        return (i - k) % p

    parent: list[Optional[int]] = [None] * p
    for i, pa in enumerate(config.parent):
        parent[rel(i)] = None if pa is None else rel(pa)
    poles = tuple(PoleMarker(m.id, rel(m.host)) for m in config.poles)
    fatou = config.fatou
    if fatou is not None and not fatou.is_ring_cycle:
        markers = tuple(
            FatouMarker(m.kind, rel(m.host)) if m.kind == MARKER_RING else m
            for m in fatou.markers
        )
        fatou = replace(fatou, markers=markers)
    return Configuration(p, tuple(parent), poles, rel(config.omitted_host), fatou)


def encoding(config: Configuration) -> tuple:
    """Rotation-comparison key: parent array (absent -> p), sorted pole hosts,
    omitted host, Fatou marker encoding."""
    p = config.p
    parent_enc = tuple(p if pa is None else pa for pa in config.parent)
    hosts = tuple(sorted(m.host for m in config.poles))
    fatou_enc: tuple
    if config.fatou is None:
        fatou_enc = ()
    elif config.fatou.is_ring_cycle:
        fatou_enc = (config.fatou.q, 1)
    else:
        marker_codes = tuple(
            m.host if m.kind == MARKER_RING else (p if m.kind == MARKER_FREE_BOUNDED else p + 1)
            for m in config.fatou.markers
        )
        fatou_enc = (config.fatou.q, 0) + marker_codes
    return (parent_enc, hosts, config.omitted_host, fatou_enc)


def _normalize_poles(config: Configuration) -> Configuration:
    """Sort poles by host and rename ids to w1..wh in that order."""
    ordered = tuple(
        PoleMarker(f"w{i + 1}", host)
        for i, host in enumerate(sorted(m.host for m in config.poles))
    )
    return replace(config, poles=ordered)


def canonical_form(config: Configuration) -> Configuration:
    """The rotation image with lexicographically minimal encoding.

    Pole markers are sorted by host and renumbered, so canonical forms of
    rotation-equivalent configurations compare equal structurally.
    """
    best_k = 0
    best = encoding(config)
    for k in range(1, config.p):
        cand = encoding(rotate(config, k))
        if cand < best:
            best = cand
            best_k = k
    return _normalize_poles(rotate(config, best_k))


# ---------------------------------------------------------------------------
# Validation


def _structural_violations(config: Configuration) -> list[Violation]:
    bad: list[Violation] = []
    p = config.p
    if not isinstance(p, int) or p < 1:
        return [Violation("STRUCT", (), "period must be a positive integer")]
    if len(config.parent) != p:
        return [Violation("STRUCT", (), f"parent array must have length {p}")]
    for i, pa in enumerate(config.parent):
        if pa is None:
            continue
        if not isinstance(pa, int) or not (0 <= pa < p) or pa == i:
            bad.append(Violation("STRUCT", (i,), f"parent[{i}] = {pa!r} is not a valid ring"))
    if bad:
        return bad
    cycle = _find_parent_cycle(config.parent)
    if cycle is not None:
        rings = ", ".join(str(i) for i in sorted(cycle))
        return [Violation("STRUCT", tuple(sorted(cycle)),
                          f"parent cycle detected at rings {{{rings}}}")]
    seen: set[str] = set()
    for i, m in enumerate(config.poles):
        if not isinstance(m.host, int) or not (0 <= m.host < p):
            bad.append(Violation("STRUCT", (i,), f"pole {m.id!r} host out of range"))
        if m.id in seen:
            bad.append(Violation("STRUCT", (i,), f"duplicate pole id {m.id!r}"))
        seen.add(m.id)
    if not isinstance(config.omitted_host, int) or not (0 <= config.omitted_host < p):
        bad.append(Violation("STRUCT", (), "omitted host out of range"))
    if config.fatou is not None:
        bad.extend(_structural_fatou(config))
    return bad


def _structural_fatou(config: Configuration) -> list[Violation]:
    fatou = config.fatou
    bad: list[Violation] = []
    if not isinstance(fatou.q, int) or fatou.q < 1:
        return [Violation("STRUCT", (), "fatou cycle period q must be a positive integer")]
    if fatou.is_ring_cycle:
        if fatou.markers is not None:
            bad.append(Violation("STRUCT", (), "ring-cycle fatou spec must not carry markers"))
        if fatou.q != config.p:
            bad.append(Violation("STRUCT", (),
                                 f"ring-cycle fatou spec declares q={fatou.q} but p={config.p}"))
        return bad
    if fatou.markers is None or len(fatou.markers) != fatou.q:
        return [Violation("STRUCT", (), f"fatou markers must have length q={fatou.q}")]
    for i, m in enumerate(fatou.markers):
        if m.kind not in MARKER_KINDS:
            bad.append(Violation("STRUCT", (i,), f"marker {i + 1} has unknown kind {m.kind!r}"))
        elif m.kind == MARKER_RING:
            if not isinstance(m.host, int) or not (0 <= m.host < config.p):
                bad.append(Violation("STRUCT", (i,), f"marker {i + 1} host out of range"))
        elif m.host is not None:
            bad.append(Violation("STRUCT", (i,), f"marker {i + 1} of kind {m.kind!r} has a host"))
    return bad


def validate(config: Configuration, *, strict_innermost: bool = False) -> ViolationReport:
    """Check the axiom catalogue; the report is empty iff the configuration is valid.

    A1  period at least 3.
    A2  at least two poles are surrounded by rings of the cycle.
    A3  no ring surrounds two poles.
    A4  the successor of any pole-surrounding ring surrounds the omitted cluster.
    A5  the innermost ring surrounding the omitted cluster surrounds no pole.
    A6  nesting transports forward through pole-free rings: a surrounds b and
        a pole-free implies successor(a) surrounds successor(b).
    A7  the predecessor of any ring surrounding the omitted cluster surrounds a pole.
    F1..F3 constrain an attached Fatou-component cycle (see below).

    With strict_innermost, the innermost omitted-surrounder must additionally
    surround no other ring of the cycle at all.
    """
    struct = _structural_violations(config)
    if struct:
        return ViolationReport(tuple(struct))

    p = config.p
    masks = _ancestor_masks(config)
    full = (1 << p) - 1
    s_mask = _upset_mask(config, masks, config.omitted_host)
    p_mask = _pole_mask(config, masks)
    bad: list[Violation] = []

    if p < 3:
        bad.append(Violation("A1", (p,), f"period {p} is below the minimum of 3"))

    if len(config.poles) < 2:
        bad.append(Violation(
            "A2", (len(config.poles),),
            f"cycle must surround at least 2 poles, found {len(config.poles)}"))

    for i in range(p):
        surrounded = [m.id for m in config.poles if (_upset_mask(config, masks, m.host) >> i) & 1]
        if len(surrounded) > 1:
            bad.append(Violation(
                "A3", (i,),
                f"ring {i} surrounds more than one pole: {', '.join(sorted(surrounded))}"))

    for i in range(p):
        if (p_mask >> i) & 1 and not (s_mask >> ((i + 1) % p)) & 1:
            bad.append(Violation(
                "A4", (i,),
                f"ring {i} surrounds a pole but ring {(i + 1) % p} does not surround "
                "the omitted cluster"))

    if (p_mask >> config.omitted_host) & 1:
        bad.append(Violation(
            "A5", (config.omitted_host,),
            f"innermost omitted-surrounding ring {config.omitted_host} surrounds a pole"))

    for b in range(p):
        outside = masks[b] & ~p_mask & full
        if not outside:
            continue
        nb = (b + 1) % p
        for a in range(p):
            if (outside >> a) & 1 and not (masks[nb] >> ((a + 1) % p)) & 1:
                bad.append(Violation(
                    "A6", (a, b),
                    f"pole-free ring {a} surrounds ring {b} but ring {(a + 1) % p} "
                    f"does not surround ring {nb}"))

    for k in range(p):
        if (s_mask >> k) & 1 and not (p_mask >> ((k - 1) % p)) & 1:
            bad.append(Violation(
                "A7", (k,),
                f"ring {k} surrounds the omitted cluster but ring {(k - 1) % p} "
                "surrounds no pole"))

    if strict_innermost:
        inner = config.omitted_host
        children = [i for i in range(p) if config.parent[i] == inner]
        if children:
            bad.append(Violation(
                "A5", tuple(children),
                f"strict innermost: ring {inner} surrounds ring(s) "
                f"{', '.join(str(c) for c in children)}"))

    if config.fatou is not None:
        bad.extend(_fatou_violations(config, masks, s_mask, p_mask))

    return ViolationReport(tuple(bad))


def _fatou_violations(config: Configuration, masks: list[int],
                      s_mask: int, p_mask: int) -> list[Violation]:
    """F1: the first component marker sits inside every omitted-surrounder.
    F2: nesting of markers transports forward through pole-free rings.
    F3: the last component of the cycle is unbounded."""
    fatou = config.fatou
    if fatou.is_ring_cycle:
        return []
    p = config.p
    q = fatou.q
    bad: list[Violation] = []

    def surrounder_mask(marker: FatouMarker) -> int:
        if marker.kind != MARKER_RING:
            return 0
        return _upset_mask(config, masks, marker.host)

    first = fatou.markers[0]
    if s_mask & ~surrounder_mask(first):
        bad.append(Violation(
            "F1", (0,),
            "marker 1 is not surrounded by every ring surrounding the omitted cluster"))

    for i, marker in enumerate(fatou.markers):
        m_mask = surrounder_mask(marker)
        if not m_mask:
            continue
        nxt = fatou.markers[(i + 1) % q]
        nxt_mask = surrounder_mask(nxt)
        for a in range(p):
            if (m_mask >> a) & 1 and not (p_mask >> a) & 1:
                if not (nxt_mask >> ((a + 1) % p)) & 1:
                    bad.append(Violation(
                        "F2", (a, i),
                        f"pole-free ring {a} surrounds marker {i + 1} but ring "
                        f"{(a + 1) % p} does not surround marker {((i + 1) % q) + 1}"))

    if fatou.markers[q - 1].kind != MARKER_UNBOUNDED:
        bad.append(Violation("F3", (q - 1,), f"marker {q} must be unbounded"))
    return bad


def require_valid(config: Configuration, *, strict_innermost: bool = False) -> None:
    """Raise InvalidConfigurationError when the configuration violates the axioms."""
    report = validate(config, strict_innermost=strict_innermost)
    if not report.is_valid:
        raise InvalidConfigurationError(report)
