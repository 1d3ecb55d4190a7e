"""Exhaustive generation of valid configurations, oracle and witness search.

``enumerate_configs`` walks the pruned search space (see the kernel modules)
and emits canonical forms in sorted encoding order, exactly one per rotation
orbit.  ``brute_force_reference`` is the deliberately naive oracle used by
the tests: it generates every parent array, pole-host subset and omitted
host, filters with ``validate`` and deduplicates by canonical form — it
shares no search logic with the kernels.  ``search_witness`` scans periods
for the smallest configuration matching an extremal criterion.

The hot inner loop lives in ``_speedups`` (Cython) with a pure-Python twin
in ``_pykernel``; the import below picks the compiled one when present, or
always the pure one when HERMANRINGS_PURE is set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable, Iterable, Optional

from .analysis import AnalysisSummary, summarize
from .model import (
    MARKER_FREE_BOUNDED,
    MARKER_RING,
    MARKER_UNBOUNDED,
    Configuration,
    FatouCycle,
    FatouMarker,
    PoleMarker,
    canonical_form,
    configuration_to_dict,
    encoding,
    validate,
)
from .theorems import tier2_period_flags

__all__ = [
    "DEFAULT_MAX_PERIOD",
    "HARD_MAX_PERIOD",
    "ORACLE_MAX_PERIOD",
    "EnumerationStats",
    "kernel_name",
    "enumerate_configs",
    "enumerate_list",
    "brute_force_reference",
    "search_witness",
    "witness_bound",
    "period_probe_report",
    "fatou_attachments",
    "WITNESS_CRITERIA",
]

if os.environ.get("HERMANRINGS_PURE"):
    from . import _pykernel as _kernel
    _KERNEL_NAME = "pure"
else:
    try:
        from . import _speedups as _kernel  # type: ignore[attr-defined]
        _KERNEL_NAME = "compiled"
    except ImportError:
        from . import _pykernel as _kernel
        _KERNEL_NAME = "pure"

DEFAULT_MAX_PERIOD = 8
HARD_MAX_PERIOD = 14
ORACLE_MAX_PERIOD = 6
FATOU_MAX_Q = 4


def kernel_name() -> str:
    """Which search kernel is active: "compiled" or "pure"."""
    return _KERNEL_NAME


@dataclass
class EnumerationStats:
    p: int
    total_canonical_count: int = 0
    counts_by: dict = field(default_factory=dict)
    min_p_witnesses: dict = field(default_factory=dict)

    def record(self, config: Configuration, summary: AnalysisSummary) -> None:
        key = (summary.h, summary.basic_nest_has_pole, summary.n, summary.l)
        self.total_canonical_count += 1
        self.counts_by[key] = self.counts_by.get(key, 0) + 1
        stratum = (summary.h, summary.basic_nest_has_pole)
        if stratum not in self.min_p_witnesses or self.min_p_witnesses[stratum][0] > config.p:
            self.min_p_witnesses[stratum] = (config.p, config)

    def merge(self, other: "EnumerationStats") -> None:
        self.total_canonical_count += other.total_canonical_count
        for key, count in other.counts_by.items():
            self.counts_by[key] = self.counts_by.get(key, 0) + count
        for stratum, (p, config) in other.min_p_witnesses.items():
            if stratum not in self.min_p_witnesses or self.min_p_witnesses[stratum][0] > p:
                self.min_p_witnesses[stratum] = (p, config)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "total_canonical_count": self.total_canonical_count,
            "counts_by": [
                {"h": h, "basic_nest_has_pole": pole, "n": n, "l": l, "count": count}
                for (h, pole, n, l), count in sorted(self.counts_by.items())
            ],
            "min_p_witnesses": [
                {"h": h, "basic_nest_has_pole": pole, "p": p,
                 "configuration": configuration_to_dict(config)}
                for (h, pole), (p, config) in sorted(self.min_p_witnesses.items())
            ],
        }


def _check_period(p: int, allow_large: bool) -> None:
    if p < 3:
        raise ValueError(f"period must be at least 3, got {p}")
    if p > HARD_MAX_PERIOD:
        raise ValueError(f"period {p} exceeds the hard limit {HARD_MAX_PERIOD}")
    if p > DEFAULT_MAX_PERIOD and not allow_large:
        raise ValueError(
            f"period {p} exceeds the default budget {DEFAULT_MAX_PERIOD}; "
            "pass allow_large=True (CLI: --allow-large)")


def _raw_to_config(p: int, parent_raw: tuple, hosts: tuple) -> Configuration:
    parent = tuple(None if x < 0 else x for x in parent_raw)
    poles = tuple(PoleMarker(f"w{i + 1}", host) for i, host in enumerate(hosts))
    return Configuration(p, parent, poles, 0)


def enumerate_configs(
    p: int,
    filters: Iterable[Callable[[AnalysisSummary], bool]] = (),
    sink: Optional[Callable[[Configuration], None]] = None,
    *,
    fatou_q: Optional[int] = None,
    allow_large: bool = False,
) -> EnumerationStats:
    """Feed every valid canonical configuration of period p to the sink.

    Filters are predicates on the analysis summary; with ``fatou_q`` each
    base configuration is expanded into all marker placements of a q-periodic
    Fatou cycle that satisfy the cycle axioms.  Emission order is sorted by
    canonical encoding, so output is deterministic.
    """
    _check_period(p, allow_large)
    if fatou_q is not None and not 1 <= fatou_q <= FATOU_MAX_Q:
        raise ValueError(f"fatou cycle period must be in 1..{FATOU_MAX_Q}, got {fatou_q}")
    filters = tuple(filters)

    emitted: list[tuple[tuple, Configuration, AnalysisSummary]] = []
    for parent_raw, hosts in _kernel.enumerate_forests(p):
        config = _raw_to_config(p, parent_raw, hosts)
        report = validate(config)
        if not report.is_valid:  # kernel must only produce valid configurations
            raise RuntimeError(
                f"enumeration kernel produced an invalid configuration: "
                f"{report.axiom_ids()} for {configuration_to_dict(config)}")
        summary = summarize(config)
        if not all(pred(summary) for pred in filters):
            continue
        if fatou_q is None:
            canon = canonical_form(config)
            emitted.append((encoding(canon), canon, summary))
        else:
            for attached in fatou_attachments(config, fatou_q):
                canon = canonical_form(attached)
                emitted.append((encoding(canon), canon, summary))

    emitted.sort(key=lambda item: item[0])
    stats = EnumerationStats(p=p)
    for _, config, summary in emitted:
        stats.record(config, summary)
        if sink is not None:
            sink(config)
    return stats


def enumerate_list(p: int, **kwargs) -> list[Configuration]:
    """Collected form of enumerate_configs."""
    out: list[Configuration] = []
    enumerate_configs(p, sink=out.append, **kwargs)
    return out


def fatou_attachments(base: Configuration, q: int):
    """All q-marker Fatou cycles on the base that satisfy the cycle axioms."""
    p = base.p
    options = ([FatouMarker(MARKER_UNBOUNDED), FatouMarker(MARKER_FREE_BOUNDED)]
               + [FatouMarker(MARKER_RING, host) for host in range(p)])
    for markers in product(options, repeat=q):
        candidate = replace(base, fatou=FatouCycle(q=q, markers=tuple(markers)))
        if validate(candidate).is_valid:
            yield candidate


def brute_force_reference(p: int) -> set[Configuration]:
    """Naive oracle: every parent array, pole-host subset and omitted host,
    filtered by validate, deduplicated by canonical form.  Test use only."""
    if not 3 <= p <= ORACLE_MAX_PERIOD:
        raise ValueError(f"oracle handles periods 3..{ORACLE_MAX_PERIOD}, got {p}")
    canonical: set[Configuration] = set()
    parent_options = [[None] + [x for x in range(p) if x != i] for i in range(p)]
    for parent in product(*parent_options):
        config0 = Configuration(p, tuple(parent), (), 0)
        if validate(config0).axiom_ids().count("STRUCT"):
            continue
        for host_bits in range(1 << p):
            hosts = [i for i in range(p) if (host_bits >> i) & 1]
            poles = tuple(PoleMarker(f"w{i + 1}", host) for i, host in enumerate(hosts))
            for omitted in range(p):
                config = Configuration(p, tuple(parent), poles, omitted)
                if validate(config).is_valid:
                    canonical.add(canonical_form(config))
    return canonical


def witness_bound(h: int, criterion: str) -> int:
    """The proved period bound a witness for the criterion must respect."""
    if criterion in ("bound_basic_pole", "equality_case1"):
        return h * (h + 1) // 2
    if criterion in ("bound_pole_free", "equality_case2"):
        return h * (h + 3) // 2
    raise ValueError(f"unknown criterion {criterion!r}")


def _hosts_all_outermost(config: Configuration) -> bool:
    return all(config.parent[m.host] is None for m in config.poles)


WITNESS_CRITERIA: dict[str, Callable[[int, Configuration, AnalysisSummary], bool]] = {
    "bound_basic_pole": lambda h, c, s: s.h == h and s.basic_nest_has_pole,
    "bound_pole_free": lambda h, c, s: s.h == h and not s.basic_nest_has_pole,
    "equality_case1": lambda h, c, s: (
        s.h == h and _hosts_all_outermost(c) and s.l == h
        and c.p == h * (h + 1) // 2),
    "equality_case2": lambda h, c, s: (
        s.h == h and _hosts_all_outermost(c) and s.l == h + 1
        and not s.basic_nest_has_pole and c.p == h * (h + 3) // 2),
}


def search_witness(h: int, max_p: int, criterion: str, *,
                   allow_large: bool = False) -> Optional[Configuration]:
    """Smallest-period valid configuration matching the criterion, or None.

    Any returned witness must respect the proved period bound; a breach
    would mean the enumerator or the bound implementation is broken, so it
    raises instead of returning.
    """
    if criterion not in WITNESS_CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; "
                         f"choose from {sorted(WITNESS_CRITERIA)}")
    if h < 2:
        raise ValueError(f"pole count must be at least 2, got {h}")
    if max_p < 3:
        raise ValueError(f"max period must be at least 3, got {max_p}")
    pred = WITNESS_CRITERIA[criterion]
    bound = witness_bound(h, criterion)
    for p in range(3, max_p + 1):
        for config in enumerate_list(p, allow_large=allow_large):
            if pred(h, config, summarize(config)):
                if p < bound:
                    raise RuntimeError(
                        f"witness at period {p} breaches the proved bound {bound} "
                        f"for criterion {criterion!r}")
                return config
    return None


def period_probe_report(p: int, configs: Optional[list[Configuration]] = None,
                        *, allow_large: bool = False) -> dict:
    """Tier-2 probe over every configuration of period p.

    Configurations violating the period-specific companion facts are листed
    verbatim as flagged witnesses; they are admissible for the axiom set but
    possibly not realizable by an actual function.
    """
    if configs is None:
        configs = enumerate_list(p, allow_large=allow_large)
    flagged = []
    for config in configs:
        flags = tier2_period_flags(p, summarize(config))
        if flags:
            flagged.append({
                "violations": flags,
                "configuration": configuration_to_dict(config),
            })
    return {"p": p, "checked": len(configs), "flagged": flagged}
