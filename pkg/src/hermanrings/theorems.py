"""One checker per proved statement about valid configurations.

Every checker returns pass / fail / not_applicable with a witness; because
the statements are proved from the axioms that ``validate`` enforces, a
failure on a valid configuration indicates an implementation bug, and the
enumerator's regression suite asserts exactly that over every configuration
it can generate.

Tier-1 checks are the statements proved from the enforced axioms.  Tier-2
probes are period-specific facts imported from companion results whose
proofs use more than the enforced axioms; configurations violating a probe
are reported as flagged witnesses (combinatorially admissible, possibly not
realizable) instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import AnalysisSummary, summarize
from .model import (
    Configuration,
    InvalidConfigurationError,
    _ancestor_masks,
    _upset_mask,
    require_valid,
    validate,
)

__all__ = [
    "PASS",
    "FAIL",
    "NOT_APPLICABLE",
    "CheckResult",
    "check_chain_properties",
    "check_counting_lemmas",
    "check_independent_chains",
    "check_lower_bound",
    "check_equality",
    "check_fatou_period",
    "run_all",
    "overall_passes",
    "tier2_period_flags",
    "TIER1_CHECK_IDS",
]

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not_applicable"

TIER1_CHECK_IDS = (
    "chain_properties",
    "counting_lemmas",
    "independent_chains",
    "lower_bound",
    "equality",
    "fatou_period",
)


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    status: str
    message: str
    witness: dict

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "status": self.status,
            "message": self.message,
            "witness": self.witness,
        }


def _result(check_id: str, ok: bool, message: str, witness: dict) -> CheckResult:
    return CheckResult(check_id, PASS if ok else FAIL, message, witness)


def check_chain_properties(config: Configuration) -> CheckResult:
    """No chain is longer than the basic chain; chains of distinct poles
    have distinct lengths."""
    summary = summarize(config)
    lengths = [(c.pole, c.length, c.start) for c in summary.chains]
    too_long = [c.start for c in summary.chains if c.length > summary.l]
    clashes = [
        (a, b)
        for i, a in enumerate(lengths)
        for b in lengths[i + 1:]
        if a[0] != b[0] and a[1] == b[1]
    ]
    ok = not too_long and not clashes
    return _result(
        "chain_properties", ok,
        "chain lengths bounded by the basic chain and pairwise distinct across poles"
        if ok else "chain length property violated",
        {"basic_length": summary.l,
         "lengths": [{"start": s, "pole": p_, "length": n} for p_, n, s in lengths],
         "over_long_starts": too_long,
         "equal_length_pairs": [list(map(list, pair)) for pair in clashes]},
    )


def check_counting_lemmas(config: Configuration) -> CheckResult:
    """h <= n <= l; when h = l every nest contains exactly one basic-chain ring."""
    summary = summarize(config)
    ok = summary.h <= summary.n <= summary.l
    witness: dict = {"h": summary.h, "n": summary.n, "l": summary.l}
    if ok and summary.h == summary.l:
        basic_rings = set(next(c for c in summary.chains if c.is_basic).rings)
        per_nest = {n.root: len(n.members & basic_rings) for n in summary.nests}
        witness["basic_rings_per_nest"] = {str(k): v for k, v in sorted(per_nest.items())}
        ok = all(v == 1 for v in per_nest.values())
    return _result(
        "counting_lemmas", ok,
        "pole, nest and basic-chain counts are consistent" if ok
        else "counting bound violated",
        witness,
    )


def check_independent_chains(config: Configuration) -> CheckResult:
    """The number of poles reached by chains is h-1 or h (exactly h when the
    basic nest is pole-free); sorted representative lengths satisfy L_j >= j;
    a basic-nest pole whose surrounders all surround the omitted cluster has
    no chain of its own."""
    summary = summarize(config)
    count = summary.independent_count
    witness: dict = {"h": summary.h, "independent_count": count}
    problems: list[str] = []

    if count not in (summary.h - 1, summary.h):
        problems.append(f"independent chain count {count} not in {{h-1, h}}")
    if not summary.basic_nest_has_pole and count != summary.h:
        problems.append("pole-free basic nest but fewer than h independent chains")

    shortest: dict[str, int] = {}
    for chain in summary.chains:
        shortest[chain.pole] = min(shortest.get(chain.pole, chain.length), chain.length)
    rep_lengths = sorted(shortest.values())
    witness["representative_lengths"] = rep_lengths
    for idx, length in enumerate(rep_lengths):
        if length < idx + 2:
            problems.append(
                f"representative length {length} at position {idx + 2} below pigeonhole floor")

    basic_nest = next(n for n in summary.nests if n.is_basic)
    if basic_nest.pole is not None:
        host = next(m.host for m in config.poles if m.id == basic_nest.pole)
        masks = _ancestor_masks(config)
        pole_rings = _upset_mask(config, masks, host)
        omitted_rings = _upset_mask(config, masks, config.omitted_host)
        if pole_rings & ~omitted_rings == 0:
            witness["basic_pole_fully_inside_omitted_surrounders"] = basic_nest.pole
            if count != summary.h - 1:
                problems.append("basic-nest pole surrounded only by omitted-surrounders "
                                "but chain count is not h-1")
            if any(c.pole == basic_nest.pole for c in summary.chains):
                problems.append(f"chain corresponds to the shielded basic-nest pole "
                                f"{basic_nest.pole}")

    ok = not problems
    return _result(
        "independent_chains", ok,
        "independent chain count and lengths are as proved" if ok else "; ".join(problems),
        witness,
    )


def check_lower_bound(config: Configuration) -> CheckResult:
    """p >= h(h+1)/2, and p >= h(h+3)/2 when the basic nest is pole-free."""
    summary = summarize(config)
    h = summary.h
    bound = h * (h + 1) // 2
    if not summary.basic_nest_has_pole:
        bound = h * (h + 3) // 2
    ok = config.p >= bound
    return _result(
        "lower_bound", ok,
        f"period {config.p} meets the bound {bound}" if ok
        else f"period {config.p} below the bound {bound}",
        {"p": config.p, "h": h, "basic_nest_has_pole": summary.basic_nest_has_pole,
         "bound": bound},
    )


def check_equality(config: Configuration) -> CheckResult:
    """When every pole-surrounding ring is outermost: l = h forces
    p = h(h+1)/2 with a basic-nest pole; l = h+1 with a pole-free basic nest
    forces p = h(h+3)/2."""
    summary = summarize(config)
    h = summary.h
    root_hosts = all(config.parent[m.host] is None for m in config.poles)
    witness: dict = {
        "pole_hosts_all_outermost": root_hosts,
        "h": h, "l": summary.l, "p": config.p,
        "basic_nest_has_pole": summary.basic_nest_has_pole,
    }
    if root_hosts and summary.l == h:
        expected = h * (h + 1) // 2
        witness["expected_p"] = expected
        ok = config.p == expected and summary.basic_nest_has_pole
        return _result("equality", ok,
                       f"period equals {expected} with a basic-nest pole" if ok
                       else "equality case with basic-chain length h violated",
                       witness)
    if root_hosts and summary.l == h + 1 and not summary.basic_nest_has_pole:
        expected = h * (h + 3) // 2
        witness["expected_p"] = expected
        ok = config.p == expected
        return _result("equality", ok,
                       f"period equals {expected}" if ok
                       else "equality case with basic-chain length h+1 violated",
                       witness)
    return CheckResult("equality", NOT_APPLICABLE,
                       "equality hypotheses not satisfied", witness)


def check_fatou_period(config: Configuration) -> CheckResult:
    """With an attached Fatou cycle, the pole count is strictly below its
    period.  For q = 3 the companion facts h = 2, l = 2, n = 2 are probed
    and reported as flags, never as failures."""
    if config.fatou is None:
        return CheckResult("fatou_period", NOT_APPLICABLE,
                           "no fatou cycle attached", {})
    require_valid(config)
    summary = summarize(config)
    h = summary.h
    if config.fatou.is_ring_cycle:
        ok = h < config.p
        return _result("fatou_period", ok,
                       f"pole count {h} below ring-cycle period {config.p}" if ok
                       else f"pole count {h} not below ring-cycle period {config.p}",
                       {"h": h, "q": config.p, "ring_cycle": True})
    q = config.fatou.q
    ok = h < q
    witness: dict = {"h": h, "q": q, "ring_cycle": False}
    if q == 3:
        flags = []
        if h != 2:
            flags.append(f"h={h} (expected 2)")
        if summary.l != 2:
            flags.append(f"l={summary.l} (expected 2)")
        if summary.n != 2:
            flags.append(f"n={summary.n} (expected 2)")
        witness["tier2_flags"] = flags
    message = (f"pole count {h} below fatou period {q}" if ok
               else f"pole count {h} not below fatou period {q}")
    if witness.get("tier2_flags"):
        message += "; tier-2 flags: " + ", ".join(witness["tier2_flags"])
    return _result("fatou_period", ok, message, witness)


_CHECKERS = (
    check_chain_properties,
    check_counting_lemmas,
    check_independent_chains,
    check_lower_bound,
    check_equality,
    check_fatou_period,
)


def run_all(config: Configuration, *, strict_innermost: bool = False) -> list[CheckResult]:
    """Run every checker in fixed order; rejects invalid configurations up front."""
    report = validate(config, strict_innermost=strict_innermost)
    if not report.is_valid:
        raise InvalidConfigurationError(report)
    return [checker(config) for checker in _CHECKERS]


def overall_passes(results: list[CheckResult]) -> bool:
    """Overall verdict: no tier-1 failure (not_applicable never fails)."""
    return all(r.status != FAIL for r in results)


def tier2_period_flags(p: int, summary: AnalysisSummary) -> list[str]:
    """Period-specific companion facts: empty when satisfied.

    p = 3 forces h = n = l = 2; p = 4 forces l = 3 and h = 2 with n in {2, 3}.
    """
    flags: list[str] = []
    if p == 3:
        if (summary.h, summary.n, summary.l) != (2, 2, 2):
            flags.append(f"p=3 expects h=n=l=2, found h={summary.h} "
                         f"n={summary.n} l={summary.l}")
    elif p == 4:
        if summary.l != 3:
            flags.append(f"p=4 expects basic-chain length 3, found {summary.l}")
        if summary.h != 2:
            flags.append(f"p=4 expects 2 poles, found {summary.h}")
        if summary.n not in (2, 3):
            flags.append(f"p=4 expects 2 or 3 nests, found {summary.n}")
    return flags
