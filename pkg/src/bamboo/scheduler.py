"""Constructive schedulers: divides chains, odd/even interleave, solve.

A multiset of periods where each distinct value divides the next (a
divides chain) with density at most 1 always admits a collision-free
schedule in which every job's cycle equals its period. The construction
packs jobs into at most p_min bins of density 1/p_min each, hands bin j
the days congruent to j mod p_min, scales the bin's periods down by
p_min, and recurses.

Rounded two-grid states are combined by parity: the B' chain (after
halving) runs on odd days, the C' chain on even days. The certificate
y <= 1 guarantees both sides fit their half of the calendar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    BgtInstance,
    JobPeriod,
    PeriodicSchedule,
    ScheduleEntry,
    density,
    lower_bound,
)
from .reduction import ReductionConfig, bgt_to_pseudo
from .rounding import (
    CertificateViolation,
    NormalizedState,
    certificate,
    decompose,
    normalize,
    specialize_instance,
    split_23,
)


class NotAChain(ValueError):
    """Periods do not form a divides chain."""


class Overdense(ValueError):
    """Density exceeds 1, so no schedule can serve every job in time."""


@dataclass(frozen=True)
class ChainInstance:
    """Jobs with integral periods forming a divides chain of density <= 1.

    Stored sorted by (period, job id); validation happens on construction
    so the scheduling recursion below can take both properties for granted.
    """

    jobs: tuple[JobPeriod, ...]

    def __post_init__(self) -> None:
        jobs = tuple(sorted(self.jobs, key=lambda jp: (jp.period, jp.job)))
        object.__setattr__(self, "jobs", jobs)
        for jp in jobs:
            if not isinstance(jp.period, int) or jp.period < 1:
                raise NotAChain(f"period {jp.period!r} is not a positive integer")
        distinct = sorted({jp.period for jp in jobs})
        for small, big in zip(distinct, distinct[1:]):
            if big % small != 0:
                raise NotAChain(f"{small} does not divide {big}")
        if self.density > 1:
            raise Overdense(f"density {self.density} exceeds 1")

    @property
    def density(self) -> Fraction:
        return density(jp.period for jp in self.jobs)


def partition_bins(chain: ChainInstance) -> tuple[tuple[JobPeriod, ...], ...]:
    """First-fit the jobs (densest first) into bins of density 1/p_min.

    Because every job density divides the bin capacity, a bin is either
    exactly full or has room for the current job, so at most p_min bins
    ever open.
    """
    if not chain.jobs:
        return ()
    p_min = chain.jobs[0].period
    cap = Fraction(1, p_min)
    bins: list[list[JobPeriod]] = []
    loads: list[Fraction] = []
    for jp in chain.jobs:
        size = Fraction(1, jp.period)
        for k in range(len(bins)):
            if loads[k] + size <= cap:
                bins[k].append(jp)
                loads[k] += size
                break
        else:
            bins.append([jp])
            loads.append(size)
    assert len(bins) <= p_min
    return tuple(tuple(b) for b in bins)


def _chain_offsets(jobs: tuple[JobPeriod, ...]) -> dict[int, tuple[int, int]]:
    if not jobs:
        return {}
    if len(jobs) == 1:
        jp = jobs[0]
        return {jp.job: (1, jp.period)}
    chain = ChainInstance(jobs)
    p_min = chain.jobs[0].period
    out: dict[int, tuple[int, int]] = {}
    for j, bin_jobs in enumerate(partition_bins(chain), start=1):
        scaled = tuple(JobPeriod(jp.job, jp.period // p_min) for jp in bin_jobs)
        for job, (o, t) in _chain_offsets(scaled).items():
            out[job] = (j + (o - 1) * p_min, t * p_min)
    return out


def schedule_chain(chain: ChainInstance) -> PeriodicSchedule:
    """Collision-free schedule with cycle == period for every chain job."""
    offsets = _chain_offsets(chain.jobs)
    entries = tuple(ScheduleEntry(job, o, t) for job, (o, t) in sorted(offsets.items()))
    schedule = PeriodicSchedule(entries)
    for e in schedule.entries:
        assert e.offset <= e.cycle
    return schedule


def interleave(norm: NormalizedState) -> PeriodicSchedule:
    """Schedule B' on odd days and C' on even days.

    When either side is empty the other side's chain gets the whole
    calendar. A lone period-3 job in C' (the only way a 3 survives the
    density budget) is pinned to every even day.
    """
    if norm.y > 1:
        raise CertificateViolation(f"certificate y = {norm.y} exceeds 1; interleave has no calendar for this")
    bp, cp = norm.bp, norm.cp
    if not bp and not cp:
        return PeriodicSchedule(())
    if not cp:
        return schedule_chain(ChainInstance(bp))
    if not bp:
        return schedule_chain(ChainInstance(cp))
    if norm.rho_bp > Fraction(1, 2) or norm.rho_cp > Fraction(1, 3):
        raise CertificateViolation(
            f"mixed state too dense to interleave: rho(B') = {norm.rho_bp}, rho(C') = {norm.rho_cp}"
        )
    entries: list[ScheduleEntry] = []
    halved_b = ChainInstance(tuple(JobPeriod(jp.job, jp.period // 2) for jp in bp))
    for e in schedule_chain(halved_b).entries:
        entries.append(ScheduleEntry(e.job, 2 * e.offset - 1, 2 * e.cycle))
    if any(jp.period == 3 for jp in cp):
        assert len(cp) == 1, "a period-3 job only fits the density budget alone"
        entries.append(ScheduleEntry(cp[0].job, 2, 2))
    else:
        halved_c = ChainInstance(tuple(JobPeriod(jp.job, jp.period // 2) for jp in cp))
        for e in schedule_chain(halved_c).entries:
            entries.append(ScheduleEntry(e.job, 2 * e.offset, 2 * e.cycle))
    return PeriodicSchedule(tuple(entries))


@dataclass(frozen=True)
class Solution:
    """A schedule plus its exact accounting: the lower bound L used, the
    analytic max height actually reached, and the promised ceiling
    guarantee = factor * L (equal to L itself for a single bamboo)."""

    schedule: PeriodicSchedule
    lower_bound: Fraction
    height_bound: Fraction
    guarantee: Fraction
    config: ReductionConfig
    trace: dict


def _jp_list(items: tuple[JobPeriod, ...]) -> list[dict]:
    return [{"job": jp.job, "period": jp.period} for jp in items]


def solve(instance: BgtInstance, config: ReductionConfig | None = None) -> Solution:
    """Full pipeline: reduce, round, normalize, certify, interleave.

    factor 2 skips the two-grid machinery and rounds everything onto
    powers of two; a single bamboo skips the reduction entirely (cut it
    every day).
    """
    config = config or ReductionConfig()
    bound = lower_bound(instance, config.lb_mode)

    if instance.n == 1:
        schedule = PeriodicSchedule((ScheduleEntry(0, 1, 1),))
        trace = {
            "path": "single-bamboo",
            "lower_bound": str(bound),
            "factor": str(config.factor),
        }
        return Solution(
            schedule=schedule,
            lower_bound=bound,
            height_bound=instance.max_rate,
            guarantee=bound,
            config=config,
            trace=trace,
        )

    pseudo = bgt_to_pseudo(instance, config)
    trace = {
        "lower_bound": str(bound),
        "factor": str(config.factor),
        "pseudo_periods": [str(p) for p in pseudo.periods],
        "density": str(pseudo.density),
    }

    if config.factor == 2:
        rounded = specialize_instance(pseudo, 2)
        schedule = schedule_chain(ChainInstance(rounded))
        trace["path"] = "power-of-two"
        trace["rounded"] = _jp_list(rounded)
    else:
        state = split_23(pseudo)
        dec = decompose(state)
        norm = normalize(dec, state)
        cert = certificate(norm, pseudo.density)
        schedule = interleave(norm)
        trace.update(
            {
                "path": "two-three",
                "a2_jobs": sorted(jp.job for jp in state.b),
                "a3_jobs": sorted(jp.job for jp in state.c),
                "b": _jp_list(state.b),
                "c": _jp_list(state.c),
                "r": dec.r,
                "s": dec.s,
                "p": _jp_list(dec.p),
                "q": _jp_list(dec.q),
                "case": norm.case,
                "b_prime": _jp_list(norm.bp),
                "c_prime": _jp_list(norm.cp),
                "y": str(norm.y),
                "certificate_checked": cert.checked,
            }
        )

    height = Fraction(0)
    for e in schedule.entries:
        assert e.offset <= e.cycle
        height = max(height, instance.rates[e.job] * max(e.offset, e.cycle))
    guarantee = config.factor * bound
    assert height <= guarantee
    return Solution(
        schedule=schedule,
        lower_bound=bound,
        height_bound=height,
        guarantee=guarantee,
        config=config,
        trace=trace,
    )
