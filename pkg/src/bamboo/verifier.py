"""Independent checks on periodic schedules.

Nothing here trusts the builders: collisions are decided by congruence
arithmetic, heights by the closed form h * max(offset, cycle), and both
are cross-checked by an event-driven replay of the actual cut sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import BgtInstance, InvalidInstance, PeriodicSchedule, PseudoInstance

DEFAULT_HORIZON_CAP = 10**6


class HorizonOverflow(ValueError):
    """Requested simulation horizon exceeds the configured cap."""


@dataclass(frozen=True)
class Collision:
    job_a: int
    job_b: int
    day: int


@dataclass(frozen=True)
class CollisionReport:
    collisions: tuple[Collision, ...]

    @property
    def ok(self) -> bool:
        return not self.collisions


def _earliest_shared_day(o1: int, t1: int, o2: int, t2: int) -> int | None:
    """Smallest day in both progressions o + k*t, or None if they miss.

    The progressions intersect iff o1 == o2 (mod gcd(t1, t2)); the day
    itself comes from combining the two congruences.
    """
    g = math.gcd(t1, t2)
    if (o2 - o1) % g != 0:
        return None
    l = t1 // g * t2
    m2 = t2 // g
    k = ((o2 - o1) // g * pow(t1 // g, -1, m2)) % m2 if m2 > 1 else 0
    day = o1 + k * t1
    start = max(o1, o2)
    if day < start:
        day += (start - day + l - 1) // l * l
    return day


def check_collisions(schedule: PeriodicSchedule) -> CollisionReport:
    found = []
    entries = schedule.entries
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            a, b = entries[i], entries[j]
            day = _earliest_shared_day(a.offset, a.cycle, b.offset, b.cycle)
            if day is not None:
                found.append(Collision(a.job, b.job, day))
    return CollisionReport(tuple(found))


def check_windows(schedule: PeriodicSchedule, pseudo: PseudoInstance) -> bool:
    """True iff every job fits its fractional window: offset and cycle both
    at most floor(p_i). That is exactly what keeps bamboo i at or below
    h_i * p_i forever."""
    if set(schedule.jobs) != set(range(pseudo.n)):
        raise InvalidInstance(
            f"schedule covers jobs {sorted(schedule.jobs)} but the pseudo-instance has {pseudo.n} jobs"
        )
    for e in schedule.entries:
        window = math.floor(pseudo.periods[e.job])
        if e.offset > window or e.cycle > window:
            return False
    return True


def max_heights(schedule: PeriodicSchedule, instance: BgtInstance) -> tuple[Fraction, ...]:
    """Per-job peak height over the infinite schedule, in job-id order.

    Job i peaks at h_i * max(offset, cycle): the first cut happens at the
    end of day offset, and later cuts every cycle days.
    """
    if set(schedule.jobs) != set(range(instance.n)):
        raise InvalidInstance(
            f"schedule covers jobs {sorted(schedule.jobs)} but the instance has {instance.n} bamboos"
        )
    return tuple(
        instance.rates[e.job] * max(e.offset, e.cycle) for e in schedule.entries
    )


@dataclass(frozen=True)
class SimReport:
    max_height: Fraction
    argmax_day: int
    argmax_job: int | None
    double_booked_days: tuple[int, ...]
    horizon: int


def simulate(
    schedule: PeriodicSchedule,
    instance: BgtInstance,
    horizon: int,
    cap: int = DEFAULT_HORIZON_CAP,
) -> SimReport:
    """Replay the cut calendar day by day (event-compressed) up to `horizon`.

    Heights are observed at the end of each day just before cutting, so a
    bamboo's local maxima occur exactly at its own cut days and at the
    horizon; days with two cuts are reported instead of silently merged.
    """
    if horizon < 1:
        raise InvalidInstance(f"horizon must be at least 1, got {horizon}")
    if horizon > cap:
        raise HorizonOverflow(f"horizon {horizon} exceeds the cap of {cap} days")
    for e in schedule.entries:
        if e.job >= instance.n:
            raise InvalidInstance(f"schedule mentions job {e.job} outside the instance")

    events: list[tuple[int, int]] = []
    for e in schedule.entries:
        events.extend((day, e.job) for day in range(e.offset, horizon + 1, e.cycle))
    events.sort()

    last_cut = {job: 0 for job in range(instance.n)}
    best = Fraction(0)
    best_day = 0
    best_job: int | None = None
    doubled: list[int] = []
    i = 0
    while i < len(events):
        j = i
        day = events[i][0]
        while j < len(events) and events[j][0] == day:
            j += 1
        if j - i > 1:
            doubled.append(day)
        for _, job in events[i:j]:
            h = instance.rates[job] * (day - last_cut[job])
            if h > best:
                best, best_day, best_job = h, day, job
            last_cut[job] = day
        i = j
    for job in range(instance.n):
        gap = horizon - last_cut[job]
        if gap > 0:
            h = instance.rates[job] * gap
            if h > best:
                best, best_day, best_job = h, horizon, job
    return SimReport(
        max_height=best,
        argmax_day=best_day,
        argmax_job=best_job,
        double_booked_days=tuple(doubled),
        horizon=horizon,
    )


@dataclass(frozen=True)
class VerificationReport:
    collisions: CollisionReport
    jobs_ok: bool
    windows_ok: bool | None
    heights: tuple[Fraction, ...] | None
    analytic_max: Fraction | None
    sim: SimReport
    sim_matches: bool | None
    horizon_conclusive: bool
    lower_bound: Fraction | None
    ratio: Fraction | None

    @property
    def ok(self) -> bool:
        return (
            self.collisions.ok
            and self.jobs_ok
            and self.windows_ok is not False
            and not self.sim.double_booked_days
            and self.sim_matches is not False
        )

    def to_obj(self) -> dict:
        return {
            "ok": self.ok,
            "collision_free": self.collisions.ok,
            "collisions": [
                {"job_a": c.job_a, "job_b": c.job_b, "day": c.day} for c in self.collisions.collisions
            ],
            "jobs_ok": self.jobs_ok,
            "windows_ok": self.windows_ok,
            "per_job_heights": None if self.heights is None else [str(h) for h in self.heights],
            "analytic_max_height": None if self.analytic_max is None else str(self.analytic_max),
            "simulated_max_height": str(self.sim.max_height),
            "sim_matches_analytic": self.sim_matches,
            "argmax_day": self.sim.argmax_day,
            "argmax_job": self.sim.argmax_job,
            "double_booked_days": list(self.sim.double_booked_days),
            "horizon": self.sim.horizon,
            "horizon_conclusive": self.horizon_conclusive,
            "lower_bound": None if self.lower_bound is None else str(self.lower_bound),
            "ratio_vs_lower_bound": None if self.ratio is None else str(self.ratio),
        }


def default_horizon(schedule: PeriodicSchedule, cap: int = DEFAULT_HORIZON_CAP) -> int:
    """max offset + two hyperperiods, capped; enough to witness every gap."""
    if not schedule.entries:
        return 1
    return min(cap, schedule.max_offset() + 2 * schedule.hyperperiod())


def evaluate(
    instance: BgtInstance,
    schedule: PeriodicSchedule,
    pseudo: PseudoInstance | None = None,
    lower_bound_value: Fraction | None = None,
    horizon: int | None = None,
    cap: int = DEFAULT_HORIZON_CAP,
) -> VerificationReport:
    """Run every check against one schedule and bundle the outcome."""
    collisions = check_collisions(schedule)
    jobs_ok = set(schedule.jobs) == set(range(instance.n))
    windows_ok: bool | None = None
    if pseudo is not None:
        windows_ok = check_windows(schedule, pseudo) if jobs_ok else False
    heights = max_heights(schedule, instance) if jobs_ok else None
    analytic = max(heights) if heights else None
    if horizon is None:
        horizon = default_horizon(schedule, cap)
    sim = simulate(schedule, instance, horizon, cap)
    conclusive = jobs_ok and all(e.offset + e.cycle <= horizon for e in schedule.entries)
    sim_matches: bool | None = None
    if conclusive and analytic is not None:
        sim_matches = sim.max_height == analytic
    ratio = None
    if lower_bound_value is not None and analytic is not None:
        ratio = analytic / lower_bound_value
    return VerificationReport(
        collisions=collisions,
        jobs_ok=jobs_ok,
        windows_ok=windows_ok,
        heights=heights,
        analytic_max=analytic,
        sim=sim,
        sim_matches=sim_matches,
        horizon_conclusive=conclusive,
        lower_bound=lower_bound_value,
        ratio=ratio,
    )
