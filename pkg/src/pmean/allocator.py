"""Two-phase allocation of indivisible goods under one shared subadditive valuation.

Phase one (alg) walks the goods in non-increasing singleton value and hands a
good to its own agent whenever that good alone is worth at least a 1/3.53
fraction of the current sub-instance's social-welfare estimate; each such
assignment removes the good and one agent.  Phase two (alg_low) takes over once
no good clears the bar: it asks the welfare subroutine for a near-optimal
allocation, then re-cuts its high-value bundles good by good so every remaining
agent ends up with at least a 1/20 fraction of the estimate.

All threshold comparisons accept an absolute slack of EPS on the >= side.
Every tie is broken by ascending good index (bundle sorts by descending value,
then ascending original position), so identical inputs give identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import PreconditionViolated
from .means import bundle_values
from .swmax import DEFAULT_ENUM_BUDGET, EXACT, sw_estimate
from .valuations import EPS, Instance, full_set, goods_of, restrict, value


@dataclass(frozen=True)
class AlgConstants:
    phase1_divisor: float = 3.53
    alglow_fraction: float = 1.0 / 3.0
    approx_factor: float = 40.0
    high_bundle_factor: float = 11.33
    extraction_floor_divisor: float = 20.0
    combined_divisor: float = 7.06

    def __post_init__(self):
        if self.phase1_divisor * self.high_bundle_factor > self.approx_factor:
            raise ValueError("phase1_divisor * high_bundle_factor must stay <= approx_factor")
        if abs(self.combined_divisor - 2.0 * self.phase1_divisor) > 1e-12:
            raise ValueError("combined_divisor must equal 2 * phase1_divisor")


CONSTANTS = AlgConstants()


@dataclass
class AlgTrace:
    """What phase one did: singleton picks and the welfare estimate behind each test."""

    k: int = 0
    singleton_goods: list[int] = field(default_factory=list)
    f_values: list[float] = field(default_factory=list)
    phase2_bundles: list[int] = field(default_factory=list)


def _expand(local_mask: int, goods: list[int]) -> int:
    mask = 0
    for j in goods_of(local_mask):
        mask |= 1 << goods[j]
    return mask


def alg(
    inst: Instance,
    backend: str = EXACT,
    budget: int = DEFAULT_ENUM_BUDGET,
    constants: AlgConstants = CONSTANTS,
) -> tuple[tuple[int, ...], AlgTrace]:
    """Run both phases and return a complete n-bundle allocation plus its trace.

    The singleton loop additionally stops when only one agent is left (that
    agent then receives everything still unassigned, which can only help every
    welfare objective) and when the best remaining good is worthless (an
    all-zero tail makes any allocation optimal).
    """
    v = inst.valuation
    order = sorted(range(inst.m), key=lambda j: (-value(v, 1 << j), j))

    trace = AlgTrace()
    singles: list[int] = []
    agents_left = inst.n
    next_pick = 0

    while agents_left > 1 and next_pick < inst.m:
        g = order[next_pick]
        top_value = value(v, 1 << g)
        if top_value <= 0.0:
            break
        remaining = sorted(order[next_pick:])
        sub = Instance(agents_left, restrict(v, remaining))
        f = sw_estimate(sub, backend, budget).f_value
        trace.f_values.append(f)
        if top_value < f / constants.phase1_divisor - EPS:
            break
        singles.append(g)
        agents_left -= 1
        next_pick += 1

    leftover = sorted(order[next_pick:])
    tail = Instance(agents_left, restrict(v, leftover))
    local_bundles = alg_low(tail, backend, budget, constants)
    phase2 = [_expand(b, leftover) for b in local_bundles]

    trace.k = len(singles)
    trace.singleton_goods = list(singles)
    trace.phase2_bundles = list(phase2)
    return tuple(1 << g for g in singles) + tuple(phase2), trace


def alg_low(
    inst: Instance,
    backend: str = EXACT,
    budget: int = DEFAULT_ENUM_BUDGET,
    constants: AlgConstants = CONSTANTS,
) -> tuple[int, ...]:
    """Allocate an instance in which no single good is worth more than a
    1/3.53 fraction of the welfare estimate.

    Fetches a near-optimal allocation, sorts its bundles by descending value
    and moves goods one at a time into output bundles, starting a new bundle as
    soon as the next good would lift the current one to a third of the
    estimate; whatever is left lands in the last bundle.  The hypothesis on
    good values is not checked up front: if it fails badly enough, the source
    bundles run out early and PreconditionViolated is raised.
    """
    v = inst.valuation
    est = sw_estimate(inst, backend, budget)
    bar = est.f_value * constants.alglow_fraction
    u = inst.n
    if bar <= EPS:
        # worthless instance: any split meets every bound trivially
        return (0,) * (u - 1) + (full_set(inst.m),)

    order = sorted(range(u), key=lambda i: (-value(v, est.alloc[i]), i))
    sources = [goods_of(est.alloc[i]) for i in order]

    bundles = [0] * u
    a = 0
    i = 0
    while a < u - 1:
        if i >= u:
            raise PreconditionViolated(
                "source bundles ran out before every agent was served; "
                "a good above the low-value bar can cause this"
            )
        if sources[i]:
            g = sources[i][0]
            if value(v, bundles[a] | (1 << g)) < bar - EPS:
                bundles[a] |= 1 << g
                sources[i].pop(0)
            else:
                a += 1
        remaining_mask = 0
        for g in sources[i]:
            remaining_mask |= 1 << g
        if value(v, remaining_mask) < bar - EPS:
            i += 1

    assigned = 0
    for b in bundles[: u - 1]:
        assigned |= b
    bundles[u - 1] = full_set(inst.m) & ~assigned
    return tuple(bundles)


def extract_subbundles(
    subset: int,
    v,
    f: float,
    constants: AlgConstants = CONSTANTS,
) -> list[int]:
    """Peel a high-value set into sub-bundles each worth at least f/20.

    Fills a sub-bundle good by good in ascending index, handing the good back
    the moment it would push the fill past f/3, and repeats while the remainder
    is still worth more than f/3.  Yields at least ceil(3*v(subset)/f - 1)
    sub-bundles.  Requires f > 0, v(subset) >= f/3, and every good in the
    subset worth at most f/3.53.
    """
    if not f > 0.0:
        raise PreconditionViolated("need a positive welfare estimate f")
    bar = f * constants.alglow_fraction
    if value(v, subset) < bar - EPS:
        raise PreconditionViolated("subset is worth less than f/3")
    single_cap = f / constants.phase1_divisor + EPS
    for g in goods_of(subset):
        if value(v, 1 << g) > single_cap:
            raise PreconditionViolated(f"good {g} exceeds the low-value cap f/3.53")

    parts: list[int] = []
    remaining = goods_of(subset)
    remaining_mask = subset
    while value(v, remaining_mask) > bar + EPS:
        part = 0
        for g in list(remaining):
            if part and value(v, part | (1 << g)) > bar + EPS:
                break
            part |= 1 << g
            remaining.remove(g)
            remaining_mask &= ~(1 << g)
        parts.append(part)
    return parts
