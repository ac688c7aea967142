"""The chained verification run behind ``quadword verify-all``."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from .algebra import (
    build_periodic_quotient,
    enumerate_cogk1_candidates,
    envelope_increases,
    least_rotation,
    matrix_image_degrees,
    primitive_root,
    verify_quotient_identities,
)
from .construction import ConstructionParams, UStream, verify_stage_length_bound
from .factors import (
    ComplexityProfile,
    FactorIndex,
    Periodicity,
    bergman_gap_check,
    recurrence_sweep,
    trusted_profile,
)
from .growth import (
    check_growth_sandwich,
    check_u_bounds,
    estimate_gk,
    estimate_growth_constant,
    growth_series,
    prime_budget,
)
from .sturmian import verify_sturmian
from .words import WordStream, constant_stream, periodic_stream

log = logging.getLogger(__name__)

QUOTIENT_PERIODS = ("a", "ab", "aab", "aabab")


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict[str, Any]

    def as_dict(self) -> dict[str, Any]:
        return {"name": self.name, "pass": self.ok, **self.detail}


def verify_all(
    base: WordStream,
    depth: int = 6,
    length: int = 10**6,
    n_max: int = 2000,
    degree_depth: int = 8,
    power: int = 4,
    sturmian_length: int = 10**5,
    sturmian_nmax: int = 500,
    recurrence_nmax: int = 30,
    recurrence_kmin: int = 3,
    gap_horizon: int = 200,
) -> list[Check]:
    checks: list[Check] = []

    log.info("verifying the base word is Sturmian")
    st = verify_sturmian(base, sturmian_length, sturmian_nmax)
    checks.append(Check("sturmian_base", st.ok, {"n_max": st.n_max, "n_trust": st.n_trust, "first_failure": st.first_failure}))

    params = ConstructionParams(base, depth=max(depth, degree_depth))
    u = UStream(params)
    trace = u.trace(depth)
    bounds = verify_stage_length_bound(trace)
    checks.append(Check("stage_length_bound", all(b.ok for b in bounds), {"stages": [b.as_dict() for b in bounds]}))

    log.info("indexing a %d-letter prefix of U", length)
    u_index = FactorIndex(u.prefix(length))
    u_profile = trusted_profile(u_index.word, index=u_index, source=u.descriptor)
    trusted = u_profile.n_trust >= n_max
    checks.append(Check("u_trusted_horizon", trusted, {"n_trust": u_profile.n_trust, "required": n_max}))
    top = min(n_max, u_profile.n_trust)

    # anchors must run past n_max to locate d(n)
    k = depth
    while len(u.anchors(k)[-1]) <= top:
        k += 1
    anchor_lengths = [len(w) for w in u.anchors(k)]
    ub = check_u_bounds(u_profile, anchor_lengths, top)
    worst = max(ub, key=lambda c: c.extra["ratio"])
    checks.append(Check("u_complexity_bound", trusted and all(c.ok for c in ub), {"n_max": top, "max_ratio": worst.extra["ratio"], "at_n": worst.n}))

    sandwich = check_growth_sandwich(u_profile, top)
    checks.append(Check("u_growth_sandwich", trusted and all(c.ok for c in sandwich), {"n_max": top, "failures": [c.n for c in sandwich if not c.ok][:10]}))

    reps = recurrence_sweep(u_index, length // 2, recurrence_nmax, recurrence_kmin)
    weakest = min(reps, key=lambda r: r.worst_count)
    checks.append(
        Check(
            "u_recurrence",
            all(r.ok for r in reps),
            {"n_max": recurrence_nmax, "k_min": recurrence_kmin, "weakest_factor": weakest.worst_factor, "weakest_count": weakest.worst_count, "label": "at horizon"},
        )
    )

    q_reports = [verify_quotient_identities(build_periodic_quotient(y), 30) for y in QUOTIENT_PERIODS]
    checks.append(Check("periodic_quotients", all(r.ok for r in q_reports), {"quotients": [r.to_json() for r in q_reports]}))

    deep = u.trace(degree_depth)
    degrees = matrix_image_degrees(deep, u_index, power)
    increases = envelope_increases(degrees)
    checks.append(
        Check(
            "matrix_image_degrees",
            increases >= 5,
            {"degrees": [d.__dict__ for d in degrees], "envelope_increases": increases},
        )
    )

    base_index = FactorIndex(base.prefix(sturmian_length))
    base_profile = trusted_profile(base_index.word, index=base_index)
    base_dims = growth_series(base_profile)
    gc = estimate_growth_constant(base_dims, 500)
    budget = prime_budget(gc)
    base_cands = enumerate_cogk1_candidates(base_index, power, 12, horizon=base_profile.n_trust)
    d4 = len(u.anchors(4)[-1])
    u_cands = enumerate_cogk1_candidates(u_index, power, d4, horizon=u_profile.n_trust)
    anchor_classes = {least_rotation(primitive_root(w)).letters for w in u.anchors(4)}
    have = {c.canonical_word.letters for c in u_cands}
    checks.append(
        Check(
            "cogk1_budget_contrast",
            len(base_cands) <= budget and len(base_cands) == 0 and len(u_cands) >= 3 and anchor_classes <= have,
            {
                "base_candidates": [c.as_dict() for c in base_cands],
                "base_gc_estimate": gc,
                "budget": budget,
                "u_candidates": [c.as_dict() for c in u_cands],
                "u_d_max": d4,
            },
        )
    )

    gap = {}
    for name, stream, prof in (
        ("periodic_ab", periodic_stream("ab"), None),
        ("base", base, base_profile),
        ("u", u, u_profile),
    ):
        if prof is None:
            prof = trusted_profile(stream.prefix(4 * gap_horizon), gap_horizon)
        result = bergman_gap_check(_clamp(prof, gap_horizon))
        gap[name] = {"kind": result.kind.value, "witness": result.witness, "horizon": result.horizon}
    gap_ok = (
        gap["periodic_ab"]["kind"] == Periodicity.ULTIMATELY_PERIODIC.value
        and gap["periodic_ab"]["witness"] == 2
        and gap["base"]["kind"] == Periodicity.APERIODIC_AT_HORIZON.value
        and gap["u"]["kind"] == Periodicity.APERIODIC_AT_HORIZON.value
        and gap["base"]["horizon"] >= gap_horizon
        and gap["u"]["horizon"] >= gap_horizon
    )
    checks.append(Check("bergman_gap", gap_ok, gap))

    const_prof = trusted_profile(constant_stream("a").prefix(2000), 600)
    const_gk = estimate_gk(growth_series(const_prof), 50, 500)
    base_gk = estimate_gk(base_dims, 50, 500)
    checks.append(
        Check(
            "gk_estimates",
            1.9 <= base_gk <= 2.1 and 0.9 <= const_gk <= 1.1 and 0.45 <= gc <= 0.55,
            {"sturmian_gk": base_gk, "constant_gk": const_gk, "sturmian_gc": gc},
        )
    )
    if u_profile.n_trust >= 2000:
        checks[-1].detail["u_gk_100_2000"] = estimate_gk(growth_series(u_profile), 100, 2000)
    return checks


def _clamp(profile: ComplexityProfile, n: int) -> ComplexityProfile:
    top = min(n, profile.n_trust)
    return ComplexityProfile(profile.p[: top + 1], top, profile.source, profile.alphabet_size)


def summarize(checks: list[Check]) -> dict[str, Any]:
    return {"pass": all(c.ok for c in checks), "checks": [c.as_dict() for c in checks]}
