"""Composite coordination score: per-event min-max normalization, signed
equal-weight combination with missing-component rescaling, and ranking.

Component order everywhere is (h, b, r, d): semantic homogenization,
burstiness, rhetorical repetition, lexical diversity. The first three
enter positively; diversity enters with a negative sign because high
diversity indicates organic production.
"""

from __future__ import annotations

from dataclasses import dataclass

EQUAL_WEIGHTS = (0.25, 0.25, 0.25, 0.25)
COMPONENT_NAMES = ("h", "b", "r", "d")
_SIGNS = (1.0, 1.0, 1.0, -1.0)

POOL_JOINT = "joint"
POOL_PER_PLATFORM = "per_platform"
NORMALIZATION_POOLS = (POOL_JOINT, POOL_PER_PLATFORM)


@dataclass(frozen=True)
class ComponentVector:
    """Raw metric values for one (source, platform, event); None = missing."""

    h: float | None = None
    b: float | None = None
    r: float | None = None
    d: float | None = None

    def as_tuple(self):
        return (self.h, self.b, self.r, self.d)


@dataclass
class SncRow:
    event_id: str
    platform: str
    source: str
    raw: ComponentVector
    normalized: ComponentVector
    snc: float | None
    rank: int | None = None
    tied: bool = False
    weights_used: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    @property
    def components_present(self) -> str:
        labels = "HBRD"
        return "".join(
            labels[i] for i, v in enumerate(self.normalized.as_tuple()) if v is not None
        )


def minmax_normalize(values: dict) -> dict:
    """Min-max map to [0, 1]; a degenerate pool (max == min) maps to all 0."""
    if not values:
        return {}
    vals = list(values.values())
    lo, hi = min(vals), max(vals)
    if hi == lo:
        return {k: 0.0 for k in values}
    span = hi - lo
    return {k: (v - lo) / span for k, v in values.items()}


def snc_score(components: ComponentVector, weights=EQUAL_WEIGHTS) -> float | None:
    """Signed weighted sum of the present normalized components, rescaled.

    Missing components contribute zero and the score is multiplied by
    (total weight mass / present weight mass), so the attainable range
    does not shrink when components are unavailable. Returns None when
    every component is missing.
    """
    if len(weights) != 4:
        raise ValueError("weights must have four entries (h, b, r, d)")
    present = [
        (v, w, s)
        for v, w, s in zip(components.as_tuple(), weights, _SIGNS)
        if v is not None
    ]
    if not present:
        return None
    present_mass = sum(w for _, w, _ in present)
    if present_mass == 0:
        return None
    total_mass = sum(weights)
    signed_sum = sum(s * w * v for v, w, s in present)
    return signed_sum * total_mass / present_mass


def effective_weights(components: ComponentVector, weights=EQUAL_WEIGHTS):
    """Weights actually applied: the configured weight where a component is
    present, zero where missing. They sum to the active-weight mass."""
    return tuple(
        w if v is not None else 0.0
        for v, w in zip(components.as_tuple(), weights)
    )


def rank_event(rows) -> list[SncRow]:
    """Order one event's scored rows by SNC descending, ties by source
    ascending; assign dense positional ranks and flag exact-score ties.

    Rows whose SNC is None (no components) are excluded from ranking.
    """
    scored = [r for r in rows if r.snc is not None]
    scored.sort(key=lambda r: (-r.snc, r.source))
    for i, row in enumerate(scored):
        row.rank = i + 1
        prev_tie = i > 0 and scored[i - 1].snc == row.snc
        next_tie = i + 1 < len(scored) and scored[i + 1].snc == row.snc
        row.tied = prev_tie or next_tie
    return scored


def build_snc_rows(event_id: str, raw_components: dict, weights=EQUAL_WEIGHTS,
                   pool: str = POOL_JOINT) -> list[SncRow]:
    """Normalize raw components within the event and score every source.

    ``raw_components`` maps (platform, source) -> ComponentVector of raw
    metric values. With the ``joint`` pool both platforms share one
    min-max normalization per component; ``per_platform`` normalizes each
    platform separately. Ranking is always joint across platforms.
    """
    if pool not in NORMALIZATION_POOLS:
        raise ValueError(f"unknown normalization pool: {pool!r}")
    keys = sorted(raw_components)

    def pool_key(key):
        return key[0] if pool == POOL_PER_PLATFORM else None

    normalized: dict[tuple, list] = {k: [None] * 4 for k in keys}
    for ci in range(4):
        pools: dict[object, dict] = {}
        for k in keys:
            v = raw_components[k].as_tuple()[ci]
            if v is not None:
                pools.setdefault(pool_key(k), {})[k] = v
        for sub in pools.values():
            for k, v in minmax_normalize(sub).items():
                normalized[k][ci] = v

    rows = []
    for platform, source in keys:
        raw = raw_components[(platform, source)]
        norm = ComponentVector(*normalized[(platform, source)])
        rows.append(
            SncRow(
                event_id=event_id,
                platform=platform,
                source=source,
                raw=raw,
                normalized=norm,
                snc=snc_score(norm, weights),
                weights_used=effective_weights(norm, weights),
            )
        )
    return rank_event(rows)
