from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import DurationMismatch, MissingTier
from .labels import AggressionLabel, CoarseClass, TurnLabel, map_label, parse_aggression_label, parse_turn_label
from .textgrid import IntervalTier
from .wav import AudioClip

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SegmentConfig:
    tier_name: str = "Aggression"
    turn_tier_name: str = "Turn"
    min_duration: float = 0.2
    duration_tolerance: float = 0.05


@dataclass(frozen=True, eq=False)
class Segment:
    segment_id: str
    clip_ref: str
    start: float
    end: float
    fine_label: AggressionLabel
    coarse_class: CoarseClass
    audio: AudioClip
    turns: tuple[TurnLabel, ...] = field(default=())

    @property
    def duration(self) -> float:
        return self.end - self.start


def _find_tier(tiers, name):
    for tier in tiers:
        if tier.name == name:
            return tier
    return None


def _turns_overlapping(turn_tier: IntervalTier | None, start: float, end: float):
    if turn_tier is None:
        return ()
    found = []
    for iv in turn_tier.intervals:
        if iv.xmax > start and iv.xmin < end:
            label = parse_turn_label(iv.text)
            if label is not None and label not in found:
                found.append(label)
    return tuple(found)


def extract_segments(clip: AudioClip, tiers: list[IntervalTier],
                     config: SegmentConfig = SegmentConfig(), clip_ref: str | None = None) -> list[Segment]:
    """Cut ``clip`` into class-labelled segments from the aggression tier.

    Intervals that collapse to no class (IRR, empty) are dropped; so are
    intervals shorter than ``config.min_duration``. The turn tier, when
    present, is validated and attached as metadata.
    """
    clip_ref = clip_ref if clip_ref is not None else clip.source
    tier = _find_tier(tiers, config.tier_name)
    if tier is None:
        raise MissingTier(f"no tier named {config.tier_name!r} in {clip_ref or 'TextGrid'}")
    if tier.xmax > clip.duration + config.duration_tolerance:
        raise DurationMismatch(
            f"tier {tier.name!r} ends at {tier.xmax:.3f}s but audio lasts {clip.duration:.3f}s"
        )
    turn_tier = _find_tier(tiers, config.turn_tier_name)
    if turn_tier is not None:
        for iv in turn_tier.intervals:
            parse_turn_label(iv.text)

    segments = []
    for k, iv in enumerate(tier.intervals, 1):
        fine = parse_aggression_label(iv.text)
        coarse = map_label(fine)
        if coarse is None:
            continue
        if iv.duration < config.min_duration:
            log.info("skipping %s interval %d (%.3fs < %.3fs)", clip_ref, k, iv.duration, config.min_duration)
            continue
        segments.append(Segment(
            segment_id=f"{clip_ref}#{k}",
            clip_ref=clip_ref,
            start=iv.xmin,
            end=iv.xmax,
            fine_label=fine,
            coarse_class=coarse,
            audio=clip.slice(iv.xmin, iv.xmax),
            turns=_turns_overlapping(turn_tier, iv.xmin, iv.xmax),
        ))
    return segments
