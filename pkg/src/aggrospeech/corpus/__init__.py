from .labels import AggressionLabel, CLASS_ORDER, CoarseClass, TurnLabel, map_label
from .manifest import ManifestEntry, read_manifest
from .segments import Segment, SegmentConfig, extract_segments
from .textgrid import Interval, IntervalTier, parse_textgrid, read_textgrid, serialize_textgrid
from .wav import AudioClip, encode_wav, parse_wav, read_wav, write_wav

__all__ = [
    "AggressionLabel", "AudioClip", "CLASS_ORDER", "CoarseClass", "Interval", "IntervalTier",
    "ManifestEntry", "Segment", "SegmentConfig", "TurnLabel", "encode_wav", "extract_segments",
    "map_label", "parse_textgrid", "parse_wav", "read_manifest", "read_textgrid", "read_wav",
    "serialize_textgrid", "write_wav",
]
