"""Minimal RIFF/WAVE reader and writer for PCM16 and float32 audio."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import MalformedContainer, UnsupportedEncoding, ZeroSamples

PCM = 1
IEEE_FLOAT = 3


@dataclass(frozen=True, eq=False)
class AudioClip:
    """Mono audio normalized to [-1, 1]."""

    samples: np.ndarray
    sample_rate: int
    channel_count: int = 1
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        arr = np.asarray(self.samples, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def slice(self, start: float, end: float) -> "AudioClip":
        """Return the samples covering [start, end) seconds.

        The start index is floored and the end index ceiled so the slice
        never loses a partially covered sample.
        """
        i0 = max(0, int(np.floor(start * self.sample_rate)))
        i1 = min(len(self.samples), int(np.ceil(end * self.sample_rate)))
        return AudioClip(self.samples[i0:i1], self.sample_rate, self.channel_count, self.source)


def _iter_chunks(data: bytes, offset: int):
    while offset < len(data):
        if offset + 8 > len(data):
            raise MalformedContainer(f"truncated chunk header at byte {offset}")
        cid, size = struct.unpack_from("<4sI", data, offset)
        body = offset + 8
        if body + size > len(data):
            raise MalformedContainer(
                f"chunk {cid!r} declares {size} bytes but only {len(data) - body} remain"
            )
        yield cid, data[body:body + size]
        offset = body + size + (size & 1)


def parse_wav(data: bytes, source: str = "") -> AudioClip:
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedContainer("not a little-endian RIFF/WAVE container")

    fmt = None
    pcm = None
    for cid, body in _iter_chunks(data, 12):
        if cid == b"fmt ":
            if len(body) < 16:
                raise MalformedContainer("fmt chunk shorter than 16 bytes")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            pcm = body
    if fmt is None:
        raise MalformedContainer("missing fmt chunk")
    if pcm is None:
        raise MalformedContainer("missing data chunk")

    code, channels, rate, _, block_align, bits = fmt
    if code not in (PCM, IEEE_FLOAT):
        raise UnsupportedEncoding(f"format code {code} (only 1=PCM and 3=float are supported)")
    if code == PCM and bits != 16:
        raise UnsupportedEncoding(f"PCM with {bits} bits per sample (only 16 supported)")
    if code == IEEE_FLOAT and bits != 32:
        raise UnsupportedEncoding(f"float with {bits} bits per sample (only 32 supported)")
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"{channels} channels (only mono and stereo supported)")
    if rate <= 0:
        raise MalformedContainer("sample rate is zero")
    width = bits // 8
    if block_align != width * channels:
        raise MalformedContainer(f"block align {block_align} inconsistent with {channels}x{bits} bit")
    if len(pcm) % block_align:
        raise MalformedContainer("data chunk ends inside a sample frame")
    if not pcm:
        raise ZeroSamples("data chunk holds no samples")

    if code == PCM:
        samples = np.frombuffer(pcm, dtype="<i2").astype(np.float64) / 32768.0
    else:
        samples = np.frombuffer(pcm, dtype="<f4").astype(np.float64)
        samples = np.clip(np.nan_to_num(samples, nan=0.0), -1.0, 1.0)
    if channels == 2:
        samples = samples.reshape(-1, 2).mean(axis=1)
    return AudioClip(samples, rate, channels, source)


def read_wav(path: str | Path) -> AudioClip:
    path = Path(path)
    return parse_wav(path.read_bytes(), source=str(path))


def encode_wav(samples, sample_rate: int, encoding: str = "pcm16") -> bytes:
    """Serialize samples as a canonical 44-byte-header WAV.

    ``samples`` is a 1-D (mono) or 2-D (frames x channels) float array.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    channels = arr.shape[1]
    if encoding == "pcm16":
        code, bits = PCM, 16
        ints = np.clip(np.round(arr * 32768.0), -32768, 32767).astype("<i2")
        payload = ints.tobytes()
    elif encoding == "float32":
        code, bits = IEEE_FLOAT, 32
        payload = arr.astype("<f4").tobytes()
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    block = channels * bits // 8
    fmt = struct.pack("<HHIIHH", code, channels, sample_rate, sample_rate * block, block, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


def write_wav(path: str | Path, samples, sample_rate: int, encoding: str = "pcm16") -> None:
    Path(path).write_bytes(encode_wav(samples, sample_rate, encoding))
