"""Track-to-scalar functionals.

Standard deviations are population (divide by n); percentiles interpolate
linearly between order statistics. Empty supports yield 0.0 and the caller
records a degeneracy flag.
"""

from __future__ import annotations

import numpy as np

SEMITONE_REF_HZ = 27.5


def mean_std(values) -> tuple[float, float]:
    v = np.asarray(values, dtype=np.float64)
    v = v[np.isfinite(v)]
    if len(v) == 0:
        return 0.0, 0.0
    return float(v.mean()), float(v.std())


def monotone_run_slopes(pieces, hop: float, rising: bool) -> np.ndarray:
    """Slopes (last - first) / duration of maximal strictly monotone runs of >= 2 frames."""
    slopes = []
    for piece in pieces:
        piece = np.asarray(piece, dtype=np.float64)
        if len(piece) < 2:
            continue
        d = np.diff(piece)
        step = d > 0 if rising else d < 0
        i = 0
        while i < len(step):
            if not step[i]:
                i += 1
                continue
            j = i
            while j < len(step) and step[j]:
                j += 1
            # frames i..j form the run
            slopes.append((piece[j] - piece[i]) / ((j - i) * hop))
            i = j
    return np.asarray(slopes)


def ten_functionals(pieces, hop: float) -> tuple[list[float], bool]:
    """mean, std, p20, p50, p80, p80-p20, rise mean/std, fall mean/std.

    ``pieces`` are the contiguous stretches of a track the statistics run
    over; runs never cross piece boundaries. Returns the values and whether
    the support was empty.
    """
    pieces = [np.asarray(p, dtype=np.float64) for p in pieces if len(p)]
    if not pieces:
        return [0.0] * 10, True
    allv = np.concatenate(pieces)
    p20, p50, p80 = np.percentile(allv, [20, 50, 80])
    rise = monotone_run_slopes(pieces, hop, rising=True)
    fall = monotone_run_slopes(pieces, hop, rising=False)
    rm, rs = mean_std(rise)
    fm, fs = mean_std(fall)
    return [float(allv.mean()), float(allv.std()), float(p20), float(p50), float(p80),
            float(p80 - p20), rm, rs, fm, fs], False


def semitones(f0_hz) -> np.ndarray:
    return 12.0 * np.log2(np.asarray(f0_hz, dtype=np.float64) / SEMITONE_REF_HZ)
