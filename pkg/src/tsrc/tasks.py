"""Benchmark dataset generators and file loaders.

Four task families are covered: chaotic-laser one-step prediction (loaded
from a plain text file), nonlinear channel equalization (generated), the
tenth-order NARMA system (generated), and isolated-digit classification from
86-dimensional feature frames (loaded from CSV, or a synthetic surrogate).
All generators are deterministic functions of their seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DataError

FEATURE_DIM = 86
DIGIT_CLASSES = 10
CHANNEL_ALPHABET = (-3.0, -1.0, 1.0, 3.0)

# Linear-channel taps as (symbol offset relative to n, coefficient): the
# channel output at time n mixes the two upcoming symbols and seven past ones.
CHANNEL_TAPS = (
    (2, 0.08),
    (1, -0.12),
    (0, 1.0),
    (-1, 0.18),
    (-2, -0.1),
    (-3, 0.091),
    (-4, -0.05),
    (-5, 0.04),
    (-6, 0.03),
    (-7, 0.01),
)


@dataclass
class TaskDataset:
    """A benchmark's aligned input/target sequences plus its split sizes.

    For digit tasks the sequences are per-frame (inputs are 86-dim rows,
    targets are integer frame labels) and ``utterance_ranges`` marks each
    utterance's half-open frame range with ``utterance_labels`` alongside.
    """

    kind: str
    inputs: np.ndarray
    targets: np.ndarray
    train_count: int
    test_count: int
    share: Fraction | None = None
    utterance_ranges: list[tuple[int, int]] | None = None
    utterance_labels: np.ndarray | None = None

    def __post_init__(self):
        if len(self.inputs) != len(self.targets):
            raise ValueError(
                f"inputs ({len(self.inputs)}) and targets ({len(self.targets)}) must align"
            )
        total = len(self.utterance_ranges) if self.utterance_ranges is not None else len(self.inputs)
        if self.train_count + self.test_count > total:
            raise ValueError(
                f"train {self.train_count} + test {self.test_count} exceeds {total} available"
            )


@dataclass
class Utterance:
    utterance_id: str
    label: int
    frames: np.ndarray  # (frame_count, FEATURE_DIM)


def gen_narma10(length: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Generate a tenth-order NARMA sequence.

    u is i.i.d. Uniform[0, 0.5]; y starts from zero history and follows

        y[k+1] = 0.3*y[k] + 0.05*y[k]*sum(y[k-9..k]) + 1.5*u[k]*u[k-9] + 0.1

    with out-of-range u/y terms taken as 0.  If the recursion leaves |y| <= 10
    the draw is accepted; otherwise u is redrawn with seed+1, up to 10 tries.
    """
    if length < 10:
        raise ValueError(f"length must be >= 10, got {length}")
    for attempt in range(10):
        rng = np.random.default_rng(seed + attempt)
        u = rng.uniform(0.0, 0.5, size=length)
        y = np.zeros(length)
        stable = True
        for k in range(length - 1):
            window = y[max(0, k - 9): k + 1].sum()
            u_lag = u[k - 9] if k >= 9 else 0.0
            y[k + 1] = 0.3 * y[k] + 0.05 * y[k] * window + 1.5 * u[k] * u_lag + 0.1
            if abs(y[k + 1]) > 10.0:
                stable = False
                break
        if stable:
            return u, y
    raise DataError(f"NARMA-10 diverged for 10 consecutive seeds starting at {seed}")


def channel_linear(symbols: np.ndarray) -> np.ndarray:
    """Apply the linear channel taps; symbols outside the sequence count as 0."""
    symbols = np.asarray(symbols, dtype=np.float64)
    length = symbols.shape[0]
    z = np.zeros(length)
    for offset, coeff in CHANNEL_TAPS:
        if offset >= 0:
            z[: length - offset] += coeff * symbols[offset:]
        else:
            z[-offset:] += coeff * symbols[:offset]
    return z


def channel_nonlinear(z: np.ndarray) -> np.ndarray:
    """Second/third-order distortion applied to the linear channel output."""
    return z + 0.36 * z**2 - 0.011 * z**3


def gen_channel(
    length: int,
    seed: int,
    snr_db: float,
    alphabet=CHANNEL_ALPHABET,
    edge: str = "pad",
) -> tuple[np.ndarray, np.ndarray]:
    """Generate a noisy nonlinear-channel observation s and its clean symbols g.

    g is i.i.d. uniform over the alphabet; s = distorted channel output plus
    white Gaussian noise whose variance is mean(clean s^2) / 10^(snr_db/10).
    Use snr_db = inf for a noiseless channel.  ``edge="pad"`` treats symbols
    outside the sequence as 0; ``edge="trim"`` drops the samples whose taps
    would fall outside, returning shorter aligned arrays.
    """
    if length < 10:
        raise ValueError(f"length must be >= 10 (channel memory), got {length}")
    if edge not in ("pad", "trim"):
        raise ValueError(f"edge must be 'pad' or 'trim', got {edge!r}")
    if snr_db is None:
        snr_db = np.inf
    rng = np.random.default_rng(seed)
    g = rng.choice(np.asarray(alphabet, dtype=np.float64), size=length)
    clean = channel_nonlinear(channel_linear(g))
    noise_var = np.mean(clean**2) / 10.0 ** (snr_db / 10.0)
    s = clean + rng.normal(0.0, np.sqrt(noise_var), size=length)
    if edge == "trim":
        # valid n: every tap g(n+2)..g(n-7) lies inside the sequence
        s, g = s[7: length - 2], g[7: length - 2]
    return s, g


def load_santa_fe(path) -> tuple[np.ndarray, tuple[float, float]]:
    """Load a one-value-per-line series and normalize it to zero mean, unit variance.

    Returns (normalized series, (mean, std)); std is the population standard
    deviation, so ``x * std + mean`` undoes the normalization.
    """
    path = Path(path)
    values = []
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise DataError(f"{path}:{lineno}: cannot parse {text!r} as a number") from None
    if not values:
        raise DataError(f"{path}: file contains no values")
    series = np.asarray(values, dtype=np.float64)
    mean = float(series.mean())
    std = float(series.std())
    if std == 0.0:
        raise DataError(f"{path}: series has zero variance; cannot normalize")
    return (series - mean) / std, (mean, std)


def santa_fe_prediction_pairs(series: np.ndarray, horizon: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Inputs are the series; targets are the series ``horizon`` steps later."""
    series = np.asarray(series, dtype=np.float64)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if series.shape[0] <= horizon:
        raise ValueError(f"series of length {series.shape[0]} too short for horizon {horizon}")
    return series[:-horizon], series[horizon:]


def gen_sine_series(length: int, period: float = 23.7, amplitude: float = 1.0) -> np.ndarray:
    """Noiseless sine sampled at integer steps; stand-in prediction series."""
    if length < 2:
        raise ValueError(f"length must be >= 2, got {length}")
    if period <= 0:
        raise ValueError(f"period must be positive, got {period}")
    return amplitude * np.sin(2.0 * np.pi * np.arange(length) / period)


def _looks_numeric(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def load_digit_features(path) -> list[Utterance]:
    """Load 86-dim feature frames from CSV rows ``utterance_id,label,f1..f86``.

    Frames are grouped by utterance id in file order; a header row is detected
    by a non-numeric label/feature field and skipped.  An empty file is a
    valid empty dataset.
    """
    path = Path(path)
    try:
        handle = path.open(newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    grouped: dict[str, Utterance] = {}
    with handle:
        reader = csv.reader(handle)
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            if rownum == 1 and len(row) >= 2 and not all(_looks_numeric(cell) for cell in row[1:]):
                continue  # header row
            if len(row) != 2 + FEATURE_DIM:
                raise DataError(
                    f"{path}:{rownum}: expected {2 + FEATURE_DIM} columns, got {len(row)}"
                )
            utt_id = row[0].strip()
            try:
                label = int(row[1])
                frame = np.asarray([float(cell) for cell in row[2:]])
            except ValueError:
                raise DataError(f"{path}:{rownum}: non-numeric label or feature value") from None
            if not 0 <= label <= 9:
                raise DataError(f"{path}:{rownum}: label {label} outside 0-9")
            if utt_id in grouped:
                utt = grouped[utt_id]
                if utt.label != label:
                    raise DataError(
                        f"{path}:{rownum}: utterance {utt_id!r} has conflicting labels "
                        f"{utt.label} and {label}"
                    )
                utt.frames = np.vstack([utt.frames, frame[None, :]])
            else:
                grouped[utt_id] = Utterance(utt_id, label, frame[None, :])
    return list(grouped.values())


def gen_synthetic_digits(
    seed: int,
    classes: int = DIGIT_CLASSES,
    utterances_per_class: int = 50,
    frames_per_utterance: int = 10,
    jitter: float = 0.3,
) -> list[Utterance]:
    """Synthetic isolated-digit surrogate.

    Each class gets a fixed random 86-dim prototype; every frame is the
    prototype plus Gaussian jitter.  Utterances are emitted round-robin over
    classes so any prefix of the list is class-balanced, which keeps
    train/test splits taken by count representative.
    """
    if classes < 1 or utterances_per_class < 1 or frames_per_utterance < 1:
        raise ValueError("classes, utterances_per_class and frames_per_utterance must be >= 1")
    if jitter < 0:
        raise ValueError(f"jitter must be >= 0, got {jitter}")
    rng = np.random.default_rng(seed)
    prototypes = rng.normal(size=(classes, FEATURE_DIM))
    by_class: list[list[Utterance]] = []
    for cls in range(classes):
        row = []
        for idx in range(utterances_per_class):
            frames = prototypes[cls] + rng.normal(0.0, 1.0, size=(frames_per_utterance, FEATURE_DIM)) * jitter
            row.append(Utterance(f"c{cls}u{idx}", cls, frames))
        by_class.append(row)
    return [by_class[cls][idx] for idx in range(utterances_per_class) for cls in range(classes)]


def flatten_utterances(utterances: list[Utterance]):
    """Concatenate utterances into per-frame arrays.

    Returns (frames, frame_labels, ranges, labels): the stacked feature rows,
    one label per frame, each utterance's (start, stop) frame range, and one
    label per utterance.
    """
    if not utterances:
        return (
            np.zeros((0, FEATURE_DIM)),
            np.zeros(0, dtype=np.int64),
            [],
            np.zeros(0, dtype=np.int64),
        )
    frames = np.vstack([utt.frames for utt in utterances])
    ranges = []
    start = 0
    for utt in utterances:
        stop = start + utt.frames.shape[0]
        ranges.append((start, stop))
        start = stop
    frame_labels = np.concatenate(
        [np.full(utt.frames.shape[0], utt.label, dtype=np.int64) for utt in utterances]
    )
    labels = np.asarray([utt.label for utt in utterances], dtype=np.int64)
    return frames, frame_labels, ranges, labels


def write_series(path, values) -> None:
    """Write a scalar series in the one-value-per-line text format."""
    values = np.asarray(values, dtype=np.float64).ravel()
    Path(path).write_text("".join(f"{v!r}\n" for v in values))


def write_pairs_csv(path, columns: dict[str, np.ndarray]) -> None:
    """Write aligned named columns as CSV with a header row."""
    names = list(columns)
    arrays = [np.asarray(columns[name]).ravel() for name in names]
    lengths = {arr.shape[0] for arr in arrays}
    if len(lengths) != 1:
        raise ValueError(f"columns must have equal lengths, got {sorted(lengths)}")
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow([repr(float(v)) for v in row])


def write_digit_csv(path, utterances: list[Utterance]) -> None:
    """Write utterances in the ``utterance_id,label,f1..f86`` CSV format."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["utterance_id", "label"] + [f"f{i}" for i in range(1, FEATURE_DIM + 1)])
        for utt in utterances:
            for frame in utt.frames:
                writer.writerow([utt.utterance_id, utt.label] + [repr(float(v)) for v in frame])
