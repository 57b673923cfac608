"""WAV, gap-mask and results-CSV serialization."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import ChannelError, FormatError, ValidationError
from .evaluation import EvalRecord
from .signals import Gap, GapMask, Signal

MASK_VERSION = 1
PCM16_MAX = 1.0 - 2.0 ** -15


def read_wav(path, downmix: bool = False) -> Signal:
    """Read a 16-bit PCM or 32-bit float WAV file as a mono :class:`Signal`.

    16-bit samples are scaled by 1/32768. Multi-channel files raise
    :class:`ChannelError` unless ``downmix`` is set (channels averaged).
    """
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if data.dtype == np.int16:
        x = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        x = data.astype(np.float64)
    else:
        raise FormatError(f"{path}: unsupported sample format {data.dtype}")
    if x.ndim == 2:
        if x.shape[1] == 1:
            x = x[:, 0]
        elif downmix:
            x = x.mean(axis=1)
        else:
            raise ChannelError(f"{path}: {x.shape[1]} channels; pass downmix to average them")
    return Signal(x, rate)


def write_wav(signal: Signal, path, encoding: str = "float32") -> None:
    x = signal.samples
    if encoding == "float32":
        data = x.astype(np.float32)
    elif encoding == "pcm16":
        data = np.rint(np.clip(x, -1.0, PCM16_MAX) * 32768.0).astype(np.int16)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    wavfile.write(path, signal.sample_rate, data)


@dataclass(frozen=True)
class MaskFile:
    signal_length: int
    sample_rate: int
    gaps: tuple[Gap, ...]
    version: int = MASK_VERSION

    @property
    def mask(self) -> GapMask:
        return GapMask(self.gaps, self.signal_length)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "signal_length": self.signal_length,
            "sample_rate": self.sample_rate,
            "gaps": [{"start": g.start, "length": g.length} for g in self.gaps],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MaskFile":
        try:
            version = int(d["version"])
            n = int(d["signal_length"])
            rate = int(d["sample_rate"])
            gaps = tuple(Gap(int(g["start"]), int(g["length"])) for g in d["gaps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed mask file: {exc!r}") from exc
        if version != MASK_VERSION:
            raise ValidationError(f"unsupported mask version {version}")
        if rate <= 0:
            raise ValidationError("sample_rate must be positive")
        # validates the gap list
        GapMask(gaps, n)
        return cls(n, rate, gaps, version)


def write_mask(mask: GapMask, path, sample_rate: int) -> None:
    mf = MaskFile(mask.signal_length, sample_rate, mask.gaps)
    Path(path).write_text(json.dumps(mf.to_dict(), indent=2) + "\n")


def read_mask_file(path) -> MaskFile:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not a mask file ({exc})") from exc
    return MaskFile.from_dict(d)


def read_mask(path) -> GapMask:
    return read_mask_file(path).mask


def format_value(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def write_results(records, path) -> None:
    """Write records as CSV sorted by their key columns."""
    rows = sorted(records, key=lambda r: r.key())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EvalRecord.columns())
        for r in rows:
            w.writerow([format_value(getattr(r, c)) for c in EvalRecord.columns()])


def append_results(records, path) -> None:
    """Append records to ``path`` in completion order, writing the header if new."""
    path = Path(path)
    new = not path.exists()
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(EvalRecord.columns())
        for r in records:
            w.writerow([format_value(getattr(r, c)) for c in EvalRecord.columns()])
        fh.flush()
        os.fsync(fh.fileno())


def parse_record(row: dict) -> EvalRecord:
    return EvalRecord(
        signal_id=row["signal_id"],
        method=row["method"],
        estimator=row["estimator"],
        order=int(row["order"]),
        gap_length_ms=float(row["gap_length_ms"]),
        gap_index=int(row["gap_index"]),
        sdr_db=float(row["sdr_db"]),
        elapsed_s=float(row["elapsed_s"]),
    )


def read_results(path) -> list[EvalRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EvalRecord.columns():
            raise FormatError(f"{path}: unexpected header {reader.fieldnames}")
        return [parse_record(row) for row in reader]
