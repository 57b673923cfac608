"""Parameter sweeps: degrade, inpaint and evaluate every configuration cell.

A cell is one (signal, gap length, method variant, estimator, order)
combination. Finished cells are appended to ``<output>.partial`` as they
complete so an interrupted sweep resumes where it stopped; the final CSV is
sorted and therefore independent of scheduling.
"""
from __future__ import annotations

import csv
import hashlib
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .audio_io import append_results, parse_record, read_mask, read_wav, write_results
from .errors import ConfigError, InpaintingError
from .evaluation import EvalRecord, sdr_inpainted
from .methods import InpaintConfig, Method, Window, inpaint
from .signals import GapMask, Signal, generate_gaps

log = logging.getLogger(__name__)

# best-performing orders at context/frame length 4096
DEFAULT_ORDERS = {
    "extrapolation": 2048,
    "gapwise": 2048,
    "framewise-hann": 1024,
    "framewise-rect": 512,
}
GRID_ORDERS = (8, 16, 32, 64, 128, 256, 512, 1024, 2048, 3072)
GRID_GAP_LENGTHS = (10, 20, 30, 40, 50, 60, 70, 80)


@dataclass
class SweepSpec:
    corpus_dir: Path
    output_csv: Path
    methods: list[str] = field(default_factory=lambda: ["extrapolation", "gapwise", "framewise"])
    estimators: list[str] = field(default_factory=lambda: ["lpc", "burg"])
    orders: list[int] = field(default_factory=lambda: [512, 1024, 2048])
    gap_lengths_ms: list[float] = field(default_factory=lambda: list(GRID_GAP_LENGTHS))
    windows: list[str] = field(default_factory=lambda: ["hann", "rect"])
    context_length: int = 4096
    frame_length: int = 4096
    count: int = 10
    seed: int = 0
    min_separation: int = 8192
    border: int = 4096
    max_iterations: int = 50
    rel_tolerance: float = 1e-6
    masks_dir: Optional[Path] = None
    jobs: int = 1
    record_time: bool = False

    def __post_init__(self):
        self.corpus_dir = Path(self.corpus_dir)
        self.output_csv = Path(self.output_csv)
        if self.masks_dir is not None:
            self.masks_dir = Path(self.masks_dir)
        for name in ("methods", "estimators", "orders", "gap_lengths_ms", "windows"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        for m in self.methods:
            Method(m)
        for w in self.windows:
            Window(w)
        limit = min(self.context_length, self.frame_length)
        bad = [p for p in self.orders if p >= limit]
        if bad:
            raise ConfigError(f"orders {bad} not below the context/frame length {limit}")

    def variants(self) -> list[tuple[str, Method, Window]]:
        out = []
        for m in map(Method, self.methods):
            if m is Method.FRAMEWISE:
                out += [(f"framewise-{w.value}", m, w) for w in map(Window, self.windows)]
            else:
                out.append((m.value, m, Window.HANN))
        return out


@dataclass(frozen=True)
class Cell:
    signal_path: Path
    signal_id: str
    gap_length_ms: float
    variant: str
    method: Method
    window: Window
    estimator: str
    order: int

    def key(self) -> tuple:
        return (self.signal_id, self.variant, self.estimator, self.order, float(self.gap_length_ms))


def cell_seed(seed: int, signal_id: str, gap_length_ms: float) -> int:
    """Mask seed for one signal and gap length, stable across runs and platforms."""
    h = hashlib.sha256(f"{seed}:{signal_id}:{float(gap_length_ms)!r}".encode()).digest()
    return int.from_bytes(h[:8], "little")


def corpus_files(corpus_dir: Path) -> list[Path]:
    files = sorted(Path(corpus_dir).glob("*.wav"))
    if not files:
        raise ConfigError(f"no .wav files in {corpus_dir}")
    return files


def mask_path(masks_dir: Path, signal_id: str, gap_length_ms: float) -> Path:
    return Path(masks_dir) / f"{signal_id}.{gap_length_ms:g}ms.mask.json"


def cell_mask(spec: SweepSpec, signal: Signal, signal_id: str, gap_length_ms: float) -> GapMask:
    if spec.masks_dir is not None:
        mask = read_mask(mask_path(spec.masks_dir, signal_id, gap_length_ms))
        if mask.signal_length != len(signal):
            raise ConfigError(f"mask for {signal_id} does not match the signal length")
        return mask
    return generate_gaps(len(signal), signal.sample_rate, gap_length_ms, spec.count,
                         spec.min_separation, spec.border,
                         cell_seed(spec.seed, signal_id, gap_length_ms))


def cells(spec: SweepSpec) -> list[Cell]:
    out = []
    for path in corpus_files(spec.corpus_dir):
        for ms in spec.gap_lengths_ms:
            for variant, method, win in spec.variants():
                for est in spec.estimators:
                    for p in spec.orders:
                        out.append(Cell(path, path.stem, float(ms), variant, method, win, est, int(p)))
    return out


def run_cell(spec: SweepSpec, cell: Cell) -> list[EvalRecord]:
    def record(i, value, elapsed=0.0):
        return EvalRecord(cell.signal_id, cell.variant, cell.estimator, cell.order,
                          cell.gap_length_ms, i, value, elapsed if spec.record_time else 0.0)

    try:
        signal = read_wav(cell.signal_path, downmix=True)
        mask = cell_mask(spec, signal, cell.signal_id, cell.gap_length_ms)
    except InpaintingError as exc:
        log.error("%s: cannot degrade: %s", cell.key(), exc)
        return [record(-1, math.nan)]
    cfg = InpaintConfig(method=cell.method, estimator=cell.estimator, order=cell.order,
                        context_length=spec.context_length, frame_length=spec.frame_length,
                        window=cell.window, max_iterations=spec.max_iterations,
                        rel_tolerance=spec.rel_tolerance)
    degraded = signal.with_samples(signal.samples * mask.reliable())
    gap_times: dict[int, float] = {}

    def report(label, dt):
        kind, idx = label.split()
        if kind == "gap":
            gap_times[int(idx)] = dt

    t0 = time.perf_counter()
    try:
        out = inpaint(degraded, mask, cfg, report)
        values = sdr_inpainted(signal, out, mask)
    except InpaintingError as exc:
        log.error("%s: %s", cell.key(), exc)
        return [record(i, math.nan) for i in range(len(mask.gaps))]
    total = time.perf_counter() - t0
    per_gap = total / max(len(mask.gaps), 1)
    return [record(i, v, gap_times.get(i, per_gap)) for i, v in enumerate(values)]


def _partial_path(spec: SweepSpec) -> Path:
    return spec.output_csv.with_name(spec.output_csv.name + ".partial")


def _load_partial(path: Path) -> list[EvalRecord]:
    if not path.exists():
        return []
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            try:
                out.append(parse_record(row))
            except (TypeError, ValueError, KeyError):
                log.warning("skipping malformed partial row %r", row)
    return out


def _record_cell_key(r: EvalRecord) -> tuple:
    return (r.signal_id, r.method, r.estimator, r.order, float(r.gap_length_ms))


def run_sweep(spec: SweepSpec, progress=None) -> list[EvalRecord]:
    """Run every pending cell of ``spec`` and write the sorted results CSV."""
    todo = cells(spec)
    partial = _partial_path(spec)
    done = _load_partial(partial)
    finished = {_record_cell_key(r) for r in done}
    pending = [c for c in todo if c.key() not in finished]
    if finished:
        log.info("resuming: %d of %d cells already done", len(todo) - len(pending), len(todo))
    results = list(done)
    total = len(todo)
    n_done = total - len(pending)

    def collect(cell, recs):
        nonlocal n_done
        append_results(recs, partial)
        results.extend(recs)
        n_done += 1
        if progress is not None:
            progress(n_done, total, cell)

    if spec.jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            futures = {pool.submit(run_cell, spec, c): c for c in pending}
            for fut in as_completed(futures):
                collect(futures[fut], fut.result())
    else:
        for c in pending:
            collect(c, run_cell(spec, c))
    write_results(results, spec.output_csv)
    partial.unlink(missing_ok=True)
    return sorted(results, key=lambda r: r.key())
