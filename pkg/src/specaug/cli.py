"""Batch command-line interface: features, augment, render, schedule, fuse.

Manifests are TSV files with rows `id<TAB>input[<TAB>output]`; blank
lines and `#` comments are skipped.  Randomness for each utterance comes
from a stream keyed by (master seed, manifest ROW INDEX), not by the id:
renaming an utterance leaves its augmentation unchanged, reordering rows
reshuffles draws.  Entries are processed independently, so outputs are
byte-identical for any worker count.

Exit status: 0 when every entry succeeds, 1 when any entry fails, 2 for
usage errors.  The SPECAUG_LOG environment variable (debug, info,
warning, error) raises or lowers log verbosity.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .audio import load_wav
from .errors import SpecAugError
from .features import FrontendConfig, Spectrogram, add_deltas, log_mel, normalize
from .masks import MaskRecord
from .npyio import read_feature_file, write_feature_file
from .policy import Policy, augment, load_policy
from .render import render_png
from .rng import split_stream
from .training import (
    FusionWeights,
    HypothesisScore,
    ScheduleParams,
    fused_score,
    lr_at_step,
    noise_active,
    schedule_preset,
)

logger = logging.getLogger(__name__)

# Spectrograms whose values already average to (almost) zero are taken
# as normalized; anything else gets its whole-matrix mean removed before
# masking, and the removed offset lands in the audit record.
_NORMALIZED_MEAN_TOL = 1e-5


class UsageError(SpecAugError):
    """Bad invocation or malformed configuration; maps to exit code 2."""


@dataclass(frozen=True)
class ManifestEntry:
    index: int
    utterance_id: str
    input_path: str
    output_path: str | None = None


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RunConfig:
    """Settings for one augmentation batch."""

    policy: Policy
    master_seed: int
    workers: int = 1
    emit_audit: bool = False

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def read_manifest(path: str | Path) -> Manifest:
    """Parse a TSV manifest; `#` comments and blank lines are skipped."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read manifest {path}: {exc}") from exc
    entries = []
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [part.strip() for part in line.split("\t")]
        if len(fields) not in (2, 3) or not all(fields):
            raise UsageError(
                f"{path}:{lineno}: expected 'id<TAB>input[<TAB>output]', got {raw!r}"
            )
        utt = fields[0]
        if utt in seen:
            raise UsageError(f"{path}:{lineno}: duplicate utterance id {utt!r}")
        seen.add(utt)
        out = fields[2] if len(fields) == 3 else None
        entries.append(ManifestEntry(len(entries), utt, fields[1], out))
    return Manifest(tuple(entries))


def _default_output(entry: ManifestEntry, out_dir: str | None, suffix: str) -> str:
    if entry.output_path is not None:
        return entry.output_path
    base = Path(out_dir) if out_dir else Path(entry.input_path).parent
    return str(base / f"{entry.utterance_id}{suffix}")


def _atomic_write_text(path: str | Path, text: str) -> None:
    target = Path(path)
    tmp = target.with_name(f"{target.name}.tmp.{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, target)


def _run_tasks(func: Callable, tasks: Sequence, workers: int) -> list:
    """Map `func` over tasks, preserving input order."""
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))


def _report(results: list[dict], command: str) -> int:
    failed = [r for r in results if not r["ok"]]
    for r in failed:
        logger.error("%s: %s failed: %s", command, r["id"], r["error"])
    if failed:
        logger.error("%s: %d of %d entries failed", command, len(failed), len(results))
        return 1
    logger.info("%s: %d entries processed", command, len(results))
    return 0


# ---------------------------------------------------------------------------
# features


def _features_one(task: tuple) -> dict:
    index, utt, in_path, out_path, cfg, want_deltas, delta_window = task
    try:
        audio = load_wav(in_path)
        spec = log_mel(audio, cfg)
        payload = add_deltas(spec, window=delta_window) if want_deltas else spec
        write_feature_file(out_path, payload)
        return {"index": index, "id": utt, "ok": True, "error": None}
    except Exception as exc:
        return {"index": index, "id": utt, "ok": False, "error": f"{type(exc).__name__}: {exc}"}


def cmd_features(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    if not manifest.entries:
        logger.warning("manifest %s has no entries; nothing to do", args.manifest)
        return 0
    try:
        cfg = FrontendConfig(
            window_ms=args.window_ms,
            hop_ms=args.hop_ms,
            fft_size=args.fft_size,
            nu=args.channels,
            fmin_hz=args.fmin,
            fmax_hz=args.fmax,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    tasks = [
        (
            entry.index,
            entry.utterance_id,
            entry.input_path,
            _default_output(entry, args.out_dir, ".npy"),
            cfg,
            args.deltas,
            args.delta_window,
        )
        for entry in manifest.entries
    ]
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    results = _run_tasks(_features_one, tasks, args.workers)
    return _report(results, "features")


# ---------------------------------------------------------------------------
# augment


def _coerce_normalized(spec: Spectrogram) -> tuple[Spectrogram, float]:
    mean = float(spec.values.mean())
    if abs(mean) < _NORMALIZED_MEAN_TOL:
        return dataclasses.replace(spec, normalized=True), 0.0
    shifted = normalize(spec)
    return shifted, shifted.mean_offset


def _augment_one(task: tuple) -> dict:
    index, utt, in_path, out_path, policy, seed, channels, want_audit = task
    try:
        data = read_feature_file(in_path, nu=channels)
        if not isinstance(data, Spectrogram):
            raise SpecAugError(
                f"{in_path}: expected a {channels}-channel spectrogram, "
                f"got a delta feature matrix"
            )
        audit = None
        if policy.is_identity:
            write_feature_file(out_path, data)
            if want_audit:
                audit = {"id": utt, "warp": None, "masks": [], "mean_offset": 0.0}
        else:
            spec, offset = _coerce_normalized(data)
            out, record = augment(spec, policy, split_stream(seed, index))
            write_feature_file(out_path, out)
            if want_audit:
                audit = {"id": utt, **record.as_dict(), "mean_offset": offset}
        return {"index": index, "id": utt, "ok": True, "error": None, "audit": audit}
    except Exception as exc:
        return {
            "index": index,
            "id": utt,
            "ok": False,
            "error": f"{type(exc).__name__}: {exc}",
            "audit": None,
        }


def cmd_augment(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest)
    if not manifest.entries:
        logger.warning("manifest %s has no entries; nothing to do", args.manifest)
        return 0
    if args.policy is None:
        raise UsageError("augment requires --policy <name|file>")
    try:
        run = RunConfig(
            policy=load_policy(args.policy),
            master_seed=args.seed,
            workers=args.workers,
            emit_audit=args.audit is not None,
        )
    except (SpecAugError, ValueError, KeyError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    tasks = [
        (
            entry.index,
            entry.utterance_id,
            entry.input_path,
            _default_output(entry, args.out_dir, ".aug.npy"),
            run.policy,
            run.master_seed,
            args.channels,
            run.emit_audit,
        )
        for entry in manifest.entries
    ]
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    results = _run_tasks(_augment_one, tasks, run.workers)
    if run.emit_audit:
        lines = [
            json.dumps(r["audit"], sort_keys=True) for r in results if r["audit"] is not None
        ]
        _atomic_write_text(args.audit, "".join(line + "\n" for line in lines))
    return _report(results, "augment")


# ---------------------------------------------------------------------------
# render


def _overlay_records(path: str, overlay_id: str | None) -> list[MaskRecord]:
    try:
        lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read audit file {path}: {exc}") from exc
    rows = [json.loads(line) for line in lines]
    if overlay_id is not None:
        rows = [row for row in rows if row.get("id") == overlay_id]
        if not rows:
            raise UsageError(f"no audit entry with id {overlay_id!r} in {path}")
    elif len(rows) != 1:
        raise UsageError(f"{path} has {len(rows)} entries; pick one with --overlay-id")
    return [
        MaskRecord(axis=m["axis"], start=m["start"], width=m["width"])
        for m in rows[0].get("masks", [])
    ]


def cmd_render(args: argparse.Namespace) -> int:
    records = None
    if args.overlay is not None:
        records = _overlay_records(args.overlay, args.overlay_id)
    try:
        data = read_feature_file(args.input)
        render_png(data, args.output, zoom=args.zoom, mask_records=records)
    except (SpecAugError, ValueError, OSError) as exc:
        logger.error("render: %s", exc)
        return 1
    return 0


# ---------------------------------------------------------------------------
# schedule


def _schedule_from_args(args: argparse.Namespace) -> ScheduleParams:
    stamps = (args.ramp_end, args.noise_start, args.decay_start, args.decay_end)
    if args.name is not None:
        if any(v is not None for v in stamps):
            raise UsageError("give either --name or explicit step stamps, not both")
        return schedule_preset(args.name, peak_lr=args.peak)
    if any(v is None for v in stamps):
        raise UsageError(
            "explicit schedules need all of --ramp-end, --noise-start, "
            "--decay-start, --decay-end"
        )
    try:
        return ScheduleParams(*stamps, peak_lr=args.peak)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_schedule(args: argparse.Namespace) -> int:
    try:
        sched = _schedule_from_args(args)
    except SpecAugError as exc:
        raise UsageError(str(exc)) from exc
    if args.max_step < 0 or args.stride < 1:
        raise UsageError("--max-step must be >= 0 and --stride >= 1")
    rows = ["step,lr,noise_active"]
    for step in range(0, args.max_step + 1, args.stride):
        rows.append(f"{step},{lr_at_step(step, sched):.12g},{int(noise_active(step, sched))}")
    text = "\n".join(rows) + "\n"
    if args.out:
        _atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# fuse


def _read_scores(path: str) -> list[tuple[str, HypothesisScore]]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read scores {path}: {exc}") from exc
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2 or len(fields) > 4:
            raise UsageError(
                f"{path}:{lineno}: expected 'id<TAB>asr[<TAB>lm[<TAB>coverage]]', got {raw!r}"
            )
        try:
            numbers = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: non-numeric score in {raw!r}") from exc
        numbers += [0.0] * (3 - len(numbers))
        rows.append((fields[0], HypothesisScore(*numbers)))
    return rows


def cmd_fuse(args: argparse.Namespace) -> int:
    try:
        weights = FusionWeights(lm_weight=args.lm_weight, coverage_weight=args.coverage_weight)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = _read_scores(args.scores)
    scored = [(utt, fused_score(h, weights)) for utt, h in rows]
    # Stable sort: candidates with equal fused scores keep input order.
    scored.sort(key=lambda item: item[1], reverse=True)
    text = "".join(f"{utt}\t{score:.10g}\n" for utt, score in scored)
    if args.out:
        _atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser plumbing


def _find_config(argv: Sequence[str]) -> tuple[str | None, str | None]:
    """Pre-scan argv for the subcommand name and a --config value."""
    command = None
    config = None
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok == "--config" and i + 1 < len(argv):
            config = argv[i + 1]
            next(it, None)
        elif tok.startswith("--config="):
            config = tok.split("=", 1)[1]
        elif command is None and not tok.startswith("-"):
            command = tok
    return command, config


def _load_config_defaults(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


def build_parser(config_defaults: dict | None = None, config_command: str | None = None):
    parser = argparse.ArgumentParser(
        prog="specaug",
        description="Deterministic spectrogram augmentation and feature tooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def register(name: str, help_text: str, func) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file of default option values")
        p.set_defaults(func=func)
        return p

    p = register("features", "compute log mel features from WAV files", cmd_features)
    p.add_argument("manifest", help="TSV manifest: id<TAB>wav[<TAB>out.npy]")
    p.add_argument("--out-dir", help="directory for outputs when the manifest names none")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--window-ms", type=float, default=25.0)
    p.add_argument("--hop-ms", type=float, default=10.0)
    p.add_argument("--fft-size", type=int, default=512)
    p.add_argument("--channels", type=int, default=80, help="mel channel count")
    p.add_argument("--fmin", type=float, default=20.0)
    p.add_argument("--fmax", type=float, default=7600.0)
    p.add_argument("--deltas", action="store_true", help="append delta and delta-delta blocks")
    p.add_argument("--delta-window", type=int, default=2)

    p = register("augment", "apply an augmentation policy to feature files", cmd_augment)
    p.add_argument("manifest", help="TSV manifest: id<TAB>in.npy[<TAB>out.npy]")
    p.add_argument("--policy", help="preset name or policy JSON file")
    p.add_argument("--seed", type=int, default=0, help="master seed for the batch")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--channels", type=int, default=80, help="expected mel channel count")
    p.add_argument("--out-dir", help="directory for outputs when the manifest names none")
    p.add_argument("--audit", help="write per-utterance audit records to this JSONL file")

    p = register("render", "draw a feature file as a PNG", cmd_render)
    p.add_argument("input", help="NPY feature file")
    p.add_argument("output", help="PNG path")
    p.add_argument("--zoom", type=int, default=1, help="integer pixel replication factor")
    p.add_argument("--overlay", help="audit JSONL whose mask records get tinted")
    p.add_argument("--overlay-id", help="utterance id to pick from the audit file")

    p = register("schedule", "emit a step,lr,noise_active CSV", cmd_schedule)
    p.add_argument("--name", help="built-in schedule name (B, D, L)")
    p.add_argument("--ramp-end", type=int)
    p.add_argument("--noise-start", type=int)
    p.add_argument("--decay-start", type=int)
    p.add_argument("--decay-end", type=int)
    p.add_argument("--peak", type=float, default=0.001)
    p.add_argument("--max-step", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--out", help="CSV path (stdout when omitted)")

    p = register("fuse", "rank hypotheses by fused decoding score", cmd_fuse)
    p.add_argument("scores", help="TSV: id<TAB>asr_logprob[<TAB>lm_logprob[<TAB>coverage]]")
    p.add_argument("--lm-weight", type=float, default=0.0)
    p.add_argument("--coverage-weight", type=float, default=0.0)
    p.add_argument("--out", help="ranked TSV path (stdout when omitted)")

    if config_defaults and config_command in sub.choices:
        target = sub.choices[config_command]
        dests = {action.dest for action in target._actions}
        unknown = set(config_defaults) - dests
        if unknown:
            raise UsageError(f"config keys not recognized by {config_command}: {sorted(unknown)}")
        target.set_defaults(**config_defaults)
    return parser


def _configure_logging() -> None:
    name = os.environ.get("SPECAUG_LOG", "warning").strip().lower()
    level = {
        "debug": logging.DEBUG,
        "info": logging.INFO,
        "warning": logging.WARNING,
        "error": logging.ERROR,
        "critical": logging.CRITICAL,
    }.get(name, logging.WARNING)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    logging.getLogger("specaug").setLevel(level)


def main(argv: Sequence[str] | None = None) -> int:
    args_in = list(sys.argv[1:] if argv is None else argv)
    _configure_logging()
    try:
        command, config_path = _find_config(args_in)
        defaults = _load_config_defaults(config_path) if config_path else None
        parser = build_parser(defaults, command)
        args = parser.parse_args(args_in)
        return args.func(args)
    except UsageError as exc:
        print(f"specaug: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
