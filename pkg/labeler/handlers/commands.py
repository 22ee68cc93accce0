"""
Subcommand handlers. Each takes (args, cfg, console) and returns the exit status.
"""
import json
import os

import numpy as np

import config
from database import get_class_results, init_db, iteration_progress, list_runs, record_evaluation
from dataset import dataset_stats, format_summary_table, load_seqmap, save_sequence, subsample_every_n
from evaluation import evaluate
from masks import BinaryMask, RleMask, rle_decode, rle_encode
from synth import SynthSpec, synth_generate, write_fixture
from temporal import aggregate_sequence
from tracking import detection_schema, load_detections, refine_annotation, run_labeler_pipeline, track_annotation
from utils.atomic import atomic_write, atomic_write_dir, atomic_write_json, atomic_write_text
from utils.errors import FileFormatError, SchemaError, UsageError
from utils.pdf_generator import generate_metrics_pdf, generate_stats_pdf
from utils.sequence_store import SequenceStore


def _save_npy(path, values):
    def writer(tmp):
        with open(tmp, "wb") as f:
            np.save(f, values, allow_pickle=False)
    atomic_write(path, writer)


def _require(args, name):
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"{args.command} needs --{name.replace('_', '-')}")
    return value


def _frame_counts(args):
    return load_seqmap(args.seqmap) if getattr(args, "seqmap", None) else None


def _single_sequence(path, validate=True):
    anns = SequenceStore.load_sequences(path, validate=validate, quiet=True)
    if len(anns) != 1:
        raise UsageError(f"{path}: expected one sequence file, found {len(anns)}")
    return anns[0]


# ==================== CODEC ====================

def handle_codec(args, cfg, console):
    if args.action == "encode":
        try:
            values = np.load(args.input, allow_pickle=False)
        except (OSError, ValueError) as e:
            raise FileFormatError(f"{args.input}: cannot read mask array ({e})")
        rle = rle_encode(BinaryMask(values))
        if args.out:
            atomic_write_json(args.out, rle.to_dict())
            console.ok(f"Encoded {rle.height}x{rle.width} mask -> {args.out}")
        else:
            console.data(rle.counts)
        return 0

    out = _require(args, "out")
    try:
        with open(args.input, "r", encoding="utf-8") as f:
            rle = RleMask.from_dict(json.load(f))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"{args.input}: expected a JSON object with height, width and counts ({e})")
    mask = rle_decode(rle)
    _save_npy(out, mask.to_array().astype(np.uint8))
    console.ok(f"Decoded {mask.height}x{mask.width} mask (area {mask.area}) -> {out}")
    return 0


# ==================== LABELING ====================

def handle_refine(args, cfg, console):
    ann = _single_sequence(args.pred)
    depth = SequenceStore.load_depth_dir(args.depth)
    console.tag("PIPELINE", f"Refining {ann.instance_count} masks of {ann.sequence_id} (k={cfg.dgm.k}, "
                            f"tau_prod={cfg.dgm.tau_prod})")
    refined = refine_annotation(ann, depth, cfg.dgm)
    save_sequence(args.out, refined)
    console.ok(f"{refined.instance_count} refined masks -> {args.out}")
    return 0


def handle_track(args, cfg, console):
    sequence_id, frames = load_detections(args.detections)
    ann = track_annotation(frames, cfg.assoc, sequence_id, frame_count=len(frames))
    save_sequence(args.out, ann)
    console.ok(f"{len(ann.track_ids())} tracks over {ann.frame_count} frames -> {args.out}")
    return 0


def handle_pipeline(args, cfg, console):
    sequence_id, frames = load_detections(args.detections)
    depth = SequenceStore.load_depth_dir(args.depth)
    console.tag("PIPELINE", f"{sequence_id}: {sum(len(d) for d in frames)} detections, {len(depth)} depth maps")
    ann = run_labeler_pipeline(frames, depth, cfg.dgm, cfg.assoc, sequence_id,
                               frame_count=max(len(depth), len(frames)))
    save_sequence(args.out, ann)
    console.ok(f"{len(ann.track_ids())} tracks, {ann.instance_count} masks -> {args.out}")
    return 0


def handle_features(args, cfg, console):
    feature_files = SequenceStore.frame_files(args.features, ".npy")
    features = SequenceStore.load_feature_dir(args.features)
    flows = SequenceStore.load_flow_dir(args.flow)
    aggregated = aggregate_sequence(features, flows, args.temporal_range)

    def write_all(staging):
        for src, fm in zip(feature_files, aggregated):
            _save_npy(os.path.join(staging, os.path.basename(src)), fm.values)

    atomic_write_dir(args.out, write_all)
    console.ok(f"Aggregated {len(aggregated)} feature maps -> {args.out}")
    return 0


# ==================== EVALUATION ====================

def handle_eval(args, cfg, console):
    console.banner(f"{config.TOOL_NAME.upper()} - EVALUATION")
    gt = SequenceStore.load_sequences(args.gt, quiet=cfg.quiet, frame_counts=_frame_counts(args))
    pred = SequenceStore.load_sequences(args.pred, validate=not args.resolve_overlaps, quiet=cfg.quiet)
    console.tag("EVAL", f"{len(gt)} ground-truth and {len(pred)} predicted sequences, jobs={cfg.jobs}")

    report = evaluate(gt, pred, classes=cfg.classes, resolve=args.resolve_overlaps, jobs=cfg.jobs)

    if args.out:
        atomic_write_json(args.out, report.to_dict())
        console.ok(f"Report -> {args.out}")
    if args.pdf:
        generate_metrics_pdf(report, args.pdf)
        console.tag("PDF", f"Report -> {args.pdf}")
    if args.record:
        init_db(quiet=cfg.quiet)
        run_id = record_evaluation(report, args.gt, args.pred, args.label, args.iteration)
        console.tag("DB", f"Stored run #{run_id}")

    console.data(report.to_text(args.percent))
    return 0


def handle_stats(args, cfg, console):
    anns = SequenceStore.load_sequences(args.gt, quiet=cfg.quiet, frame_counts=_frame_counts(args))
    name = args.label or os.path.splitext(os.path.basename(os.path.normpath(args.gt)))[0]
    console.tag("STATS", f"{len(anns)} sequences from {args.gt}")
    report = dataset_stats(anns, bins=args.bins, jobs=cfg.jobs)

    if args.out:
        atomic_write_json(args.out, {"dataset": name, **report.to_dict()})
        console.ok(f"Statistics -> {args.out}")
    if args.pdf:
        generate_stats_pdf([(name, report)], args.pdf)
        console.tag("PDF", f"Statistics -> {args.pdf}")

    console.data(format_summary_table([(name, report)]))
    return 0


def handle_subsample(args, cfg, console):
    files = SequenceStore.resolve_sequence_files(args.gt)
    anns = SequenceStore.load_sequences(args.gt, quiet=cfg.quiet)
    into_dir = os.path.isdir(args.gt)
    for file, ann in zip(files, anns):
        sub = subsample_every_n(ann, args.stride)
        target = os.path.join(args.out, os.path.basename(file)) if into_dir else args.out
        save_sequence(target, sub)
        console.ok(f"{ann.sequence_id}: {ann.frame_count} -> {sub.frame_count} frames -> {target}")
    return 0


# ==================== SYNTHETIC SCENES ====================

def handle_synth(args, cfg, console):
    spec = SynthSpec(
        seed=args.seed,
        frames=args.frames,
        objects=args.objects,
        height=args.height,
        width=args.width,
        noise=args.noise,
        depth_mode="constant" if args.constant_depth else "layered",
        occlusion=args.occlusion,
    )
    scene = synth_generate(spec)
    paths = write_fixture(scene, args.out)
    console.tag("SYNTH", f"{scene.ground_truth.sequence_id}: {spec.frames} frames, {spec.objects} objects, "
                         f"noise {spec.noise}")
    for kind, path in paths.items():
        console.ok(f"{kind} -> {path}")
    return 0


# ==================== RUN LEDGER ====================

def _fmt(value):
    return "n/a" if value is None else f"{value:.4f}"


def handle_history(args, cfg, console):
    init_db(quiet=True)
    runs = list_runs(limit=args.limit, label=args.label)
    if not runs:
        console.tag("SKIP", "No stored runs")
        return 0

    lines = []
    for run in runs:
        aggregate = next((r for r in get_class_results(run.id) if r.class_name == "aggregate"), None)
        hota = _fmt(aggregate.hota) if aggregate else "n/a"
        smotsa = _fmt(aggregate.smotsa) if aggregate else "n/a"
        created = run.created_at.strftime("%Y-%m-%d %H:%M") if run.created_at else "?"
        iteration = "-" if run.iteration is None else str(run.iteration)
        lines.append(f"#{run.id:<4} {created}  {run.label or '-':<16} it={iteration:<3} "
                     f"sMOTSA={smotsa} HOTA={hota}  {run.pred_path}")
    console.data("\n".join(lines))

    if args.label:
        progress = iteration_progress(args.label)
        if progress:
            console.data(f"\nProgress of {args.label}:")
            for row in progress:
                console.data(f"  iteration {row['iteration']}: sMOTSA={_fmt(row['smotsa'])} "
                             f"MOTSA={_fmt(row['motsa'])} HOTA={_fmt(row['hota'])} IDS={row['ids']}")
    return 0


def handle_schema(args, cfg, console):
    text = json.dumps(detection_schema(), indent=2)
    if args.out:
        atomic_write_text(args.out, text + "\n")
        console.ok(f"Detection schema -> {args.out}")
    else:
        console.data(text)
    return 0


COMMAND_HANDLERS = {
    "codec": handle_codec,
    "refine": handle_refine,
    "track": handle_track,
    "pipeline": handle_pipeline,
    "features": handle_features,
    "eval": handle_eval,
    "stats": handle_stats,
    "subsample": handle_subsample,
    "synth": handle_synth,
    "history": handle_history,
    "schema": handle_schema,
}
