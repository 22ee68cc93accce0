"""
DG Labeler - Main Entry Point
"""
import argparse
import sys
import os

# Add current directory to path
sys.path.insert(0, os.path.dirname(__file__))

import config
from database import close_db
from handlers import Console, route_command
from utils.errors import LabelerError, UsageError


class LabelerArgumentParser(argparse.ArgumentParser):
    """Usage errors become UsageError so they share the JSON error line and exit code 2"""

    def error(self, message):
        raise UsageError(message)


def _common(quiet=True, jobs=False):
    parent = argparse.ArgumentParser(add_help=False)
    if quiet:
        parent.add_argument("--quiet", action="store_true", help="suppress status lines")
    if jobs:
        parent.add_argument("--jobs", type=int, default=None,
                            help=f"worker pool size (default {config.DEFAULT_JOBS})")
    return parent


def _dgm_flags():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--k", type=int, default=None,
                        help=f"sub-regions per RoI axis (default {config.DGM_GRID_ORDER})")
    parent.add_argument("--tau-prod", dest="tau_prod", type=float, default=None,
                        help=f"threshold on base mask times normalized depth (default {config.DGM_TAU_PROD})")
    return parent


def _assoc_flags():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--dist-threshold", dest="dist_threshold", type=float, default=None,
                        help=f"max embedding distance (default {config.ASSOC_DIST_THRESHOLD})")
    parent.add_argument("--max-gap", dest="max_gap", type=int, default=None,
                        help=f"max frame gap when extending a track (default {config.ASSOC_MAX_GAP})")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = LabelerArgumentParser(
        prog=config.TOOL_NAME,
        description="Depth-guided MOTS annotation pipeline and evaluation toolkit",
    )
    parser.add_argument("--version", action="version", version=f"{config.TOOL_NAME} {config.TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common()
    pooled = _common(quiet=False, jobs=True)
    dgm = _dgm_flags()
    assoc = _assoc_flags()

    p = sub.add_parser("codec", parents=[common], help="encode a .npy mask to RLE or decode it back")
    p.add_argument("action", choices=["encode", "decode"])
    p.add_argument("--input", required=True, help=".npy mask (encode) or RLE JSON (decode)")
    p.add_argument("--out", help="RLE JSON (encode, default prints counts) or .npy mask (decode)")

    p = sub.add_parser("refine", parents=[common, dgm], help="depth-refine the masks of an annotation")
    p.add_argument("--pred", required=True, help="MOTS text file to refine")
    p.add_argument("--depth", required=True, help="directory of per-frame .pfm depth maps")
    p.add_argument("--out", required=True)

    p = sub.add_parser("track", parents=[common, assoc], help="associate detections into tracks")
    p.add_argument("--detections", required=True, help="detection interchange JSON")
    p.add_argument("--out", required=True)

    p = sub.add_parser("pipeline", parents=[common, dgm, assoc], help="refine, paste and track detections")
    p.add_argument("--detections", required=True)
    p.add_argument("--depth", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("features", parents=[common], help="flow-warped temporal feature aggregation")
    p.add_argument("--features", required=True, help="directory of per-frame .npy feature maps (C, H, W)")
    p.add_argument("--flow", required=True, help="directory of per-frame backward .flo flows")
    p.add_argument("--out", required=True)
    p.add_argument("--temporal-range", dest="temporal_range", type=int, default=config.TEMPORAL_RANGE)

    p = sub.add_parser("eval", parents=[common, pooled], help="sMOTSA, MOTSA, IDS and HOTA")
    p.add_argument("--gt", required=True, help="sequence file or directory of *.txt sequences")
    p.add_argument("--pred", required=True)
    p.add_argument("--seqmap", help="KITTI seqmap giving each ground-truth sequence its frame range")
    p.add_argument("--classes", help="comma-separated class names, e.g. car,pedestrian")
    p.add_argument("--percent", action="store_true", help="print ratios in percent")
    p.add_argument("--resolve-overlaps", dest="resolve_overlaps", action="store_true",
                   help="paste overlapping predictions instead of rejecting them")
    p.add_argument("--out", help="JSON report")
    p.add_argument("--pdf", help="PDF report")
    p.add_argument("--record", action="store_true", help="store the report in the run ledger")
    p.add_argument("--label", help="campaign label for --record")
    p.add_argument("--iteration", type=int, help="annotation iteration for --record")

    p = sub.add_parser("stats", parents=[common, pooled], help="annotation statistics")
    p.add_argument("--gt", required=True)
    p.add_argument("--out", help="JSON statistics")
    p.add_argument("--pdf", help="PDF statistics with histograms")
    p.add_argument("--label", help="dataset name shown in the table")
    p.add_argument("--seqmap", help="KITTI seqmap giving each sequence its frame range")
    p.add_argument("--bins", type=int, default=config.HISTOGRAM_BINS)

    p = sub.add_parser("subsample", parents=[common], help="keep every n-th frame")
    p.add_argument("--gt", required=True)
    p.add_argument("--stride", type=int, default=config.SUBSAMPLE_STRIDE)
    p.add_argument("--out", required=True, help="output file, or directory when --gt is a directory")

    p = sub.add_parser("synth", parents=[common], help="write a synthetic scene fixture")
    p.add_argument("--out", required=True, help="fixture directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int, default=5)
    p.add_argument("--objects", type=int, default=2)
    p.add_argument("--height", type=int, default=48)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--noise", type=int, default=0, help="coarse-mask degradation radius")
    p.add_argument("--constant-depth", dest="constant_depth", action="store_true")
    p.add_argument("--occlusion", action="store_true", help="free placement with occlusion")

    p = sub.add_parser("history", parents=[common], help="list stored evaluation runs")
    p.add_argument("--label")
    p.add_argument("--limit", type=int, default=20)

    p = sub.add_parser("schema", parents=[common], help="print the detection file JSON schema")
    p.add_argument("--out")

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return route_command(args)
    except LabelerError as e:
        Console.error(e.to_record())
        return e.exit_code
    except OSError as e:
        Console.error(UsageError(str(e)).to_record())
        return UsageError.exit_code
    finally:
        close_db()


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n[OK] Stopped by user")
        sys.exit(130)
