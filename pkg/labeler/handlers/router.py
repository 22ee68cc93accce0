"""
Command router - validates parsed arguments into a RunConfig and dispatches
to the subcommand handler
"""
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import config
from granularity import DgmParams
from tracking import AssocParams
from utils.errors import UsageError
from .commands import COMMAND_HANDLERS
from .console import Console

# Flags naming files or directories that must exist before the command runs
INPUT_FLAGS = ("gt", "pred", "depth", "detections", "input", "features", "flow", "seqmap")


def parse_classes(value: Optional[str]) -> Optional[List[str]]:
    """'car,pedestrian' -> ['car', 'pedestrian']; None or blank selects every class"""
    if value is None:
        return None
    names = [part.strip() for part in value.split(",") if part.strip()]
    return names or None


@dataclass(frozen=True)
class RunConfig:
    command: str
    paths: Dict[str, str] = field(default_factory=dict)
    dgm: DgmParams = field(default_factory=DgmParams)
    assoc: AssocParams = field(default_factory=AssocParams)
    classes: Optional[List[str]] = None
    jobs: int = 1
    quiet: bool = False

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        jobs = getattr(args, "jobs", None)
        jobs = config.DEFAULT_JOBS if jobs is None else jobs
        if jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {jobs}")

        paths = {}
        for name in INPUT_FLAGS:
            value = getattr(args, name, None)
            if value is None:
                continue
            if not os.path.exists(value):
                raise UsageError(f"--{name}: {value} does not exist")
            paths[name] = value
        out = getattr(args, "out", None)
        if out is not None:
            paths["out"] = out

        dgm = DgmParams(
            k=_flag(args, "k", config.DGM_GRID_ORDER),
            tau_prod=_flag(args, "tau_prod", config.DGM_TAU_PROD),
        )
        assoc = AssocParams(
            dist_threshold=_flag(args, "dist_threshold", config.ASSOC_DIST_THRESHOLD),
            max_gap=_flag(args, "max_gap", config.ASSOC_MAX_GAP),
        )
        return cls(
            command=args.command,
            paths=paths,
            dgm=dgm,
            assoc=assoc,
            classes=parse_classes(getattr(args, "classes", None)),
            jobs=jobs,
            quiet=bool(getattr(args, "quiet", False)),
        )


def _flag(args, name, default):
    value = getattr(args, name, None)
    return default if value is None else value


def route_command(args) -> int:
    """Run one parsed command line. Errors propagate to the entry point."""
    handler = COMMAND_HANDLERS.get(args.command)
    if handler is None:
        raise UsageError(f"unknown command: {args.command}")
    cfg = RunConfig.from_args(args)
    console = Console(cfg.quiet)
    return handler(args, cfg, console)
