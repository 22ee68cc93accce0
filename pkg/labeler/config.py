"""
DG Labeler Configuration
"""
import os
from dotenv import load_dotenv

load_dotenv()

TOOL_NAME = "dg-labeler"
TOOL_VERSION = "1.0.0"

# Run ledger
DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///dg_labeler_runs.db")

# Depth-granularity module
DGM_GRID_ORDER = int(os.getenv("DGM_GRID_ORDER", "2"))  # k: sub-regions per RoI axis
DGM_TAU_PROD = float(os.getenv("DGM_TAU_PROD", "0.25"))  # threshold on base * normalized depth

# Association
ASSOC_DIST_THRESHOLD = float(os.getenv("ASSOC_DIST_THRESHOLD", "0.5"))
ASSOC_MAX_GAP = int(os.getenv("ASSOC_MAX_GAP", "2"))

# Training objective
TRACK_MARGIN = float(os.getenv("TRACK_MARGIN", "1.0"))
LOSS_WEIGHTS_STR = os.getenv("LOSS_WEIGHTS", "1,1,1,1,1")  # box, cls, mask, track, depth
LOSS_WEIGHTS = [float(x.strip()) for x in LOSS_WEIGHTS_STR.split(",") if x.strip()]

# Temporal aggregation: current frame plus the two before it
TEMPORAL_RANGE = int(os.getenv("TEMPORAL_RANGE", "3"))

# Dataset tooling
SUBSAMPLE_STRIDE = int(os.getenv("SUBSAMPLE_STRIDE", "5"))
HISTOGRAM_BINS = int(os.getenv("HISTOGRAM_BINS", "16"))

# Worker pool
DEFAULT_JOBS = int(os.getenv("DEFAULT_JOBS", "1"))

# KITTI MOTS conventions
CLASS_NAMES = {"car": 1, "pedestrian": 2}
CLASS_LABELS = {v: k for k, v in CLASS_NAMES.items()}
IGNORE_CLASS_ID = 10
IGNORE_OBJ_ID = 10000
OBJ_ID_FACTOR = 1000  # obj_id = class_id * 1000 + instance_id
