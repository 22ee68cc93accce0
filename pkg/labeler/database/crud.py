"""
CRUD operations for the evaluation run ledger
"""
from datetime import datetime
from typing import Dict, List, Optional

from .models import EvaluationRun, ClassResult
from .db import SessionLocal
import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))
import config


# ==================== RUN OPERATIONS ====================

def record_evaluation(report, gt_path: str, pred_path: str, label: Optional[str] = None,
                      iteration: Optional[int] = None) -> int:
    """Store a MetricsReport with one ClassResult per class plus the aggregate. Returns the run id."""
    db = SessionLocal()
    try:
        run = EvaluationRun(
            created_at=datetime.utcnow(),
            label=label,
            iteration=iteration,
            gt_path=str(gt_path),
            pred_path=str(pred_path),
            tool_version=config.TOOL_VERSION,
            report_json=report.to_json(),
        )
        for name, values in report.to_dict().items():
            if name == "meta":
                continue
            run.class_results.append(ClassResult(
                class_name=name,
                smotsa=values["smotsa"],
                motsa=values["motsa"],
                hota=values["hota"],
                ids=values["ids"],
                tp=values["tp"],
                fp=values["fp"],
                fn=values["fn"],
                soft_tp=values["soft_tp"],
            ))
        db.add(run)
        db.commit()
        db.refresh(run)
        return run.id
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()


def list_runs(limit: int = 20, label: Optional[str] = None) -> List[EvaluationRun]:
    """Most recent runs first"""
    db = SessionLocal()
    try:
        query = db.query(EvaluationRun)
        if label is not None:
            query = query.filter(EvaluationRun.label == label)
        return query.order_by(EvaluationRun.id.desc()).limit(limit).all()
    finally:
        db.close()


def get_run(run_id: int) -> Optional[EvaluationRun]:
    db = SessionLocal()
    try:
        return db.query(EvaluationRun).filter(EvaluationRun.id == run_id).first()
    finally:
        db.close()


def get_class_results(run_id: int) -> List[ClassResult]:
    db = SessionLocal()
    try:
        return (
            db.query(ClassResult)
            .filter(ClassResult.run_id == run_id)
            .order_by(ClassResult.id)
            .all()
        )
    finally:
        db.close()


# ==================== PROGRESS ====================

def iteration_progress(label: str) -> List[Dict]:
    """
    Aggregate metrics per annotation iteration of one campaign, ordered by iteration.
    The latest run of an iteration wins.
    """
    db = SessionLocal()
    try:
        rows = (
            db.query(EvaluationRun, ClassResult)
            .join(ClassResult, ClassResult.run_id == EvaluationRun.id)
            .filter(EvaluationRun.label == label, ClassResult.class_name == "aggregate")
            .filter(EvaluationRun.iteration.isnot(None))
            .order_by(EvaluationRun.iteration, EvaluationRun.id)
            .all()
        )
        latest = {}
        for run, result in rows:
            latest[run.iteration] = {
                "iteration": run.iteration,
                "run_id": run.id,
                "smotsa": result.smotsa,
                "motsa": result.motsa,
                "hota": result.hota,
                "ids": result.ids,
            }
        return [latest[i] for i in sorted(latest)]
    finally:
        db.close()
