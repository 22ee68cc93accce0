"""Database package for the DG Labeler run ledger"""
from .models import EvaluationRun, ClassResult
from .db import init_db, close_db, SessionLocal
from .crud import *

__all__ = [
    'EvaluationRun', 'ClassResult',
    'init_db', 'close_db', 'SessionLocal',
    'record_evaluation', 'list_runs', 'get_run', 'get_class_results', 'iteration_progress',
]
