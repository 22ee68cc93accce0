"""
Database models for the DG Labeler run ledger
"""
from sqlalchemy import Column, Integer, String, Float, Text, ForeignKey
from sqlalchemy.types import TypeDecorator, DateTime
from sqlalchemy.orm import declarative_base, relationship
from datetime import datetime


class SafeDateTime(TypeDecorator):
    """
    DateTime that also accepts the ISO strings SQLite hands back
    ('YYYY-MM-DD HH:MM:SS[.ffffff]' or with a 'T' separator).
    """
    impl = DateTime
    cache_ok = True

    def process_bind_param(self, value, dialect):
        return value

    def process_result_value(self, value, dialect):
        if value is None or isinstance(value, datetime):
            return value
        try:
            return datetime.fromisoformat(value)
        except ValueError:
            pass
        for fmt in ("%Y-%m-%d %H:%M:%S.%f", "%Y-%m-%d %H:%M:%S"):
            try:
                return datetime.strptime(value, fmt)
            except ValueError:
                continue
        return value


Base = declarative_base()


class EvaluationRun(Base):
    """One `eval --record` invocation"""
    __tablename__ = 'evaluation_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    created_at = Column(SafeDateTime, default=datetime.utcnow, nullable=False, index=True)
    label = Column(String(255), nullable=True, index=True)  # groups runs of one annotation campaign
    iteration = Column(Integer, nullable=True)  # annotate / correct / fine-tune round
    gt_path = Column(Text, nullable=False)
    pred_path = Column(Text, nullable=False)
    tool_version = Column(String(50), nullable=False)
    report_json = Column(Text, nullable=False)

    class_results = relationship("ClassResult", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<EvaluationRun(id={self.id}, label='{self.label}', iteration={self.iteration})>"


class ClassResult(Base):
    """Per-class metrics of a run; class_name 'aggregate' holds the combined row"""
    __tablename__ = 'class_results'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('evaluation_runs.id'), nullable=False, index=True)
    class_name = Column(String(50), nullable=False)
    smotsa = Column(Float, nullable=True)  # NULL when the class has no ground truth
    motsa = Column(Float, nullable=True)
    hota = Column(Float, nullable=True)
    ids = Column(Integer, default=0, nullable=False)
    tp = Column(Integer, default=0, nullable=False)
    fp = Column(Integer, default=0, nullable=False)
    fn = Column(Integer, default=0, nullable=False)
    soft_tp = Column(Float, default=0.0, nullable=False)

    run = relationship("EvaluationRun", back_populates="class_results")

    def __repr__(self):
        return f"<ClassResult(run_id={self.run_id}, class='{self.class_name}', hota={self.hota})>"
