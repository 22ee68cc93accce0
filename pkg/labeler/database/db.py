"""
Database connection and initialization
"""
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, scoped_session
from .models import Base
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))
import config

engine = create_engine(
    config.DATABASE_URL,
    echo=False,
    connect_args={"check_same_thread": False} if "sqlite" in config.DATABASE_URL else {},
    pool_pre_ping=True,
)

SessionFactory = sessionmaker(bind=engine)
SessionLocal = scoped_session(SessionFactory)


def init_db(quiet: bool = False):
    """Create all tables"""
    Base.metadata.create_all(bind=engine)
    if not quiet:
        print("[DB] Run ledger ready")


def close_db():
    SessionLocal.remove()
