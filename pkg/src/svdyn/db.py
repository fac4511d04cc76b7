from datetime import datetime
from typing import Optional

from sqlalchemy import create_engine, select
from sqlalchemy.dialects.sqlite import insert
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session

from svdyn.classify import PROPERTY_NAMES, PropertyReport
from svdyn.config import DATABASE_URL
from svdyn.models import CheckLog


def get_engine(url: str | None = None) -> Engine:
    return create_engine(url or DATABASE_URL)


def get_check_log(session: Session, path: str) -> Optional[CheckLog]:
    return session.execute(select(CheckLog).where(CheckLog.path == path)).scalar_one_or_none()


def is_fresh(session: Session, path: str, content_hash: str) -> bool:
    """True when the stored row for ``path`` was computed from the same content."""
    row = get_check_log(session, path)
    return row is not None and row.content_hash == content_hash


def upsert_check_log(
    session: Session,
    path: str,
    content_hash: str,
    report: PropertyReport,
    report_json: str,
) -> None:
    """Insert or refresh the check_log row for one file."""
    values = {name: report.value(name) for name in PROPERTY_NAMES}
    values.update(content_hash=content_hash, checked_at=datetime.now(), report_json=report_json)
    stmt = insert(CheckLog).values(path=path, **values).on_conflict_do_update(
        index_elements=["path"],
        set_=values,
    )
    session.execute(stmt)
