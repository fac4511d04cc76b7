from datetime import datetime
from typing import Optional

from sqlalchemy import Boolean, DateTime, Integer, String, Text, UniqueConstraint
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    pass


class CheckLog(Base):
    """Last classification of a .plrel file, keyed by path and guarded by content hash."""

    __tablename__ = "check_log"
    __table_args__ = (
        UniqueConstraint("path", name="check_log_path_uniq"),
    )

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    path: Mapped[str] = mapped_column(String(1024), nullable=False)
    content_hash: Mapped[str] = mapped_column(String(64), nullable=False)
    checked_at: Mapped[datetime] = mapped_column(DateTime, nullable=False)
    domain_full: Mapped[bool] = mapped_column(Boolean, nullable=False)
    surjective: Mapped[bool] = mapped_column(Boolean, nullable=False)
    graph_connected: Mapped[bool] = mapped_column(Boolean, nullable=False)
    interior_empty: Mapped[bool] = mapped_column(Boolean, nullable=False)
    slices_connected: Mapped[Optional[bool]] = mapped_column(Boolean)
    weakly_continuous: Mapped[Optional[bool]] = mapped_column(Boolean)
    ivp: Mapped[Optional[bool]] = mapped_column(Boolean)
    weak_ivp: Mapped[Optional[bool]] = mapped_column(Boolean)
    light: Mapped[Optional[bool]] = mapped_column(Boolean)
    almost_nonfissile: Mapped[Optional[bool]] = mapped_column(Boolean)
    report_json: Mapped[str] = mapped_column(Text, nullable=False)

    def __repr__(self) -> str:
        return f"<CheckLog(path='{self.path}', ivp={self.ivp})>"
