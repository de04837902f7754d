from .app import Studio, create_app
from .events import EventLog, JobEvent

__all__ = ["EventLog", "JobEvent", "Studio", "create_app"]
