"""Per-job append-only event logs with blocking tail reads for SSE."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field


@dataclass(frozen=True)
class JobEvent:
    sequence: int
    kind: str
    payload: dict


@dataclass
class EventLog:
    events: list[JobEvent] = field(default_factory=list)
    terminal: bool = False
    _cond: threading.Condition = field(default_factory=threading.Condition)

    def append(self, kind: str, payload: dict) -> JobEvent:
        with self._cond:
            event = JobEvent(sequence=len(self.events), kind=kind, payload=payload)
            self.events.append(event)
            if kind == "terminal":
                self.terminal = True
            self._cond.notify_all()
            return event

    def snapshot(self, from_seq: int = 0) -> list[JobEvent]:
        with self._cond:
            return self.events[from_seq:]

    def stream(self, from_seq: int = 0, poll_timeout: float = 0.5):
        """Yield events from from_seq, blocking for new ones until terminal."""
        next_seq = from_seq
        while True:
            with self._cond:
                while next_seq >= len(self.events) and not self.terminal:
                    self._cond.wait(timeout=poll_timeout)
                batch = self.events[next_seq:]
                done = self.terminal and next_seq + len(batch) >= len(self.events)
            for event in batch:
                yield event
                next_seq = event.sequence + 1
            if done and next_seq >= len(self.events):
                return
