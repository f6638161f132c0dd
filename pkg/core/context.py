# core/context.py
import contextvars
from contextlib import contextmanager
from typing import Iterator, Optional

# Label of the study row being computed (e.g. "p=3 N=40"); shown in log lines.
_run_label = contextvars.ContextVar("run_label", default=None)


def get_run_label() -> Optional[str]:
    """Retrieve the label of the row running in the current context."""
    return _run_label.get()


@contextmanager
def run_label(label: str) -> Iterator[None]:
    """Scope a row label to a block; restores the previous label on exit."""
    token = _run_label.set(label)
    try:
        yield
    finally:
        _run_label.reset(token)
