"""
Enhanced Log Formatter for the DG/SIAC study runner

Gives every subsystem a short ASCII prefix, colors by level and appends the
label of the study row being computed so concurrent rows stay readable.
"""
import logging
import re
import sys

from core.config import get_settings
from core.context import get_run_label


class EnhancedLogFormatter(logging.Formatter):
    """Custom log formatter that adds ASCII prefixes and row labels to log messages."""

    # Color codes for terminals that support ANSI colors
    COLORS = {
        'DEBUG': '\033[36m',    # Cyan
        'INFO': '\033[32m',     # Green
        'WARNING': '\033[33m',  # Yellow
        'ERROR': '\033[31m',    # Red
        'CRITICAL': '\033[35m', # Magenta
        'RESET': '\033[0m'      # Reset
    }

    ASCII_PREFIXES = {
        'numerics.quadrature': '[QUAD]',
        'numerics.lagrange': '[LAGRANGE]',
        'dgspace.operator': '[DG]',
        'dgspace.solution': '[DG]',
        'integrators.runge_kutta': '[RK]',
        'integrators.sdg': '[SDG]',
        'integrators.sdc': '[SDC]',
        'integrators.adaptive': '[ADAPT]',
        'integrators.registry': '[REGISTRY]',
        'siac.kernel': '[SIAC]',
        'siac.filter': '[SIAC]',
        'harness.driver': '[DRIVER]',
        'harness.studies': '[STUDY]',
        'harness.reporting': '[REPORT]',
        'core.experiment_loader': '[PRESETS]',
        'core.config': '[CONFIG]',
        'core.utils': '[UTILS]',
    }

    def __init__(self, use_colors: bool = True, *args, **kwargs):
        """
        Initialize the formatter.

        Args:
            use_colors: Whether to use ANSI color codes (default: True)
        """
        super().__init__(*args, **kwargs)
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record with ASCII prefixes and the current row label."""
        service_prefix = self._get_ascii_prefix(record.name, record.levelname)
        formatted_msg = self._enhance_message(record.getMessage())

        label = get_run_label()
        if label:
            formatted_msg = f"({label}) {formatted_msg}"

        if self.use_colors:
            color = self.COLORS.get(record.levelname, '')
            reset = self.COLORS['RESET']
            return f"{service_prefix} {color}{formatted_msg}{reset}"
        return f"{service_prefix} {formatted_msg}"

    def _get_ascii_prefix(self, logger_name: str, level_name: str) -> str:
        """Get ASCII-safe prefix for Windows compatibility."""
        return self.ASCII_PREFIXES.get(logger_name, f'[{level_name}]')

    def _enhance_message(self, message: str) -> str:
        """Rewrite the most frequent messages into a compact form."""
        # Row completion: "Row done: dg_l2=... pp_l2=... rhs_evals=... seconds=..."
        if message.startswith("Row done:"):
            pattern = r"dg_l2=(\S+) pp_l2=(\S+) rhs_evals=(\d+) seconds=(\S+)"
            match = re.search(pattern, message)
            if match:
                dg, pp, evals, seconds = match.groups()
                return f"DG {dg} | filtered {pp} | {evals} rhs evals in {seconds}s"

        if "Loaded experiment presets from" in message:
            path = message.split("from ")[-1]
            return f"Presets loaded from {path}"

        if "Output directory check passed" in message:
            path = message.split(": ")[-1]
            return f"Output directory verified: {path}"

        return message


class RunLabelFilter(logging.Filter):
    """Copies the current row label onto every record as `run_label`."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_label = get_run_label() or '-'
        return True


def configure_file_logging(logger_name: str = None) -> bool:
    """
    Attach a DEBUG file handler unless DGSIAC_FILE_LOGGING is false.

    Each line carries the thread and the row label of the record.

    Returns:
        bool: True if the handler was attached
    """
    settings = get_settings()
    target = logging.getLogger(logger_name)

    if not settings.file_logging:
        target.debug("File logging disabled by DGSIAC_FILE_LOGGING")
        return False

    try:
        handler = logging.FileHandler(settings.log_file, mode='a', encoding='utf-8')
    except OSError as e:
        sys.stderr.write(f"CRITICAL: cannot open log file '{settings.log_file}': {e}\n")
        return False

    handler.setLevel(logging.DEBUG)
    handler.addFilter(RunLabelFilter())
    handler.setFormatter(logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(threadName)s [%(run_label)s] '
        '%(funcName)s:%(lineno)d - %(message)s'
    ))
    target.addHandler(handler)
    target.debug(f"File logging to {settings.log_file}")
    return True
