import logging
import sys

from colorama import Fore, Style, init as colorama_init

_TAGS = {
    logging.DEBUG: (Fore.BLUE, "[.]"),
    logging.INFO: (Fore.CYAN, "[*]"),
    logging.WARNING: (Fore.YELLOW, "[WARN]"),
    logging.ERROR: (Fore.RED, "[!]"),
    logging.CRITICAL: (Fore.RED + Style.BRIGHT, "[!]"),
}

SUCCESS = 25
logging.addLevelName(SUCCESS, "SUCCESS")
_TAGS[SUCCESS] = (Fore.GREEN, "[+]")


class ColorFormatter(logging.Formatter):
    """Formatter that renders records with the console tags used by the CLI."""

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        color, tag = _TAGS.get(record.levelno, (Fore.WHITE, "[?]"))
        message = record.getMessage()
        if record.exc_info:
            message += "\n" + self.formatException(record.exc_info)
        if not self.use_color:
            return f"{tag} {message}"
        return f"{color}{tag} {message}{Style.RESET_ALL}"


def configure_logging(verbose: bool = False, use_color: bool = True) -> None:
    """Install the colored handler on the package root logger.

    Args:
        verbose (bool): Emit DEBUG records when True. Defaults to False.
        use_color (bool): Wrap records in ANSI colors. Defaults to True.
    """
    colorama_init()
    root = logging.getLogger("app")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ColorFormatter(use_color))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False


def get_logger(name: str) -> logging.Logger:
    """Return a logger below the ``app`` namespace."""
    if not name.startswith("app"):
        name = f"app.{name}"
    return logging.getLogger(name)


def success(logger: logging.Logger, message: str) -> None:
    """Log a completion message with the ``[+]`` tag."""
    logger.log(SUCCESS, message)
