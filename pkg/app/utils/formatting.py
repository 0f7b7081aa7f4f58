from typing import Any, Dict

from colorama import Fore, Style

BOX_WIDTH = 66


def progress_bar(progress: float, width: int = 40, label: str = "") -> str:
    """Render a fixed-width text bar for a fraction in [0, 1]."""
    progress = min(max(progress, 0.0), 1.0)
    filled = int(width * progress)
    bar = '█' * filled + '░' * (width - filled)
    suffix = f" {label}" if label else ""
    return f'[{bar}] {int(progress * 100)}%{suffix}'


def format_number(num: float) -> str:
    """Compact sample-count rendering: 2500000 -> '2.50M'."""
    for scale, unit in ((1e9, "B"), (1e6, "M"), (1e3, "K")):
        if abs(num) >= scale:
            return f"{num / scale:.2f}{unit}"
    return f"{num:g}"


def format_time(seconds: float) -> str:
    if seconds < 60:
        return f"{seconds:.1f}s"
    minutes, secs = divmod(int(seconds), 60)
    hours, minutes = divmod(minutes, 60)
    return f"{hours:02d}:{minutes:02d}:{secs:02d}"


def _box_line(text: str) -> str:
    return f"    ║ {text[:BOX_WIDTH - 2]:<{BOX_WIDTH - 2}} ║"


def format_header(title: str, config_items: Dict[str, Any]) -> str:
    """Boxed run banner listing the configuration items of an experiment."""
    rule = "═" * BOX_WIDTH
    lines = ["", f"    ╔{rule}╗", _box_line(title.center(BOX_WIDTH - 2)), _box_line("[Run Configuration]")]
    lines.extend(_box_line(f"  - {key}: {value}") for key, value in config_items.items())
    lines.append(f"    ╚{rule}╝")
    return "\n".join(lines) + "\n"


def print_header(title: str, config_items: Dict[str, Any]) -> None:
    print(Fore.GREEN + Style.BRIGHT + format_header(title, config_items) + Style.RESET_ALL)
