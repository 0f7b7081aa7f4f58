import logging

import pytest

from app.utils.errors import (ConfigError, ConvergenceError, CoverageError, DickeError,
                              NumericalError, ShellEdgeError, TruncationError)
from app.utils.formatting import format_header, format_number, format_time, progress_bar
from app.utils.logger import SUCCESS, ColorFormatter
from app.utils.parallel import ordered_map


def test_exit_codes_follow_hierarchy():
    assert DickeError.exit_code == 1
    assert ConfigError.exit_code == 2
    assert TruncationError.exit_code == CoverageError.exit_code == ConvergenceError.exit_code == 3
    assert ShellEdgeError.exit_code == NumericalError.exit_code == 4
    assert issubclass(ShellEdgeError, DickeError)


def test_formatting_helpers():
    assert progress_bar(0.5, width=10) == "[█████░░░░░] 50%"
    assert progress_bar(1.7, width=4).endswith("100%")
    assert format_time(3725) == "01:02:05"
    assert format_time(12.34) == "12.3s"
    assert format_number(2_500_000) == "2.50M"
    assert format_number(12) == "12"
    assert "- Seed: 3" in format_header("Run", {"Seed": 3})
    assert progress_bar(0.25, width=4, label="shell") == "[█░░░] 25% shell"


def test_color_formatter_tags():
    record = logging.LogRecord("app.test", SUCCESS, __file__, 1, "done", None, None)
    assert ColorFormatter(use_color=False).format(record) == "[+] done"
    record = logging.LogRecord("app.test", logging.WARNING, __file__, 1, "careful", None, None)
    assert ColorFormatter(use_color=False).format(record) == "[WARN] careful"


@pytest.mark.parametrize("workers", [1, 4])
def test_ordered_map_keeps_input_order(workers):
    assert ordered_map(lambda x: x * x, range(20), workers) == [x * x for x in range(20)]
