"""Number formatting shared by CSV/JSON writers."""

from __future__ import annotations

import math

INF = math.inf


def fmt(x) -> str:
    """12 significant digits; infinities as 'inf'; None as an empty cell."""
    if x is None:
        return ""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return f"{x:.12g}"


def json_number(x):
    """JSON-safe value: rounded floats, 'inf' strings for infinities."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")
