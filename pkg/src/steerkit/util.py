"""Small helpers shared by the command line layer."""
from __future__ import annotations

import math
import os
import re

_PI_RE = re.compile(r"^([+-]?\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?$")


def parse_number(text) -> float:
    """Parse a float literal or a pi fraction: 'pi/6', '2*pi/3', '-0.5pi'."""
    if isinstance(text, (int, float)):
        return float(text)
    s = text.replace(" ", "")
    if "pi" not in s:
        return float(s)
    m = _PI_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse number {text!r}")
    coef_txt = m.group(1)
    if coef_txt in ("", "+"):
        coef = 1.0
    elif coef_txt == "-":
        coef = -1.0
    else:
        coef = float(coef_txt)
    val = coef * math.pi
    if m.group(2):
        val /= float(m.group(2))
    return val


def worker_count() -> int:
    """Worker cap from STEERKIT_THREADS, default the machine's cpu count."""
    env = os.environ.get("STEERKIT_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"STEERKIT_THREADS must be positive, got {env!r}")
        return n
    return os.cpu_count() or 1


def fmt12(value) -> str:
    """Fixed 12-significant-digit cell formatting for CSV output."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)
