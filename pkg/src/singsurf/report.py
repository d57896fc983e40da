"""Deterministic report rendering and delimited output.

Reports are flat "key = value" listings with sorted keys; floats print
with 17 significant digits so equal runs produce byte-identical text.
CSV tables use the shortest decimal that round-trips exactly, comma
separators, and LF line endings.
"""

import json
import math

import numpy as np

__all__ = [
    "format_float",
    "shortest_float",
    "flatten",
    "render_report",
    "report_json",
    "csv_text",
]


def format_float(x):
    """Fixed 17-significant-digit rendering used in text reports."""
    return f"{float(x):.17g}"


def shortest_float(x):
    """Shortest decimal string that parses back to the same float."""
    return repr(float(x))


def _scalar(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot render {type(value).__name__} in a report")


def _is_scalar_sequence(value):
    return (isinstance(value, (list, tuple))
            and all(isinstance(v, (bool, int, float, np.integer, np.floating,
                                   np.bool_)) for v in value))


def flatten(mapping, prefix=""):
    """Flatten nested dicts to dotted keys; arrays are left to CSV."""
    out = {}
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, name + "."))
        elif isinstance(value, np.ndarray):
            continue
        elif _is_scalar_sequence(value):
            out[name] = "[" + ", ".join(_scalar(v) for v in value) + "]"
        else:
            out[name] = _scalar(value)
    return out


def render_report(command, mapping, digest=None, footer=None):
    """Sorted-key text report; identical inputs yield identical bytes."""
    flat = flatten(mapping)
    flat["command"] = command
    if digest is not None:
        flat["input_sha256"] = digest
    lines = [f"{key} = {flat[key]}" for key in sorted(flat)]
    if footer:
        lines.append(footer)
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return None if math.isnan(v) else v
    return value


def report_json(command, mapping, digest=None):
    """Machine-readable variant of the same report."""
    doc = dict(mapping)
    doc["command"] = command
    if digest is not None:
        doc["input_sha256"] = digest
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return shortest_float(value)
    text = str(value)
    if "," in text or "\n" in text:
        raise ValueError("CSV cells must not contain separators")
    return text


def csv_text(header, rows):
    """Comma-separated table, LF endings, round-trip-exact floats."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"
