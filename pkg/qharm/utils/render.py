import csv
import io
import json
import math
from enum import Enum
from typing import Iterable, List, Optional, Union

from qharm.enums.shared import OutputFormat


def format_real(value: float):
    """Reals are printed with 17 significant digits; non-finite values by name"""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _jsonable(value):
    """Recursively convert a record into JSON-safe values"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return str(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isfinite(value):
            return value
        return format_real(value)
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    return str(value)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    return str(value)


def _flatten(record: dict, prefix: str = ""):
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def render_json(record: Union[dict, list]):
    return json.dumps(_jsonable(record), indent=2) + "\n"


def render_csv(rows: Union[dict, List[dict]], columns: Optional[Iterable[str]] = None):
    """
    Render flat rows as CSV (LF newlines). Nested dicts become dotted columns.

    Args:
        rows (dict | list[dict]): One record or a list of records.
        columns (Iterable[str], optional): Fixed header; defaults to the first row's keys.
    """
    if isinstance(rows, dict):
        rows = [rows]
    flat_rows = [_flatten(row) for row in rows]
    if columns is None:
        columns = list(flat_rows[0].keys()) if flat_rows else []
    columns = list(columns)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in flat_rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def _calculate_space(title: str, character_space: int = 20):
    """Pad a title so values line up in text output"""
    return f"{title}{' ' * max(1, character_space - len(title))}"


def render_text(record: Union[dict, list], indent: int = 0):
    """Human readable 'key: value' rendering"""
    pad = " " * indent
    if isinstance(record, list):
        blocks = []
        for index, item in enumerate(record):
            if isinstance(item, dict):
                blocks.append(f"{pad}[{index}]\n" + render_text(item, indent + 2))
            else:
                blocks.append(f"{pad}- {_cell(item)}\n")
        return "".join(blocks)

    lines = []
    for key, value in record.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:\n" + render_text(value, indent + 2))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:\n" + render_text(value, indent + 2))
        else:
            lines.append(f"{pad}{_calculate_space(str(key))}: {_cell(value)}\n")
    return "".join(lines)


def render(record: Union[dict, list], output_format: OutputFormat, columns=None):
    if output_format == OutputFormat.JSON:
        return render_json(record)
    elif output_format == OutputFormat.CSV:
        return render_csv(record, columns)
    return render_text(record)
