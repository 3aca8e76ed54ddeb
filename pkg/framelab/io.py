"""
Frame files and command-line vectors.

A frame file is a JSON object::

    {"n": 3, "backend": "exact", "vectors": [[1, "1/2", 0.25], ...]}

Entries are integers, "p/q" strings or decimals. Decimals are read from
their text, so 0.1 is exactly 1/10 on the exact backend.
"""

import hashlib
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Union

from .errors import FrameFileError
from .frames import Frame
from .linalg import EXACT, EXACT_BACKEND, FLOAT, Backend, Vector

PathLike = Union[str, Path]


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def parse_scalar(value, backend: Backend):
    """
    Read one frame-file or command-line entry

    Raises:
        FrameFileError: For booleans, nulls, zero denominators, text that
                        is not a number and values that are not finite
                        on the backend.
    """
    if isinstance(value, bool) or value is None:
        raise FrameFileError(f"{value!r} is not a number")
    if isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FrameFileError(f"cannot read {value!r}: {exc}") from exc
    if not isinstance(value, (int, Fraction, float)):
        raise FrameFileError(f"{value!r} is not a number")
    if isinstance(value, float) and not math.isfinite(value):
        raise FrameFileError(f"{value!r} is not finite")
    try:
        scalar = backend.coerce(value)
    except OverflowError as exc:
        raise FrameFileError(
            f"{value} is out of range for the {backend.name} backend"
        ) from exc
    if not backend.exact and not math.isfinite(scalar):
        raise FrameFileError(
            f"{value} is out of range for the {backend.name} backend"
        )
    return scalar


def parse_vector(text: str, backend: Backend = EXACT_BACKEND) -> Vector:
    """
    Parse a comma-separated vector such as "1,-2/3,0.5"
    """
    parts = text.split(",")
    if not text.strip() or any(not p.strip() for p in parts):
        raise FrameFileError(f"malformed vector {text!r}")
    return Vector(tuple(parse_scalar(p, backend) for p in parts), backend)


def frame_from_dict(data, tolerance: float = None) -> Frame:
    """
    Validate a decoded frame file and build the frame

    Raises:
        FrameFileError: When a field is missing or inconsistent.
    """
    if not isinstance(data, dict):
        raise FrameFileError("a frame file holds a JSON object")
    n, vectors = data.get("n"), data.get("vectors")
    name = data.get("backend", EXACT)
    if name not in (EXACT, FLOAT):
        raise FrameFileError(f"unknown backend {name!r}")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FrameFileError(f"n must be a positive integer, got {n!r}")
    if not isinstance(vectors, list) or not vectors:
        raise FrameFileError("vectors must be a nonempty list of rows")
    backend = (
        Backend(name) if tolerance is None else Backend(name, tolerance)
    )
    rows = []
    for k, row in enumerate(vectors):
        if not isinstance(row, list) or len(row) != n:
            raise FrameFileError(f"row {k + 1} does not have {n} entries")
        entries = tuple(parse_scalar(v, backend) for v in row)
        rows.append(Vector(entries, backend))
    return Frame(tuple(rows))


def loads_frame(text: str, tolerance: float = None) -> Frame:
    try:
        # Decimals stay text until the backend reads them.
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise FrameFileError(f"invalid JSON: {exc}") from exc
    return frame_from_dict(data, tolerance)


def read_frame(path: PathLike, tolerance: float = None) -> tuple:
    """
    Read a frame file.

    Returns (tuple): (frame, digest of the raw bytes).

    Raises:
        FrameFileError: When the file is missing or malformed.
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise FrameFileError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FrameFileError(f"{path} is not UTF-8 text") from exc
    return loads_frame(text, tolerance), digest(raw)


def format_entry(value):
    """
    JSON form of a scalar: int when integral, "p/q" for other rationals
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def vector_to_list(vector: Vector) -> list:
    return [format_entry(v) for v in vector]


def frame_to_dict(frame: Frame, **extra) -> dict:
    data = dict(extra)
    data.update(
        {
            "n": frame.n,
            "backend": frame.backend.name,
            "vectors": [vector_to_list(v) for v in frame],
        }
    )
    return data


def dumps_frame(frame: Frame, **extra) -> str:
    return json.dumps(frame_to_dict(frame, **extra), indent=2) + "\n"


def write_frame(frame: Frame, path: PathLike, **extra) -> Path:
    """
    Write a frame file; extra keyword fields (name, description) are kept
    alongside the frame
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_frame(frame, **extra), encoding="utf-8")
    return path
