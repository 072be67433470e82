"""Binary netpbm I/O: P6 (PPM, color) and P5 (PGM, grayscale), maxval 255.

Writers emit a canonical header (`P6\\n<w> <h>\\n255\\n`), so write -> read ->
write round-trips are byte-identical. Readers accept standard header comments
and whitespace.
"""
from __future__ import annotations

import os
from pathlib import Path
from typing import Union

import numpy as np

from .imaging import BinaryImage, Frame, GrayImage

_WHITESPACE = b" \t\r\n\x0b\x0c"


def _read_header(data: bytes, magic: bytes) -> tuple[int, int, int]:
    """Return (width, height, offset of raster start). Maxval must be 255."""
    if not data.startswith(magic):
        raise ValueError(f"not a {magic.decode()} file")
    pos = len(magic)
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1] in _WHITESPACE:
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and data[pos : pos + 1] not in _WHITESPACE:
            pos += 1
        if start == pos:
            raise ValueError("truncated netpbm header")
        fields.append(int(data[start:pos]))
    if pos >= len(data):
        raise ValueError("missing raster data")
    pos += 1  # exactly one whitespace byte separates header and raster
    width, height, maxval = fields
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval} (only 255)")
    if width <= 0 or height <= 0:
        raise ValueError(f"bad dimensions {width}x{height}")
    return width, height, pos


def write_ppm(frame: Frame) -> bytes:
    """Serialize a frame as binary PPM; the alpha channel is dropped."""
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels[:, :, :3].tobytes()


def read_ppm(data: bytes) -> Frame:
    """Parse a binary PPM into a frame with alpha set to 255."""
    width, height, offset = _read_header(data, b"P6")
    expected = width * height * 3
    raster = data[offset:]
    if len(raster) != expected:
        raise ValueError(f"raster is {len(raster)} bytes, expected {expected}")
    rgb = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    rgba = np.concatenate([rgb, np.full((height, width, 1), 255, dtype=np.uint8)], axis=2)
    return Frame(width=width, height=height, pixels=rgba)


def write_pgm(img: Union[GrayImage, BinaryImage]) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.values.tobytes()


def read_pgm(data: bytes) -> GrayImage:
    width, height, offset = _read_header(data, b"P5")
    expected = width * height
    raster = data[offset:]
    if len(raster) != expected:
        raise ValueError(f"raster is {len(raster)} bytes, expected {expected}")
    values = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(width=width, height=height, values=values)


def save_ppm(frame: Frame, path: os.PathLike) -> None:
    Path(path).write_bytes(write_ppm(frame))


def load_ppm(path: os.PathLike) -> Frame:
    return read_ppm(Path(path).read_bytes())


def save_pgm(img: Union[GrayImage, BinaryImage], path: os.PathLike) -> None:
    Path(path).write_bytes(write_pgm(img))


def load_pgm(path: os.PathLike) -> GrayImage:
    return read_pgm(Path(path).read_bytes())


def load_frame(path: os.PathLike) -> Frame:
    """Load a color frame from .ppm, or .png when Pillow is installed."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ppm":
        return load_ppm(path)
    if suffix == ".png":
        try:
            from PIL import Image
        except ImportError as exc:
            raise ValueError("PNG input needs the optional Pillow dependency") from exc
        with Image.open(path) as img:
            rgba = np.asarray(img.convert("RGBA"))
        return Frame.from_array(rgba)
    raise ValueError(f"unsupported input format {suffix!r} (use .ppm or .png)")
