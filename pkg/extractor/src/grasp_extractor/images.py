"""Binary PPM (P6) / PGM (P5) decoding, maxval 255.

Header tokens are whitespace-separated; ``#`` starts a comment running to
end of line. Exactly one whitespace byte separates the maxval token from
the pixel payload. Grayscale images come back replicated to three
channels, since every backbone expects RGB.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import UndecodableImageError


def _tokens(blob: bytes, count: int) -> tuple[list[bytes], int]:
    """First `count` header tokens and the offset just past them."""
    out: list[bytes] = []
    pos = 0
    while len(out) < count:
        if pos >= len(blob):
            raise UndecodableImageError("truncated header")
        c = blob[pos : pos + 1]
        if c in b" \t\r\n":
            pos += 1
        elif c == b"#":
            nl = blob.find(b"\n", pos)
            if nl < 0:
                raise UndecodableImageError("unterminated header comment")
            pos = nl + 1
        else:
            end = pos
            while end < len(blob) and blob[end : end + 1] not in b" \t\r\n#":
                end += 1
            out.append(blob[pos:end])
            pos = end
    return out, pos


def read_image(path: str | Path) -> np.ndarray:
    """Decode to a (h, w, 3) uint8 array."""
    blob = Path(path).read_bytes()
    magic, w, h, maxval, offset = _header(path, blob)
    channels = 3 if magic == b"P6" else 1
    need = w * h * channels
    payload = blob[offset : offset + need]
    if len(payload) != need:
        raise UndecodableImageError(
            f"{path}: {len(payload)} payload bytes, need {need}"
        )
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(h, w, channels)
    if channels == 1:
        arr = np.repeat(arr, 3, axis=2)
    return arr.copy()


def _header(path, blob: bytes) -> tuple[bytes, int, int, int, int]:
    try:
        (magic, ws, hs, ms), pos = _tokens(blob, 4)
    except UndecodableImageError as exc:
        raise UndecodableImageError(f"{path}: {exc}") from None
    if magic not in (b"P5", b"P6"):
        raise UndecodableImageError(f"{path}: magic {magic!r} is not P5/P6")
    try:
        w, h, maxval = int(ws), int(hs), int(ms)
    except ValueError:
        raise UndecodableImageError(f"{path}: non-numeric header fields") from None
    if w < 1 or h < 1:
        raise UndecodableImageError(f"{path}: extent {w}x{h}")
    if maxval != 255:
        raise UndecodableImageError(f"{path}: maxval {maxval}, only 255 handled")
    if pos >= len(blob) or blob[pos : pos + 1] not in b" \t\r\n":
        raise UndecodableImageError(f"{path}: missing payload separator")
    return magic, w, h, maxval, pos + 1
