"""Binary on-disk cache for materialized sequence prefixes.

Layout (all little-endian):

    magic   4 bytes  b"TMW1"
    version u16      format version, currently 1
    width   u8       bytes per symbol (1, 2 or 4)
    flags   u8       reserved, 0
    m       u32      alphabet modulus
    length  u64      number of symbols
    payload length * width bytes of packed symbols

The CLI points at a cache directory via the TMCF_CACHE_DIR environment
variable; library users can call read/write directly.
"""
from __future__ import annotations

import os
import struct
import sys
from pathlib import Path
from typing import Sequence

MAGIC = b"TMW1"
VERSION = 1
ENV_CACHE_DIR = "TMCF_CACHE_DIR"

_HEADER = struct.Struct("<4sHBBIQ")


class CacheFormatError(ValueError):
    """Raised for unreadable or mismatched cache files."""


def _width_for(m: int) -> int:
    if m <= 1 << 8:
        return 1
    if m <= 1 << 16:
        return 2
    return 4


def _pack(symbols: Sequence[int], width: int) -> bytes:
    if width == 1:
        return bytes(symbols)
    import array

    code = {2: "H", 4: "I"}[width]
    arr = array.array(code, symbols)
    if sys.byteorder == "big":
        arr.byteswap()
    return arr.tobytes()


def _unpack(payload: bytes, width: int) -> list[int]:
    if width == 1:
        return list(payload)
    import array

    code = {2: "H", 4: "I"}[width]
    arr = array.array(code)
    arr.frombytes(payload)
    if sys.byteorder == "big":
        arr.byteswap()
    return arr.tolist()


def write_prefix(path: str | Path, m: int, symbols: Sequence[int]) -> None:
    """Write a materialized prefix; overwrites atomically via a temp file."""
    path = Path(path)
    width = _width_for(m)
    header = _HEADER.pack(MAGIC, VERSION, width, 0, m, len(symbols))
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(header + _pack(symbols, width))
    os.replace(tmp, path)


def read_prefix(path: str | Path) -> tuple[int, list[int]]:
    """Read (m, symbols) back; raises CacheFormatError on any mismatch."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, width, _flags, m, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if width not in (1, 2, 4):
        raise CacheFormatError(f"{path}: bad symbol width {width}")
    payload = data[_HEADER.size:]
    if len(payload) != length * width:
        raise CacheFormatError(
            f"{path}: payload is {len(payload)} bytes, header promises {length * width}"
        )
    return m, _unpack(payload, width)


def cache_path(cache_dir: str | Path, m: int, construction: str = "digit_sum") -> Path:
    return Path(cache_dir) / f"tm_m{m}_{construction}.tmw"


def load_cached_prefix(m: int, length: int, construction: str = "digit_sum") -> list[int] | None:
    """Return a cached prefix of at least `length` symbols, if one exists."""
    cache_dir = os.environ.get(ENV_CACHE_DIR)
    if not cache_dir:
        return None
    path = cache_path(cache_dir, m, construction)
    if not path.is_file():
        return None
    try:
        stored_m, symbols = read_prefix(path)
    except (CacheFormatError, OSError):
        return None
    if stored_m != m or len(symbols) < length:
        return None
    return symbols[:length]


def store_prefix(m: int, symbols: Sequence[int], construction: str = "digit_sum") -> bool:
    """Persist a prefix when caching is enabled and it extends what is stored."""
    cache_dir = os.environ.get(ENV_CACHE_DIR)
    if not cache_dir:
        return False
    directory = Path(cache_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(directory, m, construction)
    if path.is_file():
        try:
            stored_m, existing = read_prefix(path)
            if stored_m == m and len(existing) >= len(symbols):
                return False
        except (CacheFormatError, OSError):
            pass
    write_prefix(path, m, symbols)
    return True
