"""Message sources: single .eml files, directories, mbox files, maildirs, streams."""

from __future__ import annotations

import mailbox
import os
from pathlib import Path
from typing import BinaryIO, Iterator

from .message import RawEmail

__all__ = ["FORMATS", "detect_format", "iter_messages", "iter_mbox_stream", "ReadFailure", "Oversize"]

FORMATS = ("eml", "mbox", "maildir", "stream")


class ReadFailure:
    """Placeholder yielded for a message that could not be read from disk."""

    __slots__ = ("source_id", "reason")

    def __init__(self, source_id: str, reason: str):
        self.source_id = source_id
        self.reason = reason

    def __repr__(self):
        return f"ReadFailure({self.source_id!r}, {self.reason!r})"


class Oversize:
    """Placeholder for a message larger than the configured limit; its bytes are not kept."""

    __slots__ = ("source_id", "size", "limit")

    def __init__(self, source_id: str, size: int, limit: int):
        self.source_id = source_id
        self.size = size
        self.limit = limit

    def __repr__(self):
        return f"Oversize({self.source_id!r}, {self.size}, limit={self.limit})"


def detect_format(path) -> str:
    if path in (None, "-"):
        return "stream"
    p = Path(path)
    if p.is_dir():
        if (p / "cur").is_dir() or (p / "new").is_dir():
            return "maildir"
        return "eml"
    try:
        with open(p, "rb") as fh:
            head = fh.read(5)
    except OSError:
        return "eml"
    if p.suffix.lower() == ".mbox" or head == b"From ":
        return "mbox"
    return "eml"


def _read_file(path: Path, source_id: str, max_bytes: int | None = None):
    try:
        if max_bytes is not None:
            size = path.stat().st_size
            if size > max_bytes:
                return Oversize(source_id, size, max_bytes)
        return RawEmail(path.read_bytes(), source_id)
    except OSError as exc:
        return ReadFailure(source_id, f"unreadable: {exc.strerror or exc}")


def _iter_eml(path: Path, max_bytes=None):
    if path.is_dir():
        for child in sorted(path.rglob("*")):
            if child.is_file() and not child.name.startswith("."):
                yield _read_file(child, str(child), max_bytes)
    else:
        yield _read_file(path, str(path), max_bytes)


def _iter_maildir(path: Path, max_bytes=None):
    for sub in ("new", "cur"):
        folder = path / sub
        if not folder.is_dir():
            continue
        for name in sorted(os.listdir(folder)):
            if name.startswith("."):
                continue
            yield _read_file(folder / name, f"{sub}/{name}", max_bytes)


def _iter_mbox(path: Path, max_bytes=None):
    try:
        box = mailbox.mbox(str(path), create=False)
        keys = list(box.keys())
    except (OSError, mailbox.Error) as exc:
        yield ReadFailure(str(path), f"unreadable mbox: {exc}")
        return
    for i, key in enumerate(keys):
        try:
            data = box.get_bytes(key)
            if max_bytes is not None and len(data) > max_bytes:
                yield Oversize(f"{path}#{i}", len(data), max_bytes)
                continue
            yield RawEmail(data, f"{path}#{i}")
        except (OSError, KeyError) as exc:
            yield ReadFailure(f"{path}#{i}", f"unreadable: {exc}")
    box.close()


def iter_mbox_stream(stream: BinaryIO, max_bytes: int | None = None) -> Iterator[RawEmail]:
    """Incrementally split an mbox-formatted byte stream on ``From `` separator lines.

    Holds at most one message in memory.  Messages longer than ``max_bytes``
    are dropped while reading and replaced by an :class:`Oversize` marker.
    """
    buf: list[bytes] = []
    size = 0
    oversize = False
    index = 0
    prev_blank = True

    def flush():
        nonlocal buf, size, oversize, index
        data = b"".join(buf)
        sid = f"stream#{index}"
        msg = Oversize(sid, size, max_bytes) if oversize else RawEmail(data, sid)
        buf, size, oversize = [], 0, False
        index += 1
        return msg

    started = False
    for line in iter(stream.readline, b""):
        if line.startswith(b"From ") and prev_blank:
            if started:
                yield flush()
            started = True
            prev_blank = False
            continue
        if not started:
            started = True
        prev_blank = line in (b"\n", b"\r\n")
        if line.startswith(b">From "):
            line = line[1:]
        size += len(line)
        if oversize:
            continue
        if max_bytes is not None and size > max_bytes:
            oversize = True
            buf = []
            continue
        buf.append(line)
    if started and (buf or oversize):
        yield flush()


def iter_messages(path, fmt: str | None = None, stream: BinaryIO | None = None,
                  max_bytes: int | None = None):
    """Yield :class:`RawEmail` (or :class:`ReadFailure` / :class:`Oversize`) in a deterministic order."""
    fmt = fmt or detect_format(path)
    if fmt == "stream":
        if stream is None:
            import sys
            stream = sys.stdin.buffer
        yield from iter_mbox_stream(stream, max_bytes)
        return
    p = Path(path)
    if not p.exists():
        yield ReadFailure(str(p), "no such file or directory")
        return
    if fmt == "maildir":
        yield from _iter_maildir(p, max_bytes)
    elif fmt == "mbox":
        yield from _iter_mbox(p, max_bytes)
    elif fmt == "eml":
        yield from _iter_eml(p, max_bytes)
    else:
        raise ValueError(f"unknown input format {fmt!r}; expected one of {FORMATS}")
