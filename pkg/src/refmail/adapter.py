"""Line-delimited JSON bridge to out-of-process models.

Every request is one JSON object on one line carrying an ``"id"``; the peer
answers with one JSON object per line echoing that id.  The transport is
either a child process (stdin/stdout pipes) or a stream socket.  Responses
that arrive after their deadline are discarded when their id no longer
matches the request in flight.
"""

from __future__ import annotations

import itertools
import json
import logging
import queue
import shlex
import socket
import subprocess
import threading
import time

__all__ = ["AdapterError", "AdapterTimeout", "AdapterProtocolError", "JsonLinesClient"]

logger = logging.getLogger(__name__)

DEFAULT_DEADLINE = 0.5


class AdapterError(RuntimeError):
    """Base class for adapter failures."""


class AdapterTimeout(AdapterError):
    pass


class AdapterProtocolError(AdapterError):
    pass


class JsonLinesClient:
    """Synchronized request/response client over a line-oriented byte stream.

    Use :meth:`spawn` for a child process or :meth:`connect` for a socket
    (``"unix:/path"`` or ``"host:port"``).  A single client may be shared by
    several threads; requests are serialized.
    """

    def __init__(self, reader, writer, *, deadline=DEFAULT_DEADLINE, closer=None, name="adapter"):
        self._reader = reader
        self._writer = writer
        self._closer = closer
        self.deadline = deadline
        self.name = name
        self._lock = threading.Lock()
        self._lines: queue.Queue = queue.Queue()
        self._ids = itertools.count()
        self._closed = False
        self._pump = threading.Thread(target=self._read_loop, daemon=True)
        self._pump.start()

    @classmethod
    def spawn(cls, command, **kw) -> "JsonLinesClient":
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        proc = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, bufsize=0)

        def close():
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=1)
            except subprocess.TimeoutExpired:
                proc.kill()

        kw.setdefault("name", argv[0])
        return cls(proc.stdout, proc.stdin, closer=close, **kw)

    @classmethod
    def connect(cls, endpoint: str, **kw) -> "JsonLinesClient":
        if endpoint.startswith("unix:"):
            sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
            sock.connect(endpoint[5:])
        else:
            host, _, port = endpoint.rpartition(":")
            sock = socket.create_connection((host or "127.0.0.1", int(port)))
        rfile = sock.makefile("rb")
        wfile = sock.makefile("wb", buffering=0)

        def close():
            for f in (rfile, wfile):
                try:
                    f.close()
                except OSError:
                    pass
            sock.close()

        kw.setdefault("name", endpoint)
        return cls(rfile, wfile, closer=close, **kw)

    @classmethod
    def from_endpoint(cls, endpoint: str, **kw) -> "JsonLinesClient":
        """``cmd:<command line>`` spawns a process; anything else is a socket."""
        if endpoint.startswith("cmd:"):
            return cls.spawn(endpoint[4:], **kw)
        return cls.connect(endpoint, **kw)

    def _read_loop(self):
        try:
            for line in iter(self._reader.readline, b""):
                self._lines.put(line)
        except (OSError, ValueError):
            pass
        self._lines.put(None)

    def request(self, payload: dict, deadline: float | None = None) -> dict:
        """Send ``payload`` (an id is added) and wait for the matching reply."""
        deadline = self.deadline if deadline is None else deadline
        with self._lock:
            if self._closed:
                raise AdapterError(f"{self.name}: client closed")
            req_id = f"{next(self._ids)}"
            msg = dict(payload, id=req_id)
            try:
                self._writer.write(json.dumps(msg, ensure_ascii=False).encode("utf-8") + b"\n")
                self._writer.flush()
            except (OSError, ValueError) as exc:
                raise AdapterError(f"{self.name}: write failed: {exc}") from exc
            end = time.monotonic() + deadline
            while True:
                remaining = end - time.monotonic()
                if remaining <= 0:
                    raise AdapterTimeout(f"{self.name}: no reply within {deadline:.3f}s")
                try:
                    line = self._lines.get(timeout=remaining)
                except queue.Empty:
                    raise AdapterTimeout(f"{self.name}: no reply within {deadline:.3f}s") from None
                if line is None:
                    self._closed = True
                    raise AdapterError(f"{self.name}: peer closed the stream")
                try:
                    reply = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise AdapterProtocolError(f"{self.name}: malformed reply line") from exc
                if not isinstance(reply, dict):
                    raise AdapterProtocolError(f"{self.name}: reply is not an object")
                if str(reply.get("id")) != req_id:
                    logger.debug("%s: dropping stale reply %r", self.name, reply.get("id"))
                    continue
                return reply

    def close(self):
        with self._lock:
            self._closed = True
            if self._closer is not None:
                self._closer()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
