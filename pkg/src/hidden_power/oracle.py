"""The power oracle x -> f(x)^e, locally or across a JSON-lines wire.

Wire protocol (one JSON object per line, residues as decimal strings)::

    server -> {"p": "13", "e": "3"}           on connect
    client -> {"x": "2"}
    server -> {"y": "1"}  |  {"error": "out_of_domain"}  |  {"error": "parse"}

Every oracle counts the queries it has answered; the counters are what the
experiments report as query complexity, so algorithms must cache values
themselves if they want to reuse them.
"""

from __future__ import annotations

import json
import logging
import socket
import socketserver
import subprocess
import sys
import threading
from typing import IO, Iterable

from .errors import OutOfDomain, ProtocolError
from .ff import FieldCtx
from .poly import MonicPoly, eval_poly

log = logging.getLogger(__name__)


class PowerOracle:
    """Black box answering ``query(x) = f(x)^e`` for residues x of F_p."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self._count = 0
        self._count_lock = threading.Lock()

    @property
    def query_count(self) -> int:
        return self._count

    def query(self, x: int) -> int:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.ctx.p:
            raise OutOfDomain(f"{x!r} is not a residue mod {self.ctx.p}")
        y = self._answer(x)
        with self._count_lock:
            self._count += 1
        return y

    def query_many(self, xs: Iterable[int]) -> list[int]:
        return [self.query(x) for x in xs]

    def _answer(self, x: int) -> int:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class LocalOracle(PowerOracle):
    """Oracle backed by an in-process hidden polynomial."""

    def __init__(self, hidden: MonicPoly, ctx: FieldCtx):
        if hidden.p != ctx.p:
            raise ValueError("hidden polynomial lives over a different field")
        super().__init__(ctx)
        self._hidden = hidden

    def _answer(self, x: int) -> int:
        return pow(eval_poly(self._hidden, x), self.ctx.e, self.ctx.p)


def query_count(o: PowerOracle) -> int:
    return o.query_count


# --- wire format -----------------------------------------------------------


def encode(obj: dict) -> bytes:
    return (json.dumps(obj, separators=(",", ":")) + "\n").encode()


def handle_line(line: bytes | str, oracle: PowerOracle) -> dict:
    """Answer one request frame; never raises."""
    try:
        req = json.loads(line)
        raw = req["x"]
        if not isinstance(raw, str) or not raw.isdigit():
            raise ValueError(raw)
        x = int(raw)
    except (ValueError, KeyError, TypeError):
        return {"error": "parse"}
    try:
        return {"y": str(oracle.query(x))}
    except OutOfDomain:
        return {"error": "out_of_domain"}


def announce(ctx: FieldCtx) -> dict:
    return {"p": str(ctx.p), "e": str(ctx.e)}


def serve_stream(oracle: PowerOracle, rfile: IO[bytes], wfile: IO[bytes]) -> None:
    """Serve one connection until EOF."""
    wfile.write(encode(announce(oracle.ctx)))
    wfile.flush()
    for line in rfile:
        if not line.strip():
            continue
        wfile.write(encode(handle_line(line, oracle)))
        wfile.flush()


def serve_stdio(hidden: MonicPoly, ctx: FieldCtx) -> int:
    oracle = LocalOracle(hidden, ctx)
    try:
        serve_stream(oracle, sys.stdin.buffer, sys.stdout.buffer)
    except BrokenPipeError:
        pass
    log.info("oracle shut down after %d queries", oracle.query_count)
    return oracle.query_count


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        try:
            serve_stream(self.server.oracle, self.rfile, self.wfile)
        except (BrokenPipeError, ConnectionResetError):
            pass


class OracleServer(socketserver.TCPServer):
    """Single-threaded TCP server: one connection at a time."""

    allow_reuse_address = True

    def __init__(self, hidden: MonicPoly, ctx: FieldCtx, address=("127.0.0.1", 0)):
        self.oracle = LocalOracle(hidden, ctx)
        super().__init__(address, _Handler)

    @property
    def address(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"

    def server_close(self):
        log.info("oracle shut down after %d queries", self.oracle.query_count)
        super().server_close()


def serve(hidden: MonicPoly, ctx: FieldCtx, transport: str = "stdio", listen: str = "127.0.0.1:0"):
    """Run the oracle until shutdown. ``transport`` is ``"stdio"`` or ``"socket"``."""
    if transport == "stdio":
        return serve_stdio(hidden, ctx)
    host, port = parse_address(listen)
    with OracleServer(hidden, ctx, (host, port)) as server:
        print(json.dumps({"listening": server.address}), file=sys.stderr, flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
        return server.oracle.query_count


def parse_address(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"address must look like HOST:PORT, got {addr!r}")
    return host, int(port)


# --- client ----------------------------------------------------------------


class RemoteOracle(PowerOracle):
    """Client side of the wire protocol over any pair of byte streams."""

    def __init__(self, rfile: IO[bytes], wfile: IO[bytes], ctx: FieldCtx | None = None, closer=None):
        self._rfile = rfile
        self._wfile = wfile
        self._closer = closer
        self._io_lock = threading.Lock()
        hello = self._read()
        try:
            p, e = int(hello["p"]), int(hello["e"])
        except (KeyError, ValueError, TypeError):
            raise ProtocolError(f"bad announce frame {hello!r}") from None
        if ctx is not None and (ctx.p, ctx.e) != (p, e):
            raise ProtocolError(f"server field (p={p}, e={e}) does not match ({ctx.p}, {ctx.e})")
        super().__init__(ctx if ctx is not None else FieldCtx(p, e))

    @classmethod
    def connect(cls, address: str, ctx: FieldCtx | None = None, timeout: float = 10.0) -> "RemoteOracle":
        sock = socket.create_connection(parse_address(address), timeout=timeout)
        rfile = sock.makefile("rb")
        wfile = sock.makefile("wb")

        def closer():
            rfile.close()
            wfile.close()
            sock.close()

        return cls(rfile, wfile, ctx, closer)

    @classmethod
    def spawn(cls, hidden: MonicPoly, ctx: FieldCtx) -> "RemoteOracle":
        """Start ``serve-oracle --stdio`` in a child process and talk to it."""
        cmd = [
            sys.executable, "-m", "hidden_power", "serve-oracle",
            "--p", str(ctx.p), "--e", str(ctx.e),
            "--poly", json.dumps(list(hidden.coeffs)), "--stdio",
        ]
        proc = subprocess.Popen(cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL)

        def closer():
            proc.stdin.close()
            proc.stdout.close()
            proc.wait(timeout=10)

        return cls(proc.stdout, proc.stdin, ctx, closer)

    def _read(self) -> dict:
        line = self._rfile.readline()
        if not line:
            raise ProtocolError("oracle closed the connection")
        return json.loads(line)

    def request(self, frame: dict) -> dict:
        """Send one raw frame and return the raw reply (no counting)."""
        with self._io_lock:
            self._wfile.write(encode(frame))
            self._wfile.flush()
            return self._read()

    def _answer(self, x: int) -> int:
        reply = self.request({"x": str(x)})
        if "y" in reply:
            return int(reply["y"])
        if reply.get("error") == "out_of_domain":
            raise OutOfDomain(f"server rejected {x}")
        raise ProtocolError(f"oracle error: {reply!r}")

    def close(self) -> None:
        if self._closer is not None:
            self._closer()
            self._closer = None
