"""Scriptable in-process mock servers for the two networked sources.

``MockSparqlServer`` speaks just enough of the SPARQL HTTP protocol to
answer the label queries this package emits: it decodes the quoted literal
out of the query, looks it up in a canned label-to-URIs table, and answers
with standard JSON results.  Status codes can be scripted per request
(e.g. ``[503, 503, 200]``) and every request is logged with a monotonic
timestamp, so pacing and retry behavior are assertable.

``MockMapperServer`` honors the newline-delimited JSON frame protocol of
the concept-mapper client and can be loaded with canned mappings or raw
response bytes.

Both run on an ephemeral localhost port in a daemon thread and work as
context managers.
"""

from __future__ import annotations

import json
import re
import socketserver
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

_LITERAL_RE = re.compile(r'"((?:[^"\\]|\\.)*)"@(\w+)')

_UNESCAPES = {"\\\\": "\\", '\\"': '"', "\\n": "\n", "\\r": "\r", "\\t": "\t"}


def _unescape_literal(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        pair = value[i : i + 2]
        if pair in _UNESCAPES:
            out.append(_UNESCAPES[pair])
            i += 2
        else:
            out.append(value[i])
            i += 1
    return "".join(out)


@dataclass
class SparqlRequest:
    timestamp: float
    query: str
    label: str | None
    status: int


class MockSparqlServer:
    """HTTP SPARQL endpoint with a canned label table and scriptable statuses."""

    def __init__(self, mapping: dict[str, list[str]] | None = None):
        self.mapping = dict(mapping or {})
        self.requests: list[SparqlRequest] = []
        self._status_script: list[int] = []
        self._body_script: list[bytes] = []
        self._lock = threading.Lock()
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):  # noqa: N802 (http.server API)
                outer._handle(self)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    # -- scripting -------------------------------------------------------
    def script_statuses(self, statuses) -> None:
        """Queue HTTP status codes, one per upcoming request (then 200s)."""
        with self._lock:
            self._status_script.extend(statuses)

    def script_body(self, body: bytes) -> None:
        """Queue one raw response body to serve instead of real results."""
        with self._lock:
            self._body_script.append(body)

    # -- introspection ---------------------------------------------------
    @property
    def url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}/sparql"

    def request_labels(self) -> list[str]:
        return [r.label for r in self.requests]

    def gaps(self) -> list[float]:
        stamps = [r.timestamp for r in self.requests]
        return [b - a for a, b in zip(stamps, stamps[1:])]

    # -- lifecycle -------------------------------------------------------
    def start(self) -> "MockSparqlServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "MockSparqlServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()

    # -- request handling --------------------------------------------------
    def _handle(self, handler: BaseHTTPRequestHandler) -> None:
        stamp = time.monotonic()
        params = parse_qs(urlparse(handler.path).query)
        query = params.get("query", [""])[0]
        match = _LITERAL_RE.search(query)
        label = _unescape_literal(match.group(1)) if match else None
        with self._lock:
            status = self._status_script.pop(0) if self._status_script else 200
            body_override = self._body_script.pop(0) if self._body_script else None
            self.requests.append(SparqlRequest(stamp, query, label, status))
        if status != 200:
            handler.send_response(status)
            handler.send_header("Content-Length", "0")
            handler.end_headers()
            return
        if body_override is not None:
            body = body_override
        else:
            uris = self.mapping.get(label, []) if label is not None else []
            results = {
                "head": {"vars": ["s"]},
                "results": {
                    "bindings": [{"s": {"type": "uri", "value": uri}} for uri in uris]
                },
            }
            body = json.dumps(results).encode("utf-8")
        handler.send_response(200)
        handler.send_header("Content-Type", "application/sparql-results+json")
        handler.send_header("Content-Length", str(len(body)))
        handler.end_headers()
        handler.wfile.write(body)


@dataclass
class MapperRequest:
    timestamp: float
    frame: dict | None
    raw: bytes = b""


class MockMapperServer:
    """TCP concept-mapper endpoint speaking newline-delimited JSON frames."""

    def __init__(self, mappings: list[dict] | None = None):
        self.mappings = list(mappings or [])
        self.requests: list[MapperRequest] = []
        self.raw_response: bytes | None = None
        self.close_without_reply = False
        self._lock = threading.Lock()
        outer = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self):
                outer._handle(self)

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self._server = Server(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def host(self) -> str:
        return self._server.server_address[0]

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def start(self) -> "MockMapperServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "MockMapperServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()

    def _handle(self, handler: socketserver.StreamRequestHandler) -> None:
        raw = handler.rfile.readline()
        try:
            frame = json.loads(raw.decode("utf-8"))
        except ValueError:
            frame = None
        with self._lock:
            self.requests.append(MapperRequest(time.monotonic(), frame, raw))
            raw_response = self.raw_response
            close_quietly = self.close_without_reply
            mappings = list(self.mappings)
        if close_quietly:
            return
        if raw_response is not None:
            handler.wfile.write(raw_response)
            return
        reply = json.dumps({"v": 1, "mappings": mappings}, ensure_ascii=False)
        handler.wfile.write(reply.encode("utf-8") + b"\n")
