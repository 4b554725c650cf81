"""Sampled validity check of external IRIs.

Probes go through a client with a ``probe(url, timeout)`` method. Two are
provided: :class:`HttpLinkClient` issues real requests, :class:`StubTransport`
answers from a script without touching the network. :class:`StubServer`
serves the same script over HTTP as a forward proxy, so the real client can
be exercised end to end on localhost.
"""

from __future__ import annotations

import fnmatch
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Protocol

import requests

from ..graph import RDF, Graph
from ..graph.terms import IRI

DEFAULT_TIMEOUT = 10.0
DEFAULT_BUDGET = 4


@dataclass(frozen=True)
class ProbeResult:
    url: str
    status: int | None          # None when the probe never got a response
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status is not None and self.status < 400


class LinkClient(Protocol):
    def probe(self, url: str, timeout: float) -> ProbeResult: ...


class HttpLinkClient:
    """HEAD first; GET when the server refuses HEAD with 405."""

    def __init__(self, session: requests.Session | None = None, proxies: dict | None = None,
                 user_agent: str = "lodforge-linkcheck"):
        self.session = session or requests.Session()
        self.proxies = proxies
        self.headers = {"User-Agent": user_agent}

    def probe(self, url: str, timeout: float) -> ProbeResult:
        try:
            resp = self.session.head(url, timeout=timeout, allow_redirects=True,
                                     proxies=self.proxies, headers=self.headers)
            if resp.status_code == 405:
                resp = self.session.get(url, timeout=timeout, allow_redirects=True, stream=True,
                                        proxies=self.proxies, headers=self.headers)
                resp.close()
            return ProbeResult(url, resp.status_code)
        except requests.Timeout:
            return ProbeResult(url, None, "timeout")
        except requests.RequestException as exc:
            return ProbeResult(url, None, type(exc).__name__)


@dataclass(frozen=True)
class StubRule:
    pattern: str
    head: int | str             # status code or "timeout"
    get: int | str


def parse_stub_script(text: str) -> list[StubRule]:
    """One rule per line: ``<url glob> <status>``.

    The status is a code, ``timeout``, or ``HEAD=<x> GET=<y>`` to answer the
    two methods differently. Blank lines and ``#`` comment lines are ignored.
    The first matching rule wins; unmatched URLs answer 404.
    """
    rules = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ValueError(f"stub script line {n}: expected '<pattern> <status>'")
        pattern, spec = parts[0], parts[1:]
        head = get = None
        for item in spec:
            if "=" in item:
                method, _, value = item.partition("=")
                value = _status(value, n)
                if method.upper() == "HEAD":
                    head = value
                elif method.upper() == "GET":
                    get = value
                else:
                    raise ValueError(f"stub script line {n}: unknown method {method!r}")
            else:
                head = get = _status(item, n)
        head = get if head is None else head
        get = head if get is None else get
        rules.append(StubRule(pattern, head, get))
    return rules


def _status(value: str, line: int) -> int | str:
    if value == "timeout":
        return value
    try:
        code = int(value)
    except ValueError:
        raise ValueError(f"stub script line {line}: bad status {value!r}") from None
    if not 100 <= code <= 599:
        raise ValueError(f"stub script line {line}: status {code} out of range")
    return code


def _answer(rules: list[StubRule], url: str, method: str) -> int | str:
    for rule in rules:
        if fnmatch.fnmatchcase(url, rule.pattern):
            return rule.head if method == "HEAD" else rule.get
    return 404


class StubTransport:
    """In-process client answering from a stub script."""

    def __init__(self, rules: list[StubRule] | str):
        self.rules = parse_stub_script(rules) if isinstance(rules, str) else list(rules)
        self.requests: list[tuple[str, str]] = []
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str | Path) -> "StubTransport":
        return cls(Path(path).read_text(encoding="utf-8"))

    def probe(self, url: str, timeout: float) -> ProbeResult:
        method = "HEAD"
        while True:
            with self._lock:
                self.requests.append((method, url))
            answer = _answer(self.rules, url, method)
            if answer == "timeout":
                return ProbeResult(url, None, "timeout")
            if answer == 405 and method == "HEAD":
                method = "GET"
                continue
            return ProbeResult(url, answer)


class StubServer:
    """Scripted HTTP forward proxy on localhost.

    Use as a context manager and pass :attr:`proxies` to
    :class:`HttpLinkClient`. Only plain ``http://`` URLs can be proxied this
    way. A ``timeout`` rule stalls for ``stall`` seconds before answering.
    """

    def __init__(self, rules: list[StubRule] | str, stall: float = 2.0):
        self.rules = parse_stub_script(rules) if isinstance(rules, str) else list(rules)
        self.stall = stall
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    def _handler(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def _reply(self, method: str):
                answer = _answer(server.rules, self.path, method)
                if answer == "timeout":
                    time.sleep(server.stall)
                    answer = 504
                body = b"" if method == "HEAD" else f"{answer}\n".encode()
                self.send_response(answer)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                if body:
                    self.wfile.write(body)

            def do_HEAD(self):
                self._reply("HEAD")

            def do_GET(self):
                self._reply("GET")

            def log_message(self, format, *args):
                pass

        return Handler

    def __enter__(self) -> "StubServer":
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), self._handler())
        self._server.daemon_threads = True
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None

    @property
    def url(self) -> str:
        if self._server is None:
            raise RuntimeError("stub server is not running")
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def proxies(self) -> dict:
        return {"http": self.url}


@dataclass
class LinkCheckResult:
    sample: list[str]
    results: list[ProbeResult] = field(default_factory=list)

    @property
    def probed(self) -> int:
        return len(self.results)

    @property
    def ok(self) -> int:
        return sum(r.ok for r in self.results)

    @property
    def rate(self) -> float | None:
        return self.ok / self.probed if self.probed else None

    @property
    def failures(self) -> list[tuple[str, int | str]]:
        return [(r.url, r.status if r.status is not None else (r.error or "error"))
                for r in self.results if not r.ok]


def external_iris(graph: Graph, base: str) -> list[str]:
    """Object IRIs outside ``base``, class IRIs of rdf:type excluded, sorted."""
    out = set()
    for s, p, o in graph:
        if isinstance(o, IRI) and p != RDF.type and not o.value.startswith(base):
            out.add(o.value)
    return sorted(out)


def sample_links(graph: Graph, base: str, sample_size: int, seed: int) -> list[str]:
    if sample_size < 1:
        raise ValueError("sample_size must be at least 1")
    population = external_iris(graph, base)
    if len(population) <= sample_size:
        return population
    return random.Random(seed).sample(population, sample_size)


def check_links(graph: Graph, base: str, sample_size: int, seed: int, client: LinkClient,
                budget: int = DEFAULT_BUDGET, timeout: float = DEFAULT_TIMEOUT) -> LinkCheckResult:
    """Probe a seeded uniform sample of external object IRIs.

    At most ``budget`` probes are in flight; results keep sample order.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    sample = sample_links(graph, base, sample_size, seed)
    with ThreadPoolExecutor(max_workers=budget) as pool:
        results = list(pool.map(lambda url: client.probe(url, timeout), sample))
    return LinkCheckResult(sample, results)
