"""Line-delimited JSON certificates for passing criterion evaluations.

A certificate is re-checked by running its criterion again from scratch, so
it can be trusted without trusting whoever produced it.  The ``digest`` field
hashes every other field together with the obstruction set itself, which
makes edits to metadata detectable as well.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, NamedTuple

from . import __version__
from .criteria import KINDS, CriterionReport, check
from .errors import Fermat223Error, NotPassed, ParseError, SchemaVersionMismatch

__all__ = [
    "SCHEMA_VERSION",
    "Certificate",
    "CertificateWriter",
    "Verification",
    "emit",
    "read_stream",
    "verify",
    "write_stream",
]

SCHEMA_VERSION = 1
PRODUCER = f"fermat223 {__version__}"


@dataclass(frozen=True)
class Certificate:
    schema_version: int
    l: int
    kind: str
    k: int
    p: int
    a0_sq_mod_l: int
    set_size: int
    alpha_traces: tuple
    timestamp: int
    producer: str
    digest: str

    def to_json(self) -> str:
        record = asdict(self)
        record["alpha_traces"] = [list(pair) for pair in self.alpha_traces]
        return json.dumps(record, separators=(",", ":"), ensure_ascii=False)


FIELD_NAMES = tuple(f.name for f in fields(Certificate))
_INT_FIELDS = ("schema_version", "l", "k", "p", "a0_sq_mod_l", "set_size", "timestamp")


def _digest(record: dict, set_digest: str) -> str:
    body = {name: record[name] for name in FIELD_NAMES if name != "digest"}
    body["alpha_traces"] = [list(pair) for pair in body["alpha_traces"]]
    body["set_digest"] = set_digest
    text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _default_timestamp() -> int:
    # SOURCE_DATE_EPOCH pins the clock for reproducible batch output
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    return int(epoch) if epoch else int(time.time())


def emit(report: CriterionReport, producer: str = PRODUCER, timestamp: int | None = None) -> Certificate:
    if not report.passed:
        raise NotPassed(f"{report.kind} did not pass for l={report.l}, k={report.k}")
    record = dict(
        schema_version=SCHEMA_VERSION,
        l=report.l,
        kind=report.kind,
        k=report.k,
        p=report.p,
        a0_sq_mod_l=report.a0_sq_mod_l or 0,
        set_size=report.set_size,
        alpha_traces=tuple((int(a), int(t)) for a, t in report.alpha_traces),
        timestamp=_default_timestamp() if timestamp is None else int(timestamp),
        producer=producer,
    )
    return Certificate(**record, digest=_digest(record, report.set_digest))


class Verification(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _invariant_problem(cert: Certificate) -> str:
    if cert.schema_version != SCHEMA_VERSION:
        return f"schema_version {cert.schema_version} != {SCHEMA_VERSION}"
    if cert.kind not in KINDS:
        return f"unknown kind {cert.kind!r}"
    if not 0 <= cert.a0_sq_mod_l < max(cert.l, 1):
        return "a0_sq_mod_l out of range"
    if cert.kind in ("chen", "kraus3"):
        if cert.p != cert.k * cert.l + 1:
            return "p != k*l + 1"
        if cert.a0_sq_mod_l == 4 % cert.l:
            return "a0_sq_mod_l = 4 (mod l)"
        if any(t == cert.a0_sq_mod_l for _, t in cert.alpha_traces):
            return "an alpha trace equals a0_sq_mod_l"
    elif cert.kind == "mod6":
        if cert.l % 6 != 5 or cert.k or cert.p:
            return "mod6 certificate needs l = 5 (mod 6) and k = p = 0"
    elif cert.p != 2 * cert.l + 1:
        return "sophie_germain certificate needs p = 2l + 1"
    return ""


def verify(cert: Certificate) -> Verification:
    """Re-run the certificate's criterion and compare every recorded value."""
    problem = _invariant_problem(cert)
    if problem:
        return Verification(False, problem)
    try:
        rep = check(cert.kind, cert.l, cert.k)
    except (Fermat223Error, ValueError) as exc:
        return Verification(False, f"criterion could not be evaluated: {exc}")
    if not rep.passed:
        return Verification(False, f"{cert.kind} fails at condition {rep.failed_condition}")
    expected = {
        "k": rep.k,
        "p": rep.p,
        "a0_sq_mod_l": rep.a0_sq_mod_l or 0,
        "set_size": rep.set_size,
        "alpha_traces": tuple((a, t) for a, t in rep.alpha_traces),
    }
    for name, value in expected.items():
        if getattr(cert, name) != value:
            return Verification(False, f"{name} mismatch: certificate {getattr(cert, name)!r}, recomputed {value!r}")
    if cert.digest != _digest(asdict(cert), rep.set_digest):
        return Verification(False, "digest mismatch")
    return Verification(True, "")


def _parse(line: str, lineno: int) -> Certificate:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
    if not isinstance(record, dict):
        raise ParseError("record is not an object", lineno)
    keys = set(record)
    if keys != set(FIELD_NAMES):
        extra, missing = keys - set(FIELD_NAMES), set(FIELD_NAMES) - keys
        raise ParseError(f"unknown fields {sorted(extra)}, missing fields {sorted(missing)}", lineno)
    if record["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"schema_version {record['schema_version']!r} != {SCHEMA_VERSION}", lineno)
    for name in _INT_FIELDS:
        value = record[name]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"{name} must be an integer", lineno)
    for name in ("kind", "producer", "digest"):
        if not isinstance(record[name], str):
            raise ParseError(f"{name} must be a string", lineno)
    traces = record["alpha_traces"]
    if not isinstance(traces, list) or not all(
        isinstance(pair, list)
        and len(pair) == 2
        and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        for pair in traces
    ):
        raise ParseError("alpha_traces must be a list of [alpha, trace] integer pairs", lineno)
    record["alpha_traces"] = tuple(tuple(pair) for pair in traces)
    return Certificate(**record)


def read_stream(path) -> list[Certificate]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                out.append(_parse(line, lineno))
    return out


class CertificateWriter:
    """Appends certificates to one file; safe to share between threads."""

    def __init__(self, path, append: bool = True):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._fh = open(self.path, "a" if append else "w", encoding="utf-8")

    def write(self, cert: Certificate):
        with self._lock:
            self._fh.write(cert.to_json() + "\n")
            self._fh.flush()

    def close(self):
        with self._lock:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_stream(path, certs: Iterable[Certificate], append: bool = False):
    with CertificateWriter(path, append=append) as writer:
        for cert in certs:
            writer.write(cert)
