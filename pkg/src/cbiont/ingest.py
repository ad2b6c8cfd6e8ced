"""JSON session exports to CBIOnt ABox triples.

The export format and the triple mapping are documented in
``docs/session-export.md``.  Parsing is strict: unknown fields, bad codes,
malformed timestamps and dangling collaborator references are all errors,
reported with JSON-pointer paths.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from datetime import datetime
from decimal import Decimal
from typing import Any, Dict, List, Optional, Tuple
from urllib.parse import quote

from .namespaces import CBIDATA, FOAF, GEO, RDF, TIME, XSD
from .rdf import IRI, Graph, Literal, Triple
from . import schema as S

BASE_IRI_ENV = "CBIONT_BASE_IRI"

PHASES = dict(zip(("pre_decision", "decision", "post_decision"), S.PHASE_CLASSES))
ASPECTS = dict(zip(
    ("query_formulation", "source_discovery", "data_acquisition",
     "data_integration", "data_presentation"),
    S.ASPECT_CLASSES))
FORMS = {cls.value.rsplit("#", 1)[1].lower(): cls for cls in S.FORM_CLASSES}
COLLABORATOR_KINDS = {"person": FOAF.Person, "organization": FOAF.Organization, "group": FOAF.Group}
REMARK_KINDS = {"question": "Question", "answer": "Answer", "comment": "Comment"}
LOCATION_KINDS = ("physical", "virtual")

_TIMESTAMP = re.compile(
    r"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2})(\.\d+)?(Z|[+-](\d{2}):(\d{2}))?")


class IngestError(ValueError):
    """An export that cannot be ingested; ``path`` is a JSON pointer."""

    def __init__(self, path: str, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        self.path = path
        self.message = message
        self.line = line
        self.column = column
        where = path or "/"
        if line is not None:
            where = f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class Location:
    name: str
    kind: str
    lat: Optional[Decimal] = None
    long: Optional[Decimal] = None


@dataclass(frozen=True)
class Collaborator:
    id: str
    name: str
    kind: str
    affiliation_id: Optional[str] = None


@dataclass(frozen=True)
class RemarkRecord:
    kind: str
    text: str
    author_id: str
    at: str


@dataclass(frozen=True)
class SessionRecord:
    id: str
    title: str
    started_at: str
    phase: str
    research_aspect: str
    form: str
    collaborators: Tuple[Collaborator, ...]
    remarks: Tuple[RemarkRecord, ...] = ()
    location: Optional[Location] = None


# --- strict parsing --------------------------------------------------------------

def _check_fields(obj: Any, path: str, required: Tuple[str, ...], optional: Tuple[str, ...] = ()):
    if not isinstance(obj, dict):
        raise IngestError(path, "expected an object")
    for key in obj:
        if key not in required and key not in optional:
            raise IngestError(f"{path}/{key}", "unknown field")
    for key in required:
        if key not in obj:
            raise IngestError(f"{path}/{key}", "missing required field")


def _string(obj: dict, key: str, path: str, non_empty: bool = False) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise IngestError(f"{path}/{key}", "expected a string")
    if non_empty and not value:
        raise IngestError(f"{path}/{key}", "must not be empty")
    return value


def _code(obj: dict, key: str, path: str, allowed) -> str:
    value = _string(obj, key, path)
    if value not in allowed:
        raise IngestError(f"{path}/{key}", f"{value!r} is not one of {', '.join(allowed)}")
    return value


def _timestamp(obj: dict, key: str, path: str) -> str:
    value = _string(obj, key, path)
    m = _TIMESTAMP.fullmatch(value)
    bad = m is None
    if not bad:
        try:
            datetime.strptime(m.group(1), "%Y-%m-%dT%H:%M:%S")
        except ValueError:
            bad = True
        if m.group(4) is not None and (int(m.group(4)) > 14 or int(m.group(5)) > 59):
            bad = True
    if bad:
        raise IngestError(f"{path}/{key}", f"{value!r} is not an ISO-8601 timestamp (YYYY-MM-DDThh:mm:ss[.f][Z|±hh:mm])")
    return value


def _degrees(obj: dict, key: str, path: str, limit: int) -> Optional[Decimal]:
    if key not in obj:
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, Decimal)):
        raise IngestError(f"{path}/{key}", "expected a number of decimal degrees")
    value = Decimal(value)
    if not value.is_finite() or abs(value) > limit:
        raise IngestError(f"{path}/{key}", f"must lie within ±{limit} degrees")
    return value


def session_from_obj(obj: Any, path: str = "") -> SessionRecord:
    """Validate one decoded JSON session object."""
    _check_fields(obj, path,
                  ("id", "title", "started_at", "phase", "research_aspect", "form", "collaborators"),
                  ("location", "remarks"))
    sid = _string(obj, "id", path, non_empty=True)
    title = _string(obj, "title", path)
    started_at = _timestamp(obj, "started_at", path)

    location = None
    if "location" in obj:
        lpath = f"{path}/location"
        loc = obj["location"]
        _check_fields(loc, lpath, ("name", "kind"), ("lat", "long"))
        location = Location(
            _string(loc, "name", lpath, non_empty=True),
            _code(loc, "kind", lpath, LOCATION_KINDS),
            _degrees(loc, "lat", lpath, 90),
            _degrees(loc, "long", lpath, 180),
        )

    phase = _code(obj, "phase", path, PHASES)
    aspect = _code(obj, "research_aspect", path, ASPECTS)
    form = _code(obj, "form", path, FORMS)

    raw_collabs = obj["collaborators"]
    if not isinstance(raw_collabs, list):
        raise IngestError(f"{path}/collaborators", "expected an array")
    if not raw_collabs:
        raise IngestError(f"{path}/collaborators", "a session needs at least one collaborator")
    collaborators: List[Collaborator] = []
    seen: Dict[str, int] = {}
    for i, c in enumerate(raw_collabs):
        cpath = f"{path}/collaborators/{i}"
        _check_fields(c, cpath, ("id", "name", "kind"), ("affiliation_id",))
        cid = _string(c, "id", cpath, non_empty=True)
        if cid in seen:
            raise IngestError(f"{cpath}/id", f"duplicate collaborator id {cid!r}")
        seen[cid] = i
        affiliation = _string(c, "affiliation_id", cpath, non_empty=True) if "affiliation_id" in c else None
        collaborators.append(Collaborator(cid, _string(c, "name", cpath),
                                          _code(c, "kind", cpath, COLLABORATOR_KINDS), affiliation))

    for i, c in enumerate(collaborators):
        if c.affiliation_id is None:
            continue
        apath = f"{path}/collaborators/{i}/affiliation_id"
        if c.affiliation_id not in seen:
            raise IngestError(apath, f"no collaborator with id {c.affiliation_id!r}")
        if c.kind != "person":
            raise IngestError(apath, "only person collaborators carry an affiliation")
        if collaborators[seen[c.affiliation_id]].kind != "organization":
            raise IngestError(apath, f"{c.affiliation_id!r} is not an organization")

    raw_remarks = obj.get("remarks", [])
    if not isinstance(raw_remarks, list):
        raise IngestError(f"{path}/remarks", "expected an array")
    remarks: List[RemarkRecord] = []
    for i, r in enumerate(raw_remarks):
        rpath = f"{path}/remarks/{i}"
        _check_fields(r, rpath, ("kind", "text", "author_id", "at"))
        kind = _code(r, "kind", rpath, REMARK_KINDS)
        text = _string(r, "text", rpath)
        author = _string(r, "author_id", rpath)
        if author not in seen:
            raise IngestError(f"{rpath}/author_id", f"no collaborator with id {author!r}")
        remarks.append(RemarkRecord(kind, text, author, _timestamp(r, "at", rpath)))

    return SessionRecord(sid, title, started_at, phase, aspect, form,
                         tuple(collaborators), tuple(remarks), location)


def _load_json(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise IngestError("", f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def parse_session(json_text: str) -> SessionRecord:
    return session_from_obj(_load_json(json_text))


# --- minting and mapping ------------------------------------------------------------

@dataclass(frozen=True)
class MintingScheme:
    """Deterministic, injective IRIs for ingested individuals."""

    base: str = CBIDATA.base

    def __post_init__(self):
        if not self.base.endswith(("/", "#")):
            raise ValueError("base IRI must end in '/' or '#'")
        IRI(self.base)

    @classmethod
    def from_env(cls, environ=None) -> "MintingScheme":
        environ = os.environ if environ is None else environ
        base = environ.get(BASE_IRI_ENV)
        return cls(base) if base else cls()

    def _iri(self, path: str) -> IRI:
        return IRI(self.base + path)

    def session(self, sid: str) -> IRI:
        return self._iri(f"session/{quote(sid, safe='')}")

    def agent(self, cid: str) -> IRI:
        return self._iri(f"agent/{quote(cid, safe='')}")

    def remark(self, sid: str, ordinal: int) -> IRI:
        return self._iri(f"session/{quote(sid, safe='')}/remark/{ordinal}")

    def place(self, name: str) -> IRI:
        return self._iri(f"place/{quote(name, safe='')}")

    def instant(self, timestamp: str) -> IRI:
        return self._iri(f"time/{quote(timestamp, safe=':+')}")

    def phase(self, code: str) -> IRI:
        return self._iri(f"phase/{code}")

    def aspect(self, code: str) -> IRI:
        return self._iri(f"aspect/{code}")

    def form(self, code: str) -> IRI:
        return self._iri(f"form/{code}")


def reference_individuals(scheme: Optional[MintingScheme] = None) -> Graph:
    """The fixed phase/aspect/form individuals, each typed by its leaf class."""
    scheme = scheme or MintingScheme()
    g = Graph()
    for table, mint in ((PHASES, scheme.phase), (ASPECTS, scheme.aspect), (FORMS, scheme.form)):
        for code, cls in table.items():
            g.insert(Triple(mint(code), RDF.type, cls))
    return g


def session_to_triples(rec: SessionRecord, scheme: Optional[MintingScheme] = None) -> Graph:
    scheme = scheme or MintingScheme()
    s = scheme.session(rec.id)
    g = Graph()
    add = g.insert
    add(Triple(s, RDF.type, S.CBI_SESSION))
    add(Triple(s, S.ASSOCIATED_WITH, scheme.phase(rec.phase)))
    add(Triple(s, S.BELONGS_TO, scheme.aspect(rec.research_aspect)))
    add(Triple(s, S.HAS_TYPE, scheme.form(rec.form)))

    agents = {c.id: scheme.agent(c.id) for c in rec.collaborators}
    for c in rec.collaborators:
        add(Triple(s, S.OWNED_BY, agents[c.id]))
        add(Triple(agents[c.id], RDF.type, COLLABORATOR_KINDS[c.kind]))
        if c.affiliation_id is not None:
            add(Triple(agents[c.id], S.AFFILIATED_WITH, agents[c.affiliation_id]))

    instant = scheme.instant(rec.started_at)
    add(Triple(s, S.HAS_TIME, instant))
    add(Triple(instant, RDF.type, TIME.Instant))
    add(Triple(instant, S.TIME_IN_XSD_DATETIME, Literal(rec.started_at, XSD.dateTime)))

    if rec.location is not None:
        place = scheme.place(rec.location.name)
        add(Triple(s, S.HAS_LOCATION, place))
        add(Triple(place, RDF.type, GEO.SpatialThing))
        if rec.location.lat is not None:
            add(Triple(place, S.GEO_LAT, Literal(format(rec.location.lat, "f"), XSD.decimal)))
        if rec.location.long is not None:
            add(Triple(place, S.GEO_LONG, Literal(format(rec.location.long, "f"), XSD.decimal)))

    for ordinal, r in enumerate(rec.remarks, start=1):
        node = scheme.remark(rec.id, ordinal)
        add(Triple(s, S.CONTAINS_REMARK, node))
        add(Triple(node, RDF.type, S.REMARK))
        add(Triple(node, S.HAS_REMARK, Literal(REMARK_KINDS[r.kind])))
        add(Triple(node, S.HAS_DESCRIPTION, Literal(r.text)))
        add(Triple(node, S.AUTHORED_BY, agents[r.author_id]))
        add(Triple(node, S.POSTED_AT, Literal(r.at, XSD.dateTime)))
    return g


def expected_triple_count(rec: SessionRecord) -> int:
    """Size of ``session_to_triples(rec)`` from the published mapping table."""
    n = 4 + 3 + 2 * len(rec.collaborators) + 6 * len(rec.remarks)
    n += sum(1 for c in rec.collaborators if c.affiliation_id is not None)
    if rec.location is not None:
        n += 2 + (rec.location.lat is not None) + (rec.location.long is not None)
    return n


# --- files ------------------------------------------------------------------------

@dataclass
class SessionOutcome:
    index: int
    session_id: Optional[str]
    triples: int = 0
    added: int = 0
    error: Optional[IngestError] = None


@dataclass
class IngestReport:
    sessions: List[SessionOutcome] = field(default_factory=list)

    @property
    def ok(self) -> int:
        return sum(1 for s in self.sessions if s.error is None)

    @property
    def failed(self) -> int:
        return sum(1 for s in self.sessions if s.error is not None)

    def lines(self, source: str = "") -> List[str]:
        prefix = f"{source}: " if source else ""
        out = []
        for s in self.sessions:
            if s.error is None:
                out.append(f"{prefix}session {s.session_id!r}: {s.triples} triples ({s.added} new)")
            else:
                out.append(f"{prefix}{s.error}")
        out.append(f"{prefix}ok: {self.ok}, failed: {self.failed}")
        return out


def ingest_json(text: str, kb: Graph, scheme: Optional[MintingScheme] = None) -> IngestReport:
    """Ingest one session object or an array of them into ``kb``.

    Each session is all-or-nothing; failures are reported, not raised.
    Malformed JSON raises :class:`IngestError`.
    """
    data = _load_json(text)
    if isinstance(data, dict):
        items = [("", data)]
    elif isinstance(data, list):
        items = [(f"/{i}", obj) for i, obj in enumerate(data)]
    else:
        raise IngestError("", "expected a session object or an array of them")
    report = IngestReport()
    for index, (path, obj) in enumerate(items):
        sid = obj.get("id") if isinstance(obj, dict) and isinstance(obj.get("id"), str) else None
        try:
            rec = session_from_obj(obj, path)
        except IngestError as exc:
            report.sessions.append(SessionOutcome(index, sid, error=exc))
            continue
        triples = session_to_triples(rec, scheme)
        added = kb.update(triples)
        report.sessions.append(SessionOutcome(index, rec.id, len(triples), added))
    return report


def ingest_file(path, kb: Graph, scheme: Optional[MintingScheme] = None) -> IngestReport:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return ingest_json(text, kb, scheme)
