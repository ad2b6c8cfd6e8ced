"""Acceptance criteria, one test each; conftest prints the PASS/FAIL lines."""
import io
import random
import time
from pathlib import Path

import pytest

from cbiont.cli import run
from cbiont.ingest import ingest_file, reference_individuals
from cbiont.namespaces import FOAF, GEO, RDFS, STANDARD_PREFIXES, TIME
from cbiont.query import competency_query, evaluate, format_tsv
from cbiont.rdf import IRI, Graph, Literal, Triple, graph_equal
from cbiont.reasoner import materialize, validate
from cbiont.schema import (
    CBI_FORM, CBI_PHASE, CBI_RESEARCH_ASPECT, CBI_TEMPORAL_SPATIAL_SESSION, COLLABORATOR, HAS_DESCRIPTION,
    HAS_REMARK, build_schema, enumerations,
)
from cbiont.turtle import parse_ntriples, parse_turtle, serialize_ntriples, serialize_turtle

from _gen import random_abox, random_dag_schema, random_graph, random_query, small_graph
from _oracles import brute_force_select, closure_then_saturate

DATA = Path(__file__).parent / "data"
SESSION = IRI("http://bi4people.org/data/cbiont/session/lyon-2021-07")


@pytest.fixture
def criterion(record_property):
    def mark(key, title):
        record_property("criterion", key)
        record_property("title", title)
    return mark


def test_c1_schema_fidelity(criterion):
    criterion("1", "schema fidelity: 7/5/3 hubs, alignments, remark enumeration")
    schema = build_schema()
    sub = RDFS.subClassOf
    assert len(schema.match(None, sub, CBI_FORM)) == 7
    assert len(schema.match(None, sub, CBI_RESEARCH_ASPECT)) == 5
    assert len(schema.match(None, sub, CBI_PHASE)) == 3
    for a, b in ((TIME.TemporalEntity, CBI_TEMPORAL_SPATIAL_SESSION),
                 (GEO.SpatialThing, CBI_TEMPORAL_SPATIAL_SESSION),
                 (FOAF.Agent, COLLABORATOR)):
        assert Triple(a, sub, b) in schema
        assert Triple(b, sub, a) not in schema
    assert enumerations(schema)[HAS_REMARK] == tuple(Literal(x) for x in ("Question", "Answer", "Comment"))


def test_c2_round_trip(criterion):
    criterion("2", "Turtle and N-Triples round-trip on the schema and 100 random graphs (< 5 s)")
    start = time.perf_counter()
    rng = random.Random(2)
    graphs = [build_schema()] + [random_graph(rng, 200) for _ in range(100)]
    for g in graphs:
        assert graph_equal(parse_ntriples(serialize_ntriples(g)), g)
        back, _ = parse_turtle(serialize_turtle(g, STANDARD_PREFIXES))
        assert graph_equal(back, g)
    assert time.perf_counter() - start < 5.0


def test_c3_reasoner_oracle(criterion):
    criterion("3", "materialize equals the BFS-closure oracle on 50 random DAG TBoxes (< 10 s)")
    start = time.perf_counter()
    rng = random.Random(3)
    for _ in range(50):
        tbox, classes, props = random_dag_schema(rng, 20, 40)
        abox = random_abox(rng, classes, props, 30, 60)
        assert graph_equal(materialize(abox, tbox), closure_then_saturate(abox, tbox))
    assert time.perf_counter() - start < 10.0


def test_c4_validation_fixture(criterion):
    criterion("4", "fixture KB yields exactly 4 violations with the right kinds and subjects")
    kb, _ = parse_turtle((DATA / "bad_remarks.ttl").read_text(encoding="utf-8"))
    found = [(v.kind, v.subject.value.rsplit("/", 1)[1], v.property) for v in validate(kb, build_schema())]
    assert sorted(found, key=str) == sorted([
        ("enumeration_violation", "1", HAS_REMARK),
        ("enumeration_violation", "2", HAS_REMARK),
        ("enumeration_violation", "3", HAS_REMARK),
        ("datatype_violation", "4", HAS_DESCRIPTION),
    ], key=str)


def test_c5_query_oracle(criterion):
    criterion("5", "evaluate equals the brute-force engine on 100 random instances (< 10 s)")
    start = time.perf_counter()
    rng = random.Random(5)
    for _ in range(100):
        g, iris, preds, lits = small_graph(rng, 100)
        q = random_query(rng, iris, preds, lits)
        assert evaluate(q, g) == brute_force_select(q, g)
    assert time.perf_counter() - start < 10.0


def test_c6_competency_goldens(criterion):
    criterion("6", "reference session through CQ1-CQ8 byte-matches the goldens")
    kb = Graph()
    report = ingest_file(DATA / "reference_session.json", kb)
    assert (report.ok, report.failed) == (1, 0)
    kb.update(reference_individuals().triples())
    inferred = materialize(kb, build_schema())
    for n in range(1, 9):
        q = competency_query(n, SESSION)
        golden = (DATA / "golden" / f"cq{n}.tsv").read_text(encoding="utf-8")
        assert format_tsv(q.projection, evaluate(q, inferred)) == golden, f"CQ{n}"


def _cli_pipeline(workdir: Path):
    kb, inferred = workdir / "kb.ttl", workdir / "inferred.ttl"
    sink = io.StringIO()
    assert run(["ingest", "--input", str(DATA / "reference_session.json"), "--kb-out", str(kb)],
               io.StringIO(), sink, sink) == 0
    assert run(["infer", "--kb", str(kb), "--out", str(inferred)], io.StringIO(), sink, sink) == 0
    assert run(["schema", "export", "--out", str(workdir / "schema.ttl")], io.StringIO(), sink, sink) == 0
    for n in range(1, 9):
        with open(workdir / f"cq{n}.tsv", "w", encoding="utf-8") as fh:
            assert run(["query", "--kb", str(inferred), "--cq", str(n), "--session", SESSION.value],
                       io.StringIO(), fh, sink) == 0
    return {p.name: p.read_bytes() for p in sorted(workdir.iterdir())}


def test_c7_cli_determinism(criterion, tmp_path):
    criterion("7", "two full CLI pipeline runs produce byte-identical files")
    first, second = tmp_path / "first", tmp_path / "second"
    first.mkdir()
    second.mkdir()
    a, b = _cli_pipeline(first), _cli_pipeline(second)
    assert len(a) == 11
    assert a == b
