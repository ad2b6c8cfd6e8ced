"""
Answering the competency questions
==================================

"""

from pathlib import Path

from cbiont import (
    CATALOG, Graph, build_schema, competency_query, evaluate, format_tsv, ingest_file, materialize,
    parse_query, reference_individuals,
)
from cbiont.query import competency_query_text

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "reference_session.json"

kb = Graph()
ingest_file(FIXTURE, kb)
kb.update(reference_individuals().triples())
kb = materialize(kb, build_schema())

# every catalog entry, pinned to the reference session
session = "http://bi4people.org/data/cbiont/session/lyon-2021-07"
for cq in CATALOG.values():
    q = competency_query(cq.id, session)
    print(f"# {cq.id}: {cq.topic}")
    print(competency_query_text(cq.id, session))
    print(format_tsv(q.projection, evaluate(q, kb)))

# free-form queries use the same small SELECT syntax
q = parse_query("""
SELECT ?person ?text WHERE {
  ?remark cbiont:authored_by ?person ;
          cbiont:hasRemark ?kind ;
          cbiont:hasDescription ?text .
  FILTER(?kind IN ("Question", "Comment"))
}""")
print(format_tsv(q.projection, evaluate(q, kb)))
