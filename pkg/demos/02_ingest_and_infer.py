"""
From a JSON session export to a materialized knowledge base
===========================================================

"""

from pathlib import Path

from cbiont import Graph, build_schema, ingest_file, instances_of, materialize, reference_individuals
from cbiont.namespaces import CBIONT, FOAF

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "reference_session.json"

# ingest one export; each session is all-or-nothing
kb = Graph()
report = ingest_file(FIXTURE, kb)
print("\n".join(report.lines(FIXTURE.name)))

# the fixed phase, aspect and form individuals
kb.update(reference_individuals().triples())
print(len(kb), "asserted triples")

# forward chaining adds types from the subclass tree, domains and ranges
inferred = materialize(kb, build_schema())
print(len(inferred), "triples after materialization")

# a person is a collaborator through foaf:Agent
print("people:", [x.value for x in instances_of(FOAF.Person, inferred)])
print("collaborators:", [x.value for x in instances_of(CBIONT.Collaborator, inferred)])
print("forms:", [x.value for x in instances_of(CBIONT.CBI_Form, inferred)])
