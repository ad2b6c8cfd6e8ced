"""CBIOnt: a knowledge base for collaborative business intelligence sessions.

Build the ontology with :func:`build_schema`, load session exports with
:func:`ingest_file`, derive facts with :func:`materialize`, check them with
:func:`validate`, and ask questions with :func:`evaluate` or the
competency-question catalog.
"""
from .rdf import IRI, Graph, Literal, Triple, graph_equal
from .namespaces import CBIDATA, CBIONT, FOAF, GEO, OWL, RDF, RDFS, STANDARD_PREFIXES, TIME, XSD, Namespace
from .turtle import ParseError, parse_ntriples, parse_turtle, serialize_ntriples, serialize_turtle
from .schema import SchemaDefect, SchemaError, axioms, build_schema, encode, validate_schema
from .reasoner import RULES, CyclicSchemaError, Violation, instances_of, is_subclass_of, materialize, validate
from .ingest import (
    IngestError, IngestReport, MintingScheme, SessionRecord, ingest_file, ingest_json,
    parse_session, reference_individuals, session_to_triples,
)
from .query import (
    CATALOG, SelectQuery, TriplePattern, Variable, competency_query, evaluate,
    format_json, format_tsv, parse_query,
)

__version__ = "0.1.0"

__all__ = [
    "IRI", "Graph", "Literal", "Triple", "graph_equal", "CBIDATA", "CBIONT", "FOAF", "GEO", "OWL",
    "RDF", "RDFS", "STANDARD_PREFIXES", "TIME", "XSD", "Namespace", "ParseError", "parse_ntriples",
    "parse_turtle", "serialize_ntriples", "serialize_turtle", "SchemaDefect", "SchemaError",
    "axioms", "build_schema", "encode", "validate_schema", "RULES", "CyclicSchemaError",
    "Violation", "instances_of", "is_subclass_of", "materialize", "validate", "IngestError",
    "IngestReport", "MintingScheme", "SessionRecord", "ingest_file", "ingest_json",
    "parse_session", "reference_individuals", "session_to_triples", "CATALOG", "SelectQuery",
    "TriplePattern", "Variable", "competency_query", "evaluate", "format_json", "format_tsv",
    "parse_query",
]
