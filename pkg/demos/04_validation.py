"""
Validating a knowledge base against the schema
==============================================

"""

from pathlib import Path

from cbiont import build_schema, parse_turtle, validate
from cbiont.reasoner import format_violations, violations_to_json

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "bad_remarks.ttl"

kb, _ = parse_turtle(FIXTURE.read_text(encoding="utf-8"))
violations = validate(kb, build_schema())

# one tab-separated line per violation
print(format_violations(violations))

# the same report as JSON
print(violations_to_json(violations))

# only errors count as failures; undeclared predicates are warnings
print(sorted({(v.kind, v.severity) for v in violations}))
