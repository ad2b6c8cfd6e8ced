"""
Building and inspecting the CBIOnt schema
=========================================

"""

from cbiont import STANDARD_PREFIXES, axioms, build_schema, serialize_turtle, validate_schema
from cbiont.namespaces import CBIONT, RDFS
from cbiont.schema import SubClassOf

# the schema is an ordinary graph of triples
schema = build_schema()
print(len(schema), "triples")

# the three hub classes and their leaves
for hub in (CBIONT.CBI_Form, CBIONT.CBI_Research_Aspect, CBIONT.CBI_Phase):
    leaves = schema.subjects(RDFS.subClassOf, hub)
    print(hub.value.rsplit("#", 1)[1], "->", ", ".join(x.value.rsplit("#", 1)[1] for x in leaves))

# a typed view over the same triples
subclass_axioms = [a for a in axioms(schema) if isinstance(a, SubClassOf)]
print(len(subclass_axioms), "subclass axioms")

# structural checks come back empty for the built schema
print("defects:", validate_schema(schema))

# canonical Turtle, the same bytes every time
print(serialize_turtle(schema, STANDARD_PREFIXES)[:400])
