"""Random graphs, schemas and queries shared by the oracle tests."""
import random

from cbiont.namespaces import OWL, RDF, RDFS, XSD
from cbiont.query import Equality, InSet, SelectQuery, TriplePattern, Variable
from cbiont.rdf import IRI, Graph, Literal, Triple

NAMESPACES = ["http://ex.org/ns#", "http://ex.org/data/", "urn:x:", "https://ünï.example/π/"]
_LOCAL_CHARS = "abcXYZ019_-.é%:"
_TEXT_CHARS = 'abc xyz"\\\n\t\r\'#<>@^é漢\x01\x7f 😀.;,'


def random_iri(rng: random.Random) -> IRI:
    local = "".join(rng.choice(_LOCAL_CHARS) for _ in range(rng.randint(0, 6)))
    return IRI(rng.choice(NAMESPACES) + local)


def random_literal(rng: random.Random) -> Literal:
    text = "".join(rng.choice(_TEXT_CHARS) for _ in range(rng.randint(0, 8)))
    kind = rng.randrange(6)
    if kind == 0:
        return Literal(text)
    if kind == 1:
        return Literal(text, lang=rng.choice(["en", "fr-CA", "zh-Hant-TW"]))
    if kind == 2:
        return Literal(str(rng.randint(-1000, 1000)), XSD.integer)
    if kind == 3:
        return Literal(rng.choice(["true", "false", "1"]), XSD.boolean)
    if kind == 4:
        return Literal(text, XSD.integer)
    return Literal(text, random_iri(rng))


def random_graph(rng: random.Random, max_triples: int = 200) -> Graph:
    subjects = [random_iri(rng) for _ in range(rng.randint(1, 15))]
    predicates = [random_iri(rng) for _ in range(rng.randint(1, 6))] + [RDF.type]
    g = Graph()
    for _ in range(rng.randint(0, max_triples)):
        obj = random_literal(rng) if rng.random() < 0.4 else rng.choice(subjects + [random_iri(rng)])
        g.insert(Triple(rng.choice(subjects), rng.choice(predicates), obj))
    return g


def random_dag_schema(rng: random.Random, max_classes: int = 20, max_edges: int = 40):
    """A subclass DAG plus a few properties with random domains/ranges."""
    n = rng.randint(1, max_classes)
    classes = [IRI(f"http://ex.org/C{i}") for i in range(n)]
    order = classes[:]
    rng.shuffle(order)
    g = Graph(Triple(c, RDF.type, OWL.Class) for c in classes)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in rng.sample(pairs, min(len(pairs), rng.randint(0, max_edges))):
        g.insert(Triple(order[i], RDFS.subClassOf, order[j]))
    props = [IRI(f"http://ex.org/p{i}") for i in range(rng.randint(1, 5))]
    for p in props:
        g.insert(Triple(p, RDF.type, OWL.ObjectProperty))
        if rng.random() < 0.7:
            g.insert(Triple(p, RDFS.domain, rng.choice(classes)))
        if rng.random() < 0.7:
            g.insert(Triple(p, RDFS.range, rng.choice(classes)))
    return g, classes, props


def random_abox(rng: random.Random, classes, props, max_individuals: int = 30, max_assertions: int = 60) -> Graph:
    people = [IRI(f"http://ex.org/x{i}") for i in range(rng.randint(1, max_individuals))]
    g = Graph()
    for x in people:
        if rng.random() < 0.5:
            g.insert(Triple(x, RDF.type, rng.choice(classes)))
    for _ in range(rng.randint(0, max_assertions)):
        obj = Literal(f"v{rng.randint(0, 9)}") if rng.random() < 0.15 else rng.choice(people)
        g.insert(Triple(rng.choice(people), rng.choice(props), obj))
    return g


def small_graph(rng: random.Random, max_triples: int = 100):
    """Dense graph over small term pools so that joins produce results."""
    iris = [IRI(f"http://q.org/n{i}") for i in range(6)]
    preds = [IRI(f"http://q.org/p{i}") for i in range(3)]
    lits = [Literal("a"), Literal("b", lang="en"), Literal("1", XSD.integer)]
    g = Graph()
    for _ in range(rng.randint(0, max_triples)):
        g.insert(Triple(rng.choice(iris), rng.choice(preds), rng.choice(iris + lits)))
    return g, iris, preds, lits


def random_query(rng: random.Random, iris, preds, lits):
    """1-3 triple patterns over at most three variables, sometimes filtered."""
    pool = [Variable(n) for n in "abc"]

    def slot(choices):
        return rng.choice(pool) if rng.random() < 0.6 else rng.choice(choices)

    patterns = [TriplePattern(slot(iris), slot(preds), slot(iris + lits))
                for _ in range(rng.randint(1, 3))]
    used = sorted({v for p in patterns for v in p.variables()}, key=lambda v: v.name)
    if not used:
        v = rng.choice(pool)
        patterns[0] = TriplePattern(v, patterns[0].predicate, patterns[0].object)
        used = [v]
    projection = rng.sample(used, rng.randint(1, len(used)))
    filters = []
    if rng.random() < 0.3:
        v = rng.choice(used)
        if rng.random() < 0.5:
            filters.append(Equality(v, rng.choice(iris + lits)))
        else:
            filters.append(InSet(v, tuple(rng.sample(iris + lits, 3))))
    return SelectQuery(tuple(projection), tuple(patterns), tuple(filters))
