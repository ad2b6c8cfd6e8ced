import random

import pytest
from hypothesis import given, settings, strategies as st

from cbiont.namespaces import CBIONT, RDF, RDFS, XSD
from cbiont.rdf import IRI, RDF_LANGSTRING, Graph, Literal, Triple, graph_equal
from cbiont.schema import CBI_FORM, FORM_CLASSES, build_schema

from _gen import random_graph

S = IRI("http://ex.org/s")
P = IRI("http://ex.org/p")
O = IRI("http://ex.org/o")


@pytest.mark.parametrize("value", ["", "no-scheme", "http://a b", "http://a\nb", "http://x/<y>", "http://x/\x00"])
def test_iri_rejects_malformed(value):
    with pytest.raises(ValueError):
        IRI(value)


def test_iri_equality_is_codepoint_exact():
    assert IRI("http://x/a") == IRI("http://x/a")
    assert IRI("http://x/a") != IRI("http://X/a")
    # no unicode normalization: precomposed vs combining accent
    assert IRI("http://x/\u00e9") != IRI("http://x/e\u0301")


def test_literal_defaults_and_language():
    assert Literal("x") == Literal("x", XSD.string)
    tagged = Literal("x", lang="en")
    assert tagged.datatype.value == RDF_LANGSTRING
    assert tagged != Literal("x", lang="fr")
    assert tagged != Literal("x")
    with pytest.raises(ValueError):
        Literal("x", XSD.integer, lang="en")
    with pytest.raises(ValueError):
        Literal("x", IRI(RDF_LANGSTRING))


def test_literal_rendering_escapes():
    assert Literal('a"b\\c\nd').nt() == '"a\\"b\\\\c\\nd"'
    assert Literal("\x01").nt() == '"\\u0001"'
    assert Literal("5", XSD.integer).nt() == '"5"^^<http://www.w3.org/2001/XMLSchema#integer>'


def test_triple_positions_are_checked():
    with pytest.raises(TypeError):
        Triple(Literal("s"), P, O)
    with pytest.raises(TypeError):
        Triple(S, Literal("p"), O)
    Triple(S, P, Literal("o"))


def test_insert_and_remove_examples():
    g = Graph()
    t = Triple(S, P, O)
    assert g.insert(t) is True
    assert len(g) == 1
    assert g.insert(t) is False
    assert len(g) == 1
    assert g.remove(t) is True
    assert len(g) == 0
    assert g.remove(t) is False
    assert g.insert(t) is True
    assert len(g) == 1


def test_cbi_form_subtree_inserts_fifteen_new_triples():
    # CBI_Form declaration + 7 leaf declarations + 7 subclass axioms
    expected = [Triple(CBI_FORM, RDF.type, IRI("http://www.w3.org/2002/07/owl#Class"))]
    for leaf in FORM_CLASSES:
        expected.append(Triple(leaf, RDF.type, IRI("http://www.w3.org/2002/07/owl#Class")))
        expected.append(Triple(leaf, RDFS.subClassOf, CBI_FORM))
    schema = build_schema()
    subtree = [t for t in schema
               if t.subject == CBI_FORM and t.predicate == RDF.type
               or t.object == CBI_FORM and t.predicate == RDFS.subClassOf
               or t.subject in FORM_CLASSES and t.predicate in (RDF.type, RDFS.subClassOf)]
    assert sorted(subtree, key=Triple.sort_key) == sorted(expected, key=Triple.sort_key)
    g = Graph()
    assert [g.insert(t) for t in subtree] == [True] * 15


def test_match_examples():
    assert Graph().match() == []
    hits = build_schema().match(None, RDFS.subClassOf, CBIONT.CBI_Form)
    assert len(hits) == 7


def _linear_scan(g, s, p, o):
    return sorted((t for t in g.triples()
                   if (s is None or t.subject == s) and (p is None or t.predicate == p)
                   and (o is None or t.object == o)), key=Triple.sort_key)


def _random_pattern(rng, g):
    pool = list(g.triples()) or [Triple(S, P, O)]
    t = rng.choice(pool)
    return tuple(x if rng.random() < 0.5 else None for x in t)


def test_match_agrees_with_linear_scan():
    rng = random.Random(20240601)
    for _ in range(100):
        g = random_graph(rng, 200)
        for _ in range(20):
            s, p, o = _random_pattern(rng, g)
            assert g.match(s, p, o) == _linear_scan(g, s, p, o)
        assert len(g.match()) == len(g)


def test_match_order_is_canonical():
    g = random_graph(random.Random(7), 200)
    got = g.match()
    assert got == sorted(got, key=lambda t: (t.subject.nt(), t.predicate.nt(), t.object.nt()))


def test_index_consistency_under_random_mutation():
    rng = random.Random(99)
    pool = list(random_graph(rng, 200).triples())
    g = Graph()
    mirror = set()
    for _ in range(1000):
        t = rng.choice(pool)
        if rng.random() < 0.6:
            assert g.insert(t) == (t not in mirror)
            mirror.add(t)
        else:
            assert g.remove(t) == (t in mirror)
            mirror.discard(t)
    for name in ("spo", "pos", "osp"):
        assert g._index_triples(name) == mirror
    for _ in range(100):
        s, p, o = _random_pattern(rng, g)
        assert g.match(s, p, o) == _linear_scan(g, s, p, o)


def test_graph_equal():
    assert graph_equal(Graph(), Graph())
    g = random_graph(random.Random(3), 50)
    bigger = g.copy()
    extra = Triple(IRI("http://elsewhere/x"), P, O)
    bigger.insert(extra)
    assert not graph_equal(g, bigger)
    assert graph_equal(g, g.copy())


_iris = st.sampled_from([S, P, O, IRI("urn:a"), IRI("urn:b")])
_objects = st.one_of(_iris, st.text(max_size=5).map(Literal))
_triples = st.builds(Triple, _iris, _iris, _objects)


@settings(max_examples=200, deadline=None)
@given(st.sets(_triples, max_size=20), _triples)
def test_insert_then_remove_restores(base, t):
    g = Graph(base)
    before = g.triples()
    was_new = g.insert(t)
    if was_new:
        g.remove(t)
    assert g.triples() == before
