import pytest

from stratos.atoms import atom
from stratos.errors import LevelMismatch, ParseError
from stratos.models import Prepoint, sat
from stratos.sugar import complement, every, intersect, teq, tin, union
from stratos.syntax import (
    generator, parse_atom, parse_pred, parse_sequent, parse_set, parse_subst_expr, parse_term,
)
from stratos.terms import BOT, TOP, And, Atm, Neg, contains, empty, full, iff, imp, numeral, or_

P, S = parse_pred, parse_set
X, Y = generator("X"), generator("Y")


def test_atoms_and_generators():
    assert parse_atom("b3@-1") == atom("b3@-1")
    assert X == P("elt(atm(x@0), x@1)")
    assert P("X") == X


def test_sugar_keywords():
    assert P("top") == TOP and P("bot") == BOT
    assert P("and{X; Y}") == And((X, Y))
    assert P("or{X; Y}") == or_(X, Y) == P("or(X, Y)")
    assert P("imp(X, Y)") == imp(X, Y) == P("X -> Y")
    assert P("iff(X, Y)") == iff(X, Y) == P("X <-> Y")
    assert P("X -> Y -> X") == imp(X, imp(Y, X))
    assert P("neg neg X") == Neg(Neg(X))
    b = Atm(atom("b@0"))
    assert P("tin(atm(b@0), full@1)") == tin(b, full(1))
    assert P("teq(atm(b@0), atm(c@0))") == teq(b, Atm(atom("c@0")))


def test_set_forms():
    assert S("a@1") == Atm(atom("a@1"))
    assert S("empty@2") == empty(2) and S("full@2") == full(2)
    assert S("num(2)@4") == numeral(2, 4)
    assert S("contains(full@0)") == contains(full(0))
    assert S("complement(full@1)") == complement(full(1))
    assert S("intersect{full@1; empty@1}") == intersect([full(1), empty(1)])
    assert S("union{}@1") == union([], 1)
    assert S("every [c@0] [d@0] elt(atm(d@0), c@1)") == every(atom("c@0"), S("[d@0] elt(atm(d@0), c@1)"))


def test_sugar_semantics():
    y = Atm(atom("q@0"))
    p = Prepoint()
    assert not sat(p, tin(y, S("intersect{full@1; empty@1}")))
    assert sat(p, tin(y, S("union{full@1; empty@1}")))
    assert sat(p, tin(y, S("complement(empty@1)")))


def test_terms_and_substitutions():
    assert parse_term("[a@0] top") == S("[a@0] top")
    assert parse_term("neg X") == Neg(X)
    t, blocks = parse_subst_expr("elt(atm(b@-3), a@-2) [a@-2 := full@-2] [c@0 :=theta atm(d@0)]")
    assert t == P("elt(atm(b@-3), a@-2)")
    assert [b.theta_closed for b in blocks] == [False, True]


def test_sequents():
    assert parse_sequent("|-") == ([], [])
    assert parse_sequent("X, Y |- X") == ([X, Y], [X])
    assert parse_sequent("|- X -> X") == ([], [imp(X, X)])


@pytest.mark.parametrize("bad", [
    "elt(atm(a@0)", "and{X; }", "neg", "foo(X)", "X Y", "all [a] X", "[a@1 top",
])
def test_parse_errors_point_at_the_problem(bad):
    with pytest.raises(ParseError) as e:
        parse_term(bad)
    assert "<HERE>" in str(e.value)


def test_level_errors():
    with pytest.raises(LevelMismatch):
        P("elt(atm(a@0), b@2)")
    with pytest.raises(LevelMismatch):
        parse_subst_expr("X [x@1 := full@2]")
