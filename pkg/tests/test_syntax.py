"""Terms, sorts, printing and parsing."""

import pytest
from hypothesis import given, settings, strategies as st

from ledisplay.signature import FAM_F, FAM_G
from ledisplay.syntax import (Atom, Top, Bot, Meet, Join, App, SApp, MetaVar,
							  Sequent, SortError, ParseError, arg_sort,
							  check_sequent, complexity, complexity_term,
							  parse_formula, parse_sequent, print_sequent,
							  print_term, print_structure)
from ledisplay.bundles import load_bundle

FL = load_bundle("fl").sig
ORTHO = load_bundle("ortho").sig


def formulas(sig):
	"""Random well-formed formulas over a signature's base connectives."""
	leaves = st.one_of(
		st.sampled_from("pqr").map(Atom),
		st.just(Top()), st.just(Bot()))
	base = [c for c in sig.connectives if c.is_base]

	def extend(children):
		ops = [st.tuples(children, children).map(lambda ab: Meet(*ab)),
			   st.tuples(children, children).map(lambda ab: Join(*ab))]
		for c in base:
			ops.append(st.tuples(*[children] * c.arity)
					   .map(lambda args, n=c.name: App(n, tuple(args))))
		return st.one_of(ops)
	return st.recursive(leaves, extend, max_leaves=8)


@settings(max_examples=120, deadline=None)
@given(formulas(FL))
def test_parse_print_round_trip(phi):
	text = print_term(phi)
	assert parse_formula(text, FL) == phi


@settings(max_examples=120, deadline=None)
@given(formulas(FL), formulas(FL))
def test_sequent_round_trip_and_sorts(a, b):
	seq = Sequent(a, b)
	check_sequent(seq, FL)
	assert parse_sequent(print_sequent(seq, FL), FL) == seq


def test_precedence_and_associativity():
	phi = parse_formula("p & q & r | p", FL)
	assert phi == Join(Meet(Meet(Atom("p"), Atom("q")), Atom("r")), Atom("p"))
	assert parse_formula("p | q & r", FL) == \
		Join(Atom("p"), Meet(Atom("q"), Atom("r")))


def test_structural_parsing_and_printing():
	seq = parse_sequent("F.circ(p, F.circ(q, r)) => G.under(p, q)", FL)
	assert isinstance(seq.ante, SApp) and seq.ante.conn == "circ"
	assert print_sequent(seq, FL) == \
		"F.circ(p, F.circ(q, r)) => G.under(p, q)"
	# residual names parse with their dotted suffix
	seq2 = parse_sequent("p => G.circ.r1(q, r)", FL)
	assert seq2.succ.conn == "circ.r1"


def test_sort_errors():
	# under is a G-connective: its structural form cannot sit in the
	# antecedent, and circ's cannot sit in the succedent
	with pytest.raises((ParseError, SortError)):
		parse_sequent("G.under(p, q) => q", FL)
	with pytest.raises((ParseError, SortError)):
		parse_sequent("p => F.circ(p, q)", FL)
	# under's first coordinate is order-type d: its argument sort flips,
	# so an F-structural fits there and a G-structural does not
	parse_sequent("p => G.under(F.circ(p, q), r)", FL)
	with pytest.raises((ParseError, SortError)):
		parse_sequent("p => G.under(G.under(p, q), r)", FL)


def test_parse_errors():
	for bad in ["", "p =>", "=> p", "p => q => r", "circ(p) => q",
				"nosuch(p, q) => q", "p & => q", "p => (q"]:
		with pytest.raises(ParseError):
			parse_sequent(bad, FL)


def test_pattern_mode():
	seq = parse_sequent("F.circ(X1, X2) => Y1", FL, patterns=True)
	assert seq.ante.args[0] == MetaVar("X1", "structure", FAM_F)
	assert seq.succ == MetaVar("Y1", "structure", FAM_G)
	p = parse_formula("phi1 & phi2", FL, patterns=True)
	assert p.left == MetaVar("phi1", "formula")
	# metavariables are rejected outside pattern mode
	with pytest.raises(ParseError):
		parse_sequent("X1 => Y1", FL)


def test_arg_sort():
	assert arg_sort(FAM_F, 1) == FAM_F
	assert arg_sort(FAM_F, "d") == FAM_G
	assert arg_sort(FAM_G, 1) == FAM_G
	assert arg_sort(FAM_G, "d") == FAM_F


def test_complexity():
	assert complexity_term(Atom("p")) == 0
	assert complexity_term(parse_formula("T", FL)) == 1
	assert complexity_term(parse_formula("circ(p, e())", FL)) == 2
	assert complexity(parse_sequent("p & q => under(p, q | r)", FL)) == 3
	# structural and operational occurrences weigh the same
	a = parse_sequent("circ(p, q) => r", FL)
	b = parse_sequent("F.circ(p, q) => r", FL)
	assert complexity(a) == complexity(b) == 1


@settings(max_examples=80, deadline=None)
@given(formulas(ORTHO))
def test_round_trip_other_signature(phi):
	assert parse_formula(print_term(phi), ORTHO) == phi
