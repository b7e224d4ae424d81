"""Generated calculi, matching, and the analyticity checker."""

import pytest
from hypothesis import given, settings, strategies as st

from ledisplay.signature import FAM_F, FAM_G
from ledisplay.syntax import Atom, App, SApp, MetaVar, Sequent, parse_sequent
from ledisplay.calculus import (KLASS_AXIOM, KLASS_CUT, KLASS_DISPLAY,
								KLASS_INTRO, KLASS_STRUCTURAL, base_rules,
								check_analytic, instantiate, load_rules,
								match, metavars)
from ledisplay.bundles import load_bundle
from tests.test_syntax import formulas

FL = load_bundle("fl").sig
MODAL = load_bundle("modal-epistemic").sig

LATTICE_CORE = ["id", "cut", "bot.left", "top.right", "meet.left.1",
				"meet.left.2", "join.right.1", "join.right.2", "meet.right",
				"join.left"]


def names(rules):
	return [r.name for r in rules]


def test_lattice_calculus_is_exactly_the_core():
	sig = load_bundle("lattice").sig
	assert names(base_rules(sig)) == LATTICE_CORE


def test_modal_calculus_adds_display_and_intro_rules():
	got = names(base_rules(MODAL))
	assert got[:len(LATTICE_CORE)] == LATTICE_CORE
	assert set(got) - set(LATTICE_CORE) == {
		"disp.dia.1.out", "disp.dia.1.in", "dia.left", "dia.right",
		"disp.box.1.out", "disp.box.1.in", "box.left", "box.right"}


def test_display_pairs_are_invertible_partners():
	rules = {r.name: r for r in base_rules(FL)}
	for name, rule in rules.items():
		if rule.klass != KLASS_DISPLAY:
			continue
		assert rule.invertible
		partner = rules[rule.partner]
		assert partner.partner == name
		# each direction has one premise: the other direction's conclusion
		assert len(rule.premises) == 1
		assert rule.premises[0] == partner.conclusion
		assert partner.premises[0] == rule.conclusion


def test_display_pair_shapes():
	rules = {r.name: r for r in base_rules(FL)}
	out = rules["disp.circ.1.out"]
	assert out.premises[0] == parse_sequent(
		"F.circ(X1, X2) => Y1", FL, patterns=True)
	assert out.conclusion == parse_sequent(
		"X1 => G.circ.r1(Y1, X2)", FL, patterns=True)
	# under's first coordinate has order-type d: the displayed residual
	# stays on the succedent side and in the G family
	u = rules["disp.under.1.out"]
	assert u.premises[0] == parse_sequent(
		"X2 => G.under(X1, Y1)", FL, patterns=True)
	assert u.conclusion == parse_sequent(
		"X1 => G.under.l1(X2, Y1)", FL, patterns=True)


def test_intro_rule_shapes():
	rules = {r.name: r for r in base_rules(FL)}
	left = rules["circ.left"]
	assert left.klass == KLASS_INTRO
	assert left.premises[0] == parse_sequent(
		"F.circ(phi1, phi2) => Y0", FL, patterns=True)
	assert left.conclusion == parse_sequent(
		"circ(phi1, phi2) => Y0", FL, patterns=True)
	right = rules["circ.right"]
	assert list(right.premises) == [
		parse_sequent("X1 => phi1", FL, patterns=True),
		parse_sequent("X2 => phi2", FL, patterns=True)]
	assert right.conclusion == parse_sequent(
		"F.circ(X1, X2) => circ(phi1, phi2)", FL, patterns=True)
	# under has order-type (d, 1): its right-intro premises flip in the
	# first coordinate, mirrored on the left for the G-family
	uleft = rules["under.left"]
	assert list(uleft.premises) == [
		parse_sequent("X1 => phi1", FL, patterns=True),
		parse_sequent("phi2 => Y1", FL, patterns=True)]
	assert uleft.conclusion == parse_sequent(
		"under(phi1, phi2) => G.under(X1, Y1)", FL, patterns=True)


def test_match_basics():
	pat = parse_sequent("F.circ(X1, X1) => Y1", FL, patterns=True)
	ok = parse_sequent("F.circ(p, p) => q", FL)
	bad = parse_sequent("F.circ(p, q) => q", FL)
	b = match(pat, ok)
	assert b == {"X1": Atom("p"), "Y1": Atom("q")}
	assert match(pat, bad) is None
	# formula metavariables refuse structural material
	fpat = parse_sequent("phi1 => Y1", FL, patterns=True)
	assert match(fpat, parse_sequent("circ(p, q) => r", FL)) is not None
	assert match(fpat, parse_sequent("F.circ(p, q) => r", FL)) is None


def test_instantiate_unbound_raises():
	pat = parse_sequent("X1 => Y1", FL, patterns=True)
	with pytest.raises(KeyError):
		instantiate(pat, {"X1": Atom("p")})


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_instantiate_then_match_recovers_bindings(data):
	rules = [r for r in base_rules(FL) if r.klass != KLASS_AXIOM]
	rule = data.draw(st.sampled_from(rules))
	vs = metavars(rule.conclusion)
	bindings = {v: data.draw(formulas(FL), label=v) for v in vs}
	inst = instantiate(rule.conclusion, bindings)
	got = match(rule.conclusion, inst)
	assert got is not None
	# matching may bind structure variables to larger pieces only when
	# the instantiation collides; binding back the original always works
	assert instantiate(rule.conclusion, got) == inst


def test_check_analytic_good_rules():
	fl = load_bundle("fl")
	for rule in fl.rules:
		if rule.klass == KLASS_STRUCTURAL:
			assert check_analytic(rule, fl.sig) == []


def test_check_analytic_violations():
	sig = FL

	def rule_of(premises, conclusion):
		loaded = load_rules(
			{"rules": [{"name": "t", "premises": premises,
						"conclusion": conclusion}]}, sig, allow_unsafe=True)
		return loaded[0]

	r = rule_of(["X1 => Y2"], "X1 => Y1")
	assert any(v.startswith("C1") for v in check_analytic(r, sig))
	r = rule_of([], "F.circ(X1, X1) => Y1")
	assert any(v.startswith("C3") for v in check_analytic(r, sig))
	# C4 cannot be triggered by well-sorted input: order-type-d slots
	# flip sort and polarity together, so sort pins the polarity down
	r = rule_of(["phi1 => Y1"], "phi1 => Y1")
	assert any(v.startswith("C6/C7") for v in check_analytic(r, sig))
	r = rule_of([], "circ(p, q) => Y1")
	assert any("operational" in v for v in check_analytic(r, sig))


def test_load_rules_rejects_non_analytic_by_default():
	with pytest.raises(ValueError):
		load_rules({"rules": [{"name": "orphan", "premises": ["X1 => Y2"],
							   "conclusion": "X1 => Y1"}]}, FL)


def test_load_rules_invertible_expansion():
	loaded = load_rules({"rules": [{
		"name": "assoc",
		"premises": ["F.circ(F.circ(X1, X2), X3) => Y1"],
		"conclusion": "F.circ(X1, F.circ(X2, X3)) => Y1",
		"invertible": True}]}, FL)
	assert names_pair(loaded) == ["assoc", "assoc.inv"]
	fwd, bwd = loaded
	assert fwd.partner == "assoc.inv" and bwd.partner == "assoc"
	assert bwd.premises[0] == fwd.conclusion
	assert bwd.conclusion == fwd.premises[0]
	with pytest.raises(ValueError):
		load_rules({"rules": [{"name": "x", "premises": [],
							   "conclusion": "X1 => Y1",
							   "invertible": True}]}, FL)


def names_pair(rules):
	return [r.name for r in rules]
