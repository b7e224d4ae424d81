"""Backward search, quotients, proofs, decisions, forward generation."""

import pytest

from ledisplay.syntax import Atom, SApp, Sequent, parse_sequent, print_sequent
from ledisplay.search import (Decision, Quotient, StarParityQuotient,
							  backward_closure, complexity_certificate,
							  decide, derivable_set, derive_cutfree,
							  forward_generate, get_quotient, replay,
							  STATUS_DERIVABLE, STATUS_UNDERIVABLE,
							  STATUS_UNSUPPORTED)
from ledisplay.calculus import base_rules, load_rules
from ledisplay.bundles import load_bundle

BUNDLES = {}


def bundle(name):
	if name not in BUNDLES:
		BUNDLES[name] = load_bundle(name)
	return BUNDLES[name]


DERIVABILITY = [
	("lattice", "p & q => q | r", True),
	("lattice", "p => p & q", False),
	("lattice", "p & (q | r) => (p & q) | (p & r)", False),
	("modal-epistemic", "box(p) & box(q) => box(p & q)", True),
	("modal-epistemic", "dia(p | q) => dia(p) | dia(q)", True),
	("modal-epistemic", "dia(box(p)) => box(dia(p))", False),
	("fl", "circ(p, q) => circ(q, p)", True),
	("fl", "circ(p, q) => p", True),
	("fl-base", "circ(p, q) => circ(q, p)", False),
	("fl-base", "e() => under(p, p)", False),
	("ortho", "p => not(not(p))", True),
	("ortho", "not(not(p)) => p", True),
	("ortho", "not(p | q) => not(p) & not(q)", True),
	("ortho", "p & not(p) => zero()", True),
	("ortho", "p & (q | r) => (p & q) | (p & r)", False),
	("ortho", "p => not(p)", False),
]


@pytest.mark.parametrize("name,text,expected", DERIVABILITY)
def test_derivability(name, text, expected):
	b = bundle(name)
	goal = parse_sequent(text, b.sig)
	proof, closure = derive_cutfree(goal, b.rules, b.quotient)
	assert (proof is not None) == expected
	if proof is not None:
		assert replay(proof, b.rules, b.quotient)
		assert proof.sequent == b.quotient.canonical(goal)


def test_closure_properties():
	b = bundle("lattice")
	goal = parse_sequent("p & q => q | r", b.sig)
	closure = backward_closure(goal, b.rules, b.quotient)
	assert closure.complete
	assert closure.goal in closure.nodes
	# every recorded premise is itself a closure node
	for node, options in closure.edges.items():
		assert node in closure.nodes
		for _, prems in options:
			for p in prems:
				assert p in closure.nodes
	depths = derivable_set(closure)
	assert closure.goal in depths
	# depths are consistent: some option's premises sit strictly lower
	for node, d in depths.items():
		if d == 1:
			continue
		assert any(all(depths.get(p, 10 ** 9) < d for p in prems)
				   for _, prems in closure.edges[node])


def test_budget_exhaustion_is_reported():
	b = bundle("fl")
	goal = parse_sequent("circ(p, q) => circ(q, p)", b.sig)
	closure = backward_closure(goal, b.rules, b.quotient, budget=3)
	assert not closure.complete


def test_replay_rejects_tampered_proofs():
	b = bundle("lattice")
	goal = parse_sequent("p & q => q | r", b.sig)
	proof, _ = derive_cutfree(goal, b.rules, b.quotient)
	bad = type(proof)(proof.sequent, "meet.right", proof.children)
	assert not replay(bad, b.rules, b.quotient)
	wrong_seq = type(proof)(parse_sequent("p => q", b.sig), proof.rule,
							proof.children)
	assert not replay(wrong_seq, b.rules, b.quotient)


def test_star_parity_quotient():
	b = bundle("ortho")
	q = get_quotient("star-parity")
	assert isinstance(q, StarParityQuotient)

	def ante(text):
		return parse_sequent(text + " => q", b.sig).ante

	def succ(text):
		return parse_sequent("p => " + text, b.sig).succ

	# residuals rename onto the negations themselves
	assert q.canonical_term(ante("F.notf.r1(p)")) == ante("F.notf(p)")
	assert q.canonical_term(succ("G.not.l1(q)")) == succ("G.not(q)")
	# double-negation structures collapse in both parities
	assert q.canonical_term(ante("F.notf(G.not(p))")) == Atom("p")
	assert q.canonical_term(succ("G.not(F.notf(q))")) == Atom("q")
	nested = ante("F.notf(G.not(F.notf(G.not(p))))")
	assert q.canonical_term(nested) == Atom("p")
	# canonicalization is idempotent
	t = ante("F.notf(G.not(F.notf(q)))")
	assert q.canonical_term(t) == ante("F.notf(q)")
	assert q.canonical_term(q.canonical_term(t)) == q.canonical_term(t)


def test_quotient_matching_sees_collapsed_instances():
	b = bundle("ortho")
	q = b.quotient
	pat = parse_sequent("F.notf(G.not(X1)) => Y1", b.sig, patterns=True)
	target = parse_sequent("p => q", b.sig)
	results = q.matches(pat, target)
	assert any(m.get("X1") == Atom("p") and m.get("Y1") == Atom("q")
			   for m in results)
	# the identity quotient finds no such match
	assert Quotient().matches(pat, target) == []


def test_complexity_certificate():
	for name in ("lattice", "modal-epistemic", "fl-base", "fl", "lg",
				 "lg-grishin"):
		b = bundle(name)
		ok, failing = complexity_certificate(b.rules, b.quotient)
		assert ok, failing
	ortho = bundle("ortho")
	ok, failing = complexity_certificate(ortho.rules, ortho.quotient)
	assert not ok and failing


def test_decide_statuses():
	fl = bundle("fl")
	d = decide(parse_sequent("circ(p, q) => circ(q, p)", fl.sig), fl.rules,
			   fl.quotient)
	assert d.status == STATUS_DERIVABLE and d.proof is not None
	d = decide(parse_sequent("circ(p, q) => under(p, q)", fl.sig), fl.rules,
			   fl.quotient)
	assert d.status == STATUS_UNDERIVABLE and d.closure.complete
	# no certificate and no vouching: refuse a verdict
	ortho = bundle("ortho")
	goal = parse_sequent("p => not(p)", ortho.sig)
	d = decide(goal, ortho.rules, ortho.quotient)
	assert d.status == STATUS_UNSUPPORTED and "certificate" in d.reason
	d = decide(goal, ortho.rules, ortho.quotient, assume_finite_closure=True)
	assert d.status == STATUS_UNDERIVABLE
	# a certified bundle with a starved budget reports unsupported
	d = decide(parse_sequent("circ(p, q) => circ(q, p)", fl.sig), fl.rules,
			   fl.quotient, budget=3)
	assert d.status == STATUS_UNSUPPORTED and "budget" in d.reason


def test_forward_generate_produces_replayable_proofs():
	for name in ("lattice", "fl"):
		b = bundle(name)
		trees = forward_generate(b.rules, b.sig, count=40, max_depth=4,
								 seed=7, pool_depth=1)
		assert len(trees) == 40
		for t in trees:
			assert replay(t, b.rules, b.quotient)


def test_forward_generate_deterministic():
	b = bundle("lattice")
	a = forward_generate(b.rules, b.sig, count=15, seed=3, pool_depth=1)
	c = forward_generate(b.rules, b.sig, count=15, seed=3, pool_depth=1)
	assert [t.sequent for t in a] == [t.sequent for t in c]


def test_get_quotient():
	assert get_quotient("identity").name == "identity"
	assert get_quotient("star-parity").name == "star-parity"
	with pytest.raises(KeyError):
		get_quotient("nope")
