"""Self-check suite: one function per acceptance property.

Each criterion function returns (passed, detail). `run_all` prints one
PASS/FAIL line per criterion and returns True when everything passed. The
same functions back the packaged test suite, so `ledisplay selftest` and
pytest agree by construction.
"""

import random
import time

from .signature import ONE, DUAL, FAM_F, FAM_G
from .syntax import (Atom, Top, Bot, Meet, Join, App, Sequent, complexity,
					 parse_sequent, print_sequent)
from .calculus import (KLASS_DISPLAY, KLASS_STRUCTURAL, RuleSchema,
					   check_analytic, load_rules)
from .classify import find_witness
from .search import (decide, derive_cutfree, derivable_set, forward_generate,
					 replay, STATUS_DERIVABLE, STATUS_UNDERIVABLE)
from .frames import (LEFrame, Polarity, build_countermodel,
					 check_rule_validity, export_countermodel, op_apply,
					 replay_countermodel, section0, section_i)
from .bundles import list_bundles, load_bundle

ALL_BUNDLES = ("lattice", "modal-epistemic", "fl-base", "fl", "lg",
			   "lg-grishin", "ortho")
CERTIFIED_BUNDLES = ("lattice", "modal-epistemic", "fl-base", "fl", "lg",
					 "lg-grishin")


def basic_axioms(sig):
	"""The axiom sequents of the basic logic of a signature: the lattice
	laws plus, per base connective and coordinate, the distribution or
	unit law that its order-type entry dictates."""
	p, q = Atom("p"), Atom("q")
	out = [
		Sequent(p, p),
		Sequent(Bot(), p),
		Sequent(p, Top()),
		Sequent(p, Join(p, q)),
		Sequent(q, Join(p, q)),
		Sequent(Meet(p, q), p),
		Sequent(Meet(p, q), q),
	]
	for c in sig.connectives:
		if not c.is_base or c.arity == 0:
			continue
		for i in range(c.arity):
			def at(slot_val, pos=i):
				args = [Atom("x%d" % (j + 1)) for j in range(c.arity)]
				args[pos] = slot_val
				return App(c.name, tuple(args))
			e = c.order_type[i]
			if c.family == FAM_F:
				if e == ONE:
					out.append(Sequent(at(Bot()), Bot()))
					out.append(Sequent(at(Join(p, q)),
									   Join(at(p), at(q))))
				else:
					out.append(Sequent(at(Top()), Bot()))
					out.append(Sequent(at(Meet(p, q)),
									   Join(at(p), at(q))))
			else:
				if e == ONE:
					out.append(Sequent(Top(), at(Top())))
					out.append(Sequent(Meet(at(p), at(q)),
									   at(Meet(p, q))))
				else:
					out.append(Sequent(Top(), at(Bot())))
					out.append(Sequent(Meet(at(p), at(q)),
									   at(Join(p, q))))
	return out


def criterion_1():
	"""Every basic-logic axiom of every bundle is cut-free derivable."""
	failures = []
	for name in ALL_BUNDLES:
		b = load_bundle(name)
		for ax in basic_axioms(b.sig):
			t0 = time.time()
			proof, _ = derive_cutfree(ax, b.rules, b.quotient)
			dt = time.time() - t0
			if proof is None or dt >= 1.0:
				failures.append("%s: %s (%s, %.2fs)"
								% (name, print_sequent(ax, b.sig),
								   "no proof" if proof is None else "slow",
								   dt))
	return not failures, "; ".join(failures) or \
		"all basic axioms derivable in every bundle"


def criterion_2(count=200):
	"""Forward-generated proofs (cut included) have cut-free re-derivable
	endsequents."""
	failures = []
	totals = []
	for name in ALL_BUNDLES:
		b = load_bundle(name)
		t0 = time.time()
		trees = forward_generate(b.rules, b.sig, count=count, max_depth=5,
								 seed=17, pool_depth=1)
		if len(trees) < count:
			failures.append("%s: only %d proofs generated" % (name, len(trees)))
		bad_replay = sum(not replay(t, b.rules, b.quotient) for t in trees)
		if bad_replay:
			failures.append("%s: %d proofs fail replay" % (name, bad_replay))
		redone = 0
		for t in trees:
			proof, _ = derive_cutfree(t.sequent, b.rules, b.quotient)
			if proof is not None:
				redone += 1
		if redone != len(trees):
			failures.append("%s: %d/%d endsequents not re-derived cut-free"
							% (name, len(trees) - redone, len(trees)))
		dt = time.time() - t0
		totals.append("%s %.0fs" % (name, dt))
		if dt >= 300:
			failures.append("%s: took %.0fs" % (name, dt))
	return not failures, "; ".join(failures) or \
		"%d cut-inclusive proofs per bundle re-derived cut-free (%s)" \
		% (count, ", ".join(totals))


def _random_goals(sig, rng, limit=6):
	"""Endless stream of sort-correct formula sequents of bounded
	complexity."""
	base = [c for c in sig.connectives if c.is_base]
	atoms = ["p", "q", "r"]

	def fml(depth):
		roll = rng.random()
		if depth <= 0 or roll < 0.45:
			return Atom(rng.choice(atoms))
		if roll < 0.5:
			return rng.choice([Top(), Bot()])
		choices = ["meet", "join"] + (["app"] * min(3, len(base)))
		kind = rng.choice(choices)
		if kind == "meet":
			return Meet(fml(depth - 1), fml(depth - 1))
		if kind == "join":
			return Join(fml(depth - 1), fml(depth - 1))
		c = rng.choice(base)
		return App(c.name, tuple(fml(depth - 1) for _ in range(c.arity)))

	while True:
		seq = Sequent(fml(2), fml(2))
		if complexity(seq) <= limit:
			yield seq


def criterion_3(per_bundle=50, collect=None):
	"""Underivable goals in certificate-backed bundles get countermodels
	whose exported form still refutes them."""
	failures = []
	for name in CERTIFIED_BUNDLES:
		b = load_bundle(name)
		rng = random.Random(23)
		goals = _random_goals(b.sig, rng)
		found = 0
		tried = 0
		while found < per_bundle and tried < per_bundle * 40:
			tried += 1
			goal = next(goals)
			t0 = time.time()
			d = decide(goal, b.rules, b.quotient, b.assume_finite_closure)
			if d.status != STATUS_UNDERIVABLE:
				continue
			try:
				model = build_countermodel(d.closure, derivable_set(d.closure),
										   b.sig, b.quotient)
				data = export_countermodel(model, b.sig)
				if not replay_countermodel(data, b.sig, model.goal):
					raise RuntimeError("export does not refute")
			except Exception as exc:
				failures.append("%s: %s -> %s"
								% (name, print_sequent(goal, b.sig), exc))
				found += 1
				continue
			dt = time.time() - t0
			if dt >= 30:
				failures.append("%s: %s took %.1fs"
								% (name, print_sequent(goal, b.sig), dt))
			found += 1
			if collect is not None:
				collect.append((name, b, model))
		if found < per_bundle:
			failures.append("%s: only %d underivable goals found"
							% (name, found))
	return not failures, "; ".join(failures[:5]) or \
		"%d refuted goals per certificate-backed bundle, exports replay" \
		% per_bundle


def _random_frame(sig, rng):
	nw = rng.randint(1, 5)
	nu = rng.randint(1, 5)
	W = tuple("w%d" % i for i in range(nw))
	U = tuple("u%d" % i for i in range(nu))
	N = {(w, u) for w in W for u in U if rng.random() < 0.5}
	pol = Polarity(W, U, N)
	pools = {"W": W, "U": U}
	rels = {}
	from .frames import coordinate_domains
	for c in sig.connectives:
		doms = coordinate_domains(c)
		full = [t for t in _tuples(pools, doms)]
		rels[c.name] = {t for t in full if rng.random() < 0.5}
	return LEFrame(pol, sig, rels).stabilize()


def _tuples(pools, doms):
	from itertools import product
	return product(*(pools[d] for d in doms))


def criterion_4(count=100):
	"""Operations on random stabilized frames satisfy the coordinatewise
	join-preservation and meet-to-join laws."""
	rng = random.Random(5)
	violations = 0
	checked = 0
	sig_names = ["modal-epistemic", "fl-base", "lg"]
	bundles = [load_bundle(n) for n in sig_names]
	for k in range(count):
		b = bundles[k % len(bundles)]
		frame = _random_frame(b.sig, rng)
		pol = frame.pol
		lattice = sorted(pol.stable_sets(), key=lambda s: sorted(s))
		sample = lattice if len(lattice) <= 8 else rng.sample(lattice, 8)
		for c in b.sig.connectives:
			if not c.is_base or c.arity == 0:
				continue
			for i in range(c.arity):
				fixed = [rng.choice(lattice) for _ in range(c.arity)]
				for a in sample:
					for bb in sample:
						checked += 1
						def apply_at(x):
							args = list(fixed)
							args[i] = x
							return op_apply(frame, c.name, args)
						e = c.order_type[i]
						if c.family == FAM_F:
							inp = pol.gamma(a | bb) if e == ONE else a & bb
							want = pol.gamma(apply_at(a) | apply_at(bb))
						else:
							inp = a & bb if e == ONE else pol.gamma(a | bb)
							want = apply_at(a) & apply_at(bb)
						if apply_at(inp) != want:
							violations += 1
	return violations == 0, \
		"%d operator-law checks on %d stabilized frames, %d violations" \
		% (checked, count, violations)


def criterion_5(count=500):
	"""Galois laws and the section composition law on random relations."""
	rng = random.Random(7)
	violations = 0
	for _ in range(count):
		nw = rng.randint(1, 5)
		nu = rng.randint(1, 5)
		W = tuple(range(nw))
		U = tuple("u%d" % i for i in range(nu))
		N = {(w, u) for w in W for u in U if rng.random() < 0.5}
		pol = Polarity(W, U, N)
		X = frozenset(w for w in W if rng.random() < 0.5)
		Y = frozenset(u for u in U if rng.random() < 0.5)
		if not (X <= pol.down(pol.up(X))):
			violations += 1
		if pol.gamma(pol.gamma(X)) != pol.gamma(X):
			violations += 1
		X2 = X | {rng.choice(W)} if W else X
		if not (pol.up(X2) <= pol.up(X)):
			violations += 1
		if (X <= pol.down(Y)) != (Y <= pol.up(X)):
			violations += 1
		arity = rng.randint(1, 2)
		pools = [W] + [W if rng.random() < 0.5 else U
					   for _ in range(arity)]
		from itertools import product as _prod
		rel = {t for t in _prod(*pools) if rng.random() < 0.5}
		holds = lambda t: t in rel
		args = [frozenset(x for x in pools[j + 1] if rng.random() < 0.5)
				for j in range(arity)]
		outer = section0(holds, pools[0], args)
		for i in range(1, arity + 1):
			sec = section_i(holds, i, pools[i], outer, args)
			if not (args[i - 1] <= sec):
				violations += 1
	return violations == 0, \
		"Galois + section laws on %d random relations, %d violations" \
		% (count, violations)


GRISHIN_AXIOMS = [
	# group one
	"circ(star(q, r), p) => star(q, circ(r, p))",
	"star(p, overc(r, q)) => overc(star(p, r), q)",
	"unders(p, circ(r, q)) => circ(unders(p, r), q)",
	"underc(unders(p, q), r) => underc(q, star(p, r))",
	"overs(circ(r, q), p) => overs(r, overc(p, q))",
	"circ(p, underc(r, q)) => star(overs(p, r), q)",
	# group two
	"circ(underc(q, r), p) => underc(q, circ(r, p))",
	"underc(p, overc(r, q)) => overc(underc(p, r), q)",
	"circ(p, circ(r, q)) => circ(circ(p, r), q)",
	"underc(circ(p, q), r) => underc(q, underc(p, r))",
	"overc(overc(p, q), r) => overc(p, circ(r, q))",
	"circ(p, underc(r, q)) => underc(overc(r, p), q)",
	# group three
	"overs(p, star(r, q)) => star(unders(p, r), q)",
	"star(star(p, r), q) => star(p, star(r, q))",
	"overs(unders(p, r), q) => unders(p, overs(r, q))",
	"overs(q, star(r, p)) => overs(overs(q, p), r)",
	"unders(p, unders(q, r)) => unders(star(q, p), r)",
	"unders(overs(r, q), p) => star(q, unders(r, p))",
	# group four
	"overs(underc(q, r), p) => underc(q, overs(r, p))",
	"underc(q, star(r, p)) => star(underc(q, r), p)",
	"circ(p, overs(r, q)) => overs(circ(p, r), q)",
	"unders(underc(p, r), q) => unders(r, circ(p, q))",
	"overc(star(p, q), r) => overc(p, overs(r, q))",
	"overs(p, unders(q, r)) => underc(overc(r, p), q)",
]

FL_SAMPLE = [
	"circ(p, q) => circ(q, p)",
	"circ(p, q) => p",
	"p => circ(p, p)",
	"circ(circ(p, q), r) => circ(p, circ(q, r))",
	"circ(p, circ(q, r)) => circ(circ(p, q), r)",
	"circ(e(), p) => p",
	"p => circ(e(), p)",
	"circ(p, q | r) => circ(p, q) | circ(p, r)",
	"circ(p, under(p, q)) => q",
	"circ(over(q, p), p) => q",
]

# The negation symbol has a copy in each family; double negation
# elimination is analytic when its outer occurrence is read in the
# antecedent family.
ORTHO_AXIOMS = [
	"p & not(p) => zero()",
	"zero() => p",
	"p => not(not(p))",
	"notf(not(p)) => p",
]


def criterion_6():
	"""Classification fixtures: every listed axiom has a witness, the
	modal shift axiom has none."""
	t0 = time.time()
	failures = []
	lg = load_bundle("lg")
	for txt in GRISHIN_AXIOMS:
		if find_witness(parse_sequent(txt, lg.sig), lg.sig) is None:
			failures.append("no witness: " + txt)
	fl = load_bundle("fl")
	for txt in FL_SAMPLE:
		if find_witness(parse_sequent(txt, fl.sig), fl.sig) is None:
			failures.append("no witness: " + txt)
	ortho = load_bundle("ortho")
	for txt in ORTHO_AXIOMS:
		if find_witness(parse_sequent(txt, ortho.sig), ortho.sig) is None:
			failures.append("no witness: " + txt)
	modal = load_bundle("modal-epistemic")
	if find_witness(parse_sequent("box(dia(p)) => dia(box(p))", modal.sig),
					modal.sig) is not None:
		failures.append("unexpected witness for the modal shift axiom")
	dt = time.time() - t0
	if dt >= 60:
		failures.append("suite took %.0fs" % dt)
	return not failures, "; ".join(failures) or \
		"24 + 10 + 4 axioms witnessed, modal shift axiom rejected (%.1fs)" % dt


COUNTERMODEL_GOALS = {
	"lattice": ["p => q", "p | q => p & q"],
	"modal-epistemic": ["p => q", "dia(p) => p", "p => box(p)"],
	"fl-base": ["p => q", "circ(p, q) => p", "p => under(p, q)"],
	"fl": ["p => q", "p => circ(p, p)", "p => under(p, q)"],
	"lg": ["p => q", "p => star(p, q)", "circ(p, q) => q"],
	"lg-grishin": ["p => q", "p => star(p, q)", "circ(p, q) => q"],
	"ortho": ["p => q", "p => not(p)"],
}


def criterion_7(bound=64):
	"""Structural and display rules are valid in built countermodels."""
	failures = []
	checked = 0
	for name, goals in COUNTERMODEL_GOALS.items():
		b = load_bundle(name)
		for txt in goals:
			goal = parse_sequent(txt, b.sig)
			d = decide(goal, b.rules, b.quotient, b.assume_finite_closure)
			if d.status != STATUS_UNDERIVABLE:
				failures.append("%s: %s unexpectedly %s"
								% (name, txt, d.status))
				continue
			model = build_countermodel(d.closure, derivable_set(d.closure),
									   b.sig, b.quotient)
			try:
				lattice = model.frame.pol.stable_sets(bound=bound)
			except ValueError:
				continue
			if len(lattice) > bound:
				continue
			for rule in b.rules:
				if rule.klass not in (KLASS_DISPLAY, KLASS_STRUCTURAL):
					continue
				checked += 1
				if not check_rule_validity(model.frame, rule, bound=bound):
					failures.append("%s: rule %s invalid in countermodel "
									"of %s" % (name, rule.name, txt))
	return not failures, "; ".join(failures[:5]) or \
		"%d rule-validity checks across bundled countermodels, 0 violations" \
		% checked


def criterion_8():
	"""Orthologic end to end: double negation both ways derivable,
	distributivity refuted by a countermodel under the parity quotient."""
	t0 = time.time()
	failures = []
	b = load_bundle("ortho")
	for txt in ("p => not(not(p))", "not(not(p)) => p"):
		proof, _ = derive_cutfree(parse_sequent(txt, b.sig), b.rules,
								  b.quotient)
		if proof is None:
			failures.append("not derivable: " + txt)
	dist = parse_sequent("p & (q | r) => (p & q) | (p & r)", b.sig)
	d = decide(dist, b.rules, b.quotient, b.assume_finite_closure)
	if d.status != STATUS_UNDERIVABLE:
		failures.append("distributivity: expected underivable, got "
						+ d.status)
	else:
		model = build_countermodel(d.closure, derivable_set(d.closure),
								   b.sig, b.quotient)
		data = export_countermodel(model, b.sig)
		if not replay_countermodel(data, b.sig, model.goal):
			failures.append("distributivity countermodel does not replay")
	dt = time.time() - t0
	if dt >= 60:
		failures.append("took %.0fs" % dt)
	return not failures, "; ".join(failures) or \
		"double negation derivable, distributivity refuted (%.1fs)" % dt


SECTION_RULE = {
	"name": "fusion-shift",
	"premises": ["F.unders(Y1, F.circ(X1, X2)) => Y2"],
	"conclusion": "F.circ(F.unders(Y1, X1), X2) => Y2",
}

BAD_C1_RULE = {
	"name": "orphan-variable",
	"premises": ["X1 => Y2"],
	"conclusion": "X1 => Y1",
}

BAD_C3_RULE = {
	"name": "duplicating",
	"premises": ["F.circ(X1, X1) => Y1"],
	"conclusion": "F.circ(X1, X1) => Y1",
}


def criterion_9():
	"""Analyticity checker: the worked example rule and all bundled rules
	pass; synthetic violations are reported with the right condition."""
	failures = []
	lg = load_bundle("lg")
	try:
		rules = load_rules({"rules": [SECTION_RULE]}, lg.sig)
	except ValueError as exc:
		failures.append("example rule rejected: %s" % exc)
		rules = []
	for name in ALL_BUNDLES:
		b = load_bundle(name)
		for rule in b.rules:
			if rule.klass != KLASS_STRUCTURAL:
				continue
			problems = check_analytic(rule, b.sig)
			if problems:
				failures.append("%s/%s: %s" % (name, rule.name, problems))
	bad1 = load_rules({"rules": [BAD_C1_RULE]}, lg.sig, allow_unsafe=True)
	msgs = check_analytic(bad1[0], lg.sig)
	if not any(m.startswith("C1") for m in msgs):
		failures.append("missing C1 violation: %s" % msgs)
	bad3 = load_rules({"rules": [BAD_C3_RULE]}, lg.sig, allow_unsafe=True)
	msgs = check_analytic(bad3[0], lg.sig)
	if not any(m.startswith("C3") for m in msgs):
		failures.append("missing C3 violation: %s" % msgs)
	return not failures, "; ".join(failures) or \
		"example and bundled rules analytic; C1/C3 violations flagged"


CRITERIA = [
	("1 basic-axiom derivability", criterion_1),
	("2 empirical cut elimination", criterion_2),
	("3 countermodels for underivable goals", criterion_3),
	("4 operator laws on stabilized frames", criterion_4),
	("5 Galois and section laws", criterion_5),
	("6 classification regression", criterion_6),
	("7 rule validity in countermodels", criterion_7),
	("8 orthologic end to end", criterion_8),
	("9 analyticity checker", criterion_9),
]


def run_all(out=print):
	ok = True
	for label, fn in CRITERIA:
		t0 = time.time()
		passed, detail = fn()
		ok = ok and passed
		out("%s  criterion %s: %s (%.1fs)"
			% ("PASS" if passed else "FAIL", label, detail,
			   time.time() - t0))
	return ok
