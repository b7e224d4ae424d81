"""Polarity frames, complex-algebra evaluation, countermodels.

A polarity is a bipartite incidence structure (W, U, N) with the usual
Galois connection between subsets of W and of U; Galois-stable subsets of W
form a complete lattice. A frame adds one relation per connective:
antecedent-family connectives relate an attribute to an argument tuple
(coordinate j drawn from W when the order-type entry is 1, from U when it
is d), succedent-family connectives dually relate an object to a tuple.

Operations: an antecedent-family connective maps stable sets to the Galois
down-set of the attributes related to every transformed argument tuple; a
succedent-family connective maps them to the objects related to every
transformed tuple. Relations can be materialized tuple sets (random frames,
stabilized so the operations are normal) or predicates (countermodels).

Countermodels come out of a saturated backward search that failed: objects
are the antecedents reached, attributes the succedents, incidence is
"derivable or never reached", relations are read off the same recipe, and
the refuted goal is re-checked semantically before the model is returned.
"""

from dataclasses import dataclass
from itertools import product

from .signature import ONE, FAM_F, FAM_G
from .syntax import (Atom, Top, Bot, Meet, Join, App, SApp, MetaVar, Sequent,
					 print_structure, is_formula)
from .calculus import metavars, instantiate

SINK_W = ("sink", "W")
SINK_U = ("sink", "U")


class Polarity:
	"""Objects W, attributes U, incidence N as a set of (w, u) pairs."""

	def __init__(self, W, U, N):
		self.W = tuple(W)
		self.U = tuple(U)
		self.N = set(N)
		self._stable_cache = None

	def up(self, X):
		return frozenset(u for u in self.U
						 if all((w, u) in self.N for w in X))

	def down(self, Y):
		return frozenset(w for w in self.W
						 if all((w, u) in self.N for u in Y))

	def gamma(self, X):
		return self.down(self.up(X))

	def top(self):
		return frozenset(self.W)

	def bottom(self):
		return self.down(frozenset(self.U))

	def stable_sets(self, bound=2 ** 16):
		"""All Galois-stable subsets of W: the meet-closure of the
		attribute extents together with W itself."""
		if self._stable_cache is not None:
			return self._stable_cache
		sets = {self.top()}
		for u in self.U:
			sets.add(self.down(frozenset([u])))
		changed = True
		while changed:
			changed = False
			for a in list(sets):
				for b in list(sets):
					c = a & b
					if c not in sets:
						sets.add(c)
						changed = True
						if len(sets) > bound:
							raise ValueError("stable-set lattice exceeds "
											 "bound %d" % bound)
		self._stable_cache = sets
		return sets


def coordinate_domains(conn):
	"""Domain tags for a relation tuple: 'W' or 'U' per coordinate,
	outer coordinate first."""
	if conn.family == FAM_F:
		doms = ["U"]
		doms += ["W" if e == ONE else "U" for e in conn.order_type]
	else:
		doms = ["W"]
		doms += ["U" if e == ONE else "W" for e in conn.order_type]
	return doms


def section0(holds, outer, arg_sets):
	"""Outer section: elements related to every tuple from the argument
	sets. `holds` is a predicate on full tuples, `outer` the candidate
	pool for coordinate 0."""
	out = set()
	for d0 in outer:
		if all(holds((d0,) + combo) for combo in product(*arg_sets)):
			out.add(d0)
	return frozenset(out)


def section_i(holds, i, pool, outer_set, arg_sets):
	"""Argument section at 1-based coordinate i: candidates from `pool`
	related, together with every choice of outer element and of the other
	coordinates, by the relation."""
	others = list(arg_sets)
	out = set()
	for d in pool:
		filled = [frozenset([d]) if j == i - 1 else others[j]
				  for j in range(len(others))]
		if all(holds((d0,) + combo)
			   for d0 in outer_set for combo in product(*filled)):
			out.add(d)
	return frozenset(out)


class ComplementRelation:
	"""A relation given by the (small) set of tuples NOT in it; every
	other tuple over the domains belongs. Countermodel relations are
	co-small: only reached-but-underivable sequents are excluded."""

	def __init__(self, absent):
		self.absent = set(absent)


class LEFrame:
	"""A polarity plus one relation per connective name.

	Relations are either sets of tuples, complements, or predicates.
	"""

	def __init__(self, polarity, sig, relations):
		self.pol = polarity
		self.sig = sig
		self.relations = dict(relations)
		self.op_cache = {}

	def holds(self, name, tup):
		r = self.relations[name]
		if isinstance(r, ComplementRelation):
			return tup not in r.absent
		if callable(r):
			return r(tup)
		return tup in r

	def stabilize(self, bound=10 ** 6):
		"""Close every coordinate section of every materialized relation
		(Galois closure on W-coordinates, the dual closure on
		U-coordinates) until a fixpoint, so that all operations become
		normal. Returns a new frame."""
		pol = self.pol
		close = {"W": lambda s: pol.gamma(s),
				 "U": lambda s: pol.up(pol.down(s))}
		domain = {"W": pol.W, "U": pol.U}
		rels = {}
		for name, r in self.relations.items():
			if callable(r):
				rels[name] = r
				continue
			conn = self.sig.connective(name)
			doms = coordinate_domains(conn)
			rel = set(r)
			changed = True
			while changed:
				changed = False
				for coord in range(len(doms)):
					by_rest = {}
					for tup in rel:
						rest = tup[:coord] + tup[coord + 1:]
						by_rest.setdefault(rest, set()).add(tup[coord])
					for rest, sec in by_rest.items():
						closed = close[doms[coord]](sec)
						for d in closed - sec:
							rel.add(rest[:coord] + (d,) + rest[coord:])
							changed = True
					if len(rel) > bound:
						raise ValueError("relation %s exceeds bound" % name)
			rels[name] = rel
		return LEFrame(pol, self.sig, rels)


# ---------------------------------------------------------------- evaluation

def op_apply(frame, name, arg_sets):
	"""Apply the operation of a connective to stable argument sets.
	Results are cached on the frame."""
	key = (name,) + tuple(frozenset(a) for a in arg_sets)
	hit = frame.op_cache.get(key)
	if hit is not None:
		return hit
	conn = frame.sig.connective(name)
	pol = frame.pol
	if conn.family == FAM_F:
		tups = [a if e == ONE else pol.up(a)
				for a, e in zip(arg_sets, conn.order_type)]
		sec = section0(lambda t: frame.holds(name, t), pol.U, tups)
		out = pol.down(sec)
	else:
		tups = [pol.up(a) if e == ONE else a
				for a, e in zip(arg_sets, conn.order_type)]
		out = section0(lambda t: frame.holds(name, t), pol.W, tups)
	frame.op_cache[key] = out
	return out


def eval_term(frame, valuation, term):
	"""Extent (subset of W) of a formula or structure. Structural and
	operational applications of the same connective share its relation."""
	pol = frame.pol
	if isinstance(term, Atom):
		return valuation[term.name]
	if isinstance(term, Top):
		return pol.top()
	if isinstance(term, Bot):
		return pol.bottom()
	if isinstance(term, Meet):
		return eval_term(frame, valuation, term.left) & \
			eval_term(frame, valuation, term.right)
	if isinstance(term, Join):
		return pol.gamma(eval_term(frame, valuation, term.left)
						 | eval_term(frame, valuation, term.right))
	if isinstance(term, (App, SApp)):
		args = [eval_term(frame, valuation, a) for a in term.args]
		return op_apply(frame, term.conn, args)
	raise TypeError(repr(term))


def eval_sequent(frame, valuation, seq):
	return eval_term(frame, valuation, seq.ante) <= \
		eval_term(frame, valuation, seq.succ)


def check_rule_validity(frame, rule, bound=64):
	"""Exhaustively check a rule schema on a frame: every assignment of
	stable sets to its metavariables satisfying the premises must satisfy
	the conclusion. Returns True when valid."""
	lattice = sorted(frame.pol.stable_sets(),
					 key=lambda s: (len(s), sorted(map(repr, s))))
	if len(lattice) > bound:
		raise ValueError("stable-set lattice larger than bound %d" % bound)
	names = set(metavars(rule.conclusion))
	for p in rule.premises:
		names |= metavars(p)
	names = sorted(names)
	for combo in product(lattice, repeat=len(names)):
		val = dict(zip(names, combo))
		def ev(pattern):
			return _eval_pattern(frame, val, pattern)
		if all(ev(p.ante) <= ev(p.succ) for p in rule.premises):
			if not (ev(rule.conclusion.ante) <= ev(rule.conclusion.succ)):
				return False
	return True


def _eval_pattern(frame, assignment, pattern):
	if isinstance(pattern, MetaVar):
		return assignment[pattern.name]
	if isinstance(pattern, (App, SApp)):
		args = [_eval_pattern(frame, assignment, a) for a in pattern.args]
		return op_apply(frame, pattern.conn, args)
	if isinstance(pattern, Meet):
		return _eval_pattern(frame, assignment, pattern.left) & \
			_eval_pattern(frame, assignment, pattern.right)
	if isinstance(pattern, Join):
		return frame.pol.gamma(
			_eval_pattern(frame, assignment, pattern.left)
			| _eval_pattern(frame, assignment, pattern.right))
	if isinstance(pattern, Top):
		return frame.pol.top()
	if isinstance(pattern, Bot):
		return frame.pol.bottom()
	raise TypeError(repr(pattern))


# ---------------------------------------------------------------- countermodel

class CountermodelError(RuntimeError):
	pass


@dataclass
class Countermodel:
	frame: object
	valuation: dict
	goal: object


def _atoms_of(term, out):
	if isinstance(term, Atom):
		out.add(term.name)
	elif isinstance(term, (Meet, Join)):
		_atoms_of(term.left, out)
		_atoms_of(term.right, out)
	elif isinstance(term, (App, SApp)):
		for a in term.args:
			_atoms_of(a, out)


def build_countermodel(closure, derivable, sig, quotient):
	"""Finite countermodel from a saturated search that failed.

	Objects are the antecedents reached plus a sink below everything,
	attributes the succedents plus a sink above everything; object and
	attribute are incident when the connecting sequent is derivable or was
	never reached. Each connective's relation follows the same recipe on
	tuples of core elements, tuples touching a sink always belong. Atoms
	are valued by their own attribute column. The construction verifies
	that the goal fails in the model and raises otherwise.
	"""
	if closure.goal in derivable:
		raise CountermodelError("goal is derivable")
	if not closure.complete:
		raise CountermodelError("search was not saturated")
	S = closure.nodes
	D = set(derivable)
	W0 = sorted({s.ante for s in S}, key=lambda t: print_structure(t, FAM_F, sig))
	U0 = sorted({s.succ for s in S}, key=lambda t: print_structure(t, FAM_G, sig))
	W = tuple(W0) + (SINK_W,)
	U = tuple(U0) + (SINK_U,)

	def n_true(seq):
		return seq in D or seq not in S

	N = set()
	for w in W:
		for u in U:
			if w is SINK_W or u is SINK_U or n_true(Sequent(w, u)):
				N.add((w, u))
	pol = Polarity(W, U, N)

	if quotient.name == "identity":
		# A core tuple fails its relation exactly when its connecting
		# sequent was reached but not derived, and those sequents are the
		# closure nodes themselves; scan them once instead of probing the
		# full tuple product.
		pools = {"W": set(W0), "U": set(U0)}
		absent = {c.name: set() for c in sig.connectives}
		for s in S:
			if s in D:
				continue
			for inner, outer in ((s.ante, s.succ), (s.succ, s.ante)):
				if not isinstance(inner, SApp):
					continue
				doms = coordinate_domains(sig.connective(inner.conn))
				if all(a in pools[d]
					   for a, d in zip(inner.args, doms[1:])):
					absent[inner.conn].add((outer,) + tuple(inner.args))
		relations = {name: ComplementRelation(tups)
					 for name, tups in absent.items()}
	else:
		memo = {}

		def make_pred(name):
			conn = sig.connective(name)

			def pred(tup):
				key = (name, tup)
				if key in memo:
					return memo[key]
				if any(d is SINK_W or d is SINK_U for d in tup):
					memo[key] = True
					return True
				built = quotient.canonical_term(SApp(name, tuple(tup[1:])))
				if conn.family == FAM_F:
					seq = Sequent(built, tup[0])
				else:
					seq = Sequent(tup[0], built)
				out = n_true(seq)
				memo[key] = out
				return out
			return pred

		relations = {c.name: make_pred(c.name) for c in sig.connectives}
	frame = LEFrame(pol, sig, relations)

	names = set()
	for s in S:
		_atoms_of(s.ante, names)
		_atoms_of(s.succ, names)
	valuation = {}
	for name in sorted(names):
		a = Atom(name)
		if a in U0:
			valuation[name] = pol.down(frozenset([a]))
		else:
			valuation[name] = pol.top()

	model = Countermodel(frame, valuation, closure.goal)
	if eval_sequent(frame, valuation, closure.goal):
		raise CountermodelError("construction failed to refute the goal")
	return model


# ---------------------------------------------------------------- export

def export_countermodel(model, sig, tuple_budget=2 * 10 ** 6):
	"""JSON-ready dict. Relations are stored as their complements (the
	tuples NOT in the relation), which are small; the full relations are
	products over the listed domains minus those."""
	pol = model.frame.pol

	def label(x, sort):
		if x is SINK_W or x is SINK_U:
			return "#sink"
		return print_structure(x, sort, sig)

	wl = [label(w, FAM_F) for w in pol.W]
	ul = [label(u, FAM_G) for u in pol.U]
	widx = {w: i for i, w in enumerate(pol.W)}
	uidx = {u: i for i, u in enumerate(pol.U)}
	idx = {"W": widx, "U": uidx}
	pools = {"W": pol.W, "U": pol.U}
	rels = {}
	total = 0
	for conn in sig.connectives:
		doms = coordinate_domains(conn)
		rel = model.frame.relations[conn.name]
		if isinstance(rel, ComplementRelation):
			absent = sorted([idx[d][x] for d, x in zip(doms, tup)]
							for tup in rel.absent)
		else:
			count = 1
			for d in doms:
				count *= len(pools[d])
			total += count
			if total > tuple_budget:
				raise ValueError("countermodel too large to export")
			absent = []
			for tup in product(*(pools[d] for d in doms)):
				if not model.frame.holds(conn.name, tup):
					absent.append([idx[d][x] for d, x in zip(doms, tup)])
		rels[conn.name] = {"domains": doms, "absent": absent}
	return {
		"objects": wl,
		"attributes": ul,
		"incidence": sorted([widx[w], uidx[u]] for (w, u) in pol.N),
		"relations": rels,
		"valuation": {p: sorted(widx[w] for w in ext)
					  for p, ext in model.valuation.items()},
		"goal": {"ante": print_structure(model.goal.ante, FAM_F, sig),
				 "succ": print_structure(model.goal.succ, FAM_G, sig)},
	}


def replay_countermodel(data, sig, goal):
	"""Re-check a refutation from exported data alone: rebuild the frame
	over opaque points and evaluate the goal. True when still refuted."""
	W = tuple(range(len(data["objects"])))
	U = tuple(range(len(data["attributes"])))
	N = {(w, u) for w, u in data["incidence"]}
	pol = Polarity(W, U, N)
	rels = {}
	for name, entry in data["relations"].items():
		absent = {tuple(t) for t in entry["absent"]}
		rels[name] = (lambda a: (lambda tup: tup not in a))(absent)
	frame = LEFrame(pol, sig, rels)
	valuation = {p: frozenset(ws) for p, ws in data["valuation"].items()}
	for name in _goal_atoms(goal):
		if name not in valuation:
			valuation[name] = pol.top()
	return not eval_sequent(frame, valuation, goal)


def _goal_atoms(goal):
	out = set()
	_atoms_of(goal.ante, out)
	_atoms_of(goal.succ, out)
	return out
