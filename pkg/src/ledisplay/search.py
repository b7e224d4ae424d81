"""Backward proof search, decision procedure, forward proof generation.

Backward search saturates the set of sequents reachable from a goal by
reading the cut-free rules bottom-up, working modulo a structural quotient
(a canonicalizer on structures). Derivability then falls out of AND-OR
propagation over the recorded hyperedges, and the saturated set doubles as
the raw material for countermodel construction.

The decision procedure is total in two situations: every rule passes a
symbolic complexity-non-increase check (so the saturated set is finite a
priori), or saturation happens to reach a fixpoint within budget under a
bundle that vouches for finiteness. Otherwise it reports UNSUPPORTED.
"""

import random
from dataclasses import dataclass, field

from .signature import FAM_F, FAM_G
from .syntax import (Atom, Top, Bot, Meet, Join, App, SApp, MetaVar, Sequent,
					 complexity, complexity_term)
from .calculus import (KLASS_CUT, match, instantiate, metavars)


# ---------------------------------------------------------------- quotients

class Quotient:
	"""A canonicalizer on structures; sequents compare modulo it."""

	name = "identity"

	def canonical_term(self, t):
		return t

	def canonical(self, seq):
		return Sequent(self.canonical_term(seq.ante),
					   self.canonical_term(seq.succ))

	def matches(self, pattern, term, bindings=None):
		"""All ways the pattern matches the term modulo the quotient.
		The identity quotient has plain syntactic matching."""
		b = match(pattern, term, bindings)
		return [] if b is None else [b]


class StarParityQuotient(Quotient):
	"""Identify each negation with its generated residual and cancel
	double-star structures: the residual of the antecedent-side negation
	is renamed to the negation itself (likewise on the succedent side),
	then nestings of the two negations collapse to their core.
	"""

	name = "star-parity"

	def __init__(self, f_neg="notf", g_neg="not"):
		self.f_neg = f_neg
		self.g_neg = g_neg
		self.renames = {f_neg + ".r1": f_neg, g_neg + ".l1": g_neg}

	def canonical_term(self, t):
		if isinstance(t, (Meet, Join)):
			return type(t)(self.canonical_term(t.left),
						   self.canonical_term(t.right))
		if isinstance(t, App):
			return App(t.conn, tuple(self.canonical_term(a) for a in t.args))
		if not isinstance(t, SApp):
			return t
		args = tuple(self.canonical_term(a) for a in t.args)
		name = self.renames.get(t.conn, t.conn)
		inner = args[0] if args else None
		if (name == self.f_neg and isinstance(inner, SApp)
				and inner.conn == self.g_neg):
			return inner.args[0]
		if (name == self.g_neg and isinstance(inner, SApp)
				and inner.conn == self.f_neg):
			return inner.args[0]
		return SApp(name, args)

	def matches(self, pattern, term, bindings=None):
		"""Matching modulo star parity.

		A canonical term carries no cancelled negation pair, so a rule
		instance whose conclusion mentions one may still cover the term: a
		negation structure in the pattern is also allowed to match any
		term t by matching its body against the opposite negation of t
		(which cancels back to t on instantiation).
		"""
		pattern = self._canonical_pattern(pattern)
		return self._m(pattern, term, bindings or {})

	def _canonical_pattern(self, p):
		if isinstance(p, Sequent):
			return Sequent(self._canonical_pattern(p.ante),
						   self._canonical_pattern(p.succ))
		if isinstance(p, SApp):
			args = tuple(self._canonical_pattern(a) for a in p.args)
			return SApp(self.renames.get(p.conn, p.conn), args)
		if isinstance(p, (Meet, Join)):
			return type(p)(self._canonical_pattern(p.left),
						   self._canonical_pattern(p.right))
		if isinstance(p, App):
			return App(p.conn, tuple(self._canonical_pattern(a)
									 for a in p.args))
		return p

	def _m(self, pattern, term, b):
		if isinstance(pattern, Sequent):
			if not isinstance(term, Sequent):
				return []
			out = []
			for b1 in self._m(pattern.ante, term.ante, b):
				out.extend(self._m(pattern.succ, term.succ, b1))
			return _dedupe(out)
		results = []
		plain = match(pattern, term, b)
		if plain is not None:
			results.append(plain)
		if isinstance(pattern, SApp) and pattern.conn in (self.f_neg,
														  self.g_neg):
			other = self.g_neg if pattern.conn == self.f_neg else self.f_neg
			flipped = self.canonical_term(SApp(other, (term,)))
			results.extend(self._m(pattern.args[0], flipped, b))
		elif isinstance(pattern, SApp) and isinstance(term, SApp) \
				and pattern.conn == term.conn:
			partial = [b]
			for p, t in zip(pattern.args, term.args):
				partial = [b2 for b1 in partial for b2 in self._m(p, t, b1)]
			results.extend(partial)
		return _dedupe(results)


def _dedupe(bindings):
	seen = set()
	out = []
	for b in bindings:
		key = frozenset(b.items())
		if key not in seen:
			seen.add(key)
			out.append(b)
	return out


QUOTIENTS = {
	"identity": Quotient,
	"star-parity": StarParityQuotient,
}


def get_quotient(name):
	try:
		return QUOTIENTS[name]()
	except KeyError:
		raise KeyError("unknown quotient: %r" % name)


# ---------------------------------------------------------------- closure

@dataclass
class ClosureResult:
	nodes: set                  # canonical sequents reached
	edges: dict                 # node -> [(rule index, premise tuple)]
	complete: bool              # saturation reached a fixpoint
	goal: object


def backward_closure(goal, rules, quotient=None, budget=200000):
	"""Saturate backward from a goal under the cut-free rules.

	Premises are canonicalized through the quotient before being enqueued.
	Rules whose premises mention variables absent from the conclusion are
	skipped (they cannot be read backward).
	"""
	if quotient is None:
		quotient = Quotient()
	usable = []
	for idx, r in enumerate(rules):
		if r.klass == KLASS_CUT:
			continue
		if any(metavars(p) - metavars(r.conclusion) for p in r.premises):
			continue
		usable.append((idx, r))
	start = quotient.canonical(goal)
	nodes = {start}
	edges = {start: []}
	frontier = [start]
	complete = True
	while frontier:
		nxt = []
		for seq in frontier:
			for idx, rule in usable:
				for b in quotient.matches(rule.conclusion, seq):
					prems = tuple(quotient.canonical(instantiate(p, b))
								  for p in rule.premises)
					if (idx, prems) not in edges[seq]:
						edges[seq].append((idx, prems))
					for p in prems:
						if p not in nodes:
							nodes.add(p)
							edges[p] = []
							nxt.append(p)
		if len(nodes) > budget:
			complete = False
			break
		frontier = nxt
	return ClosureResult(nodes, edges, complete, start)


def derivable_set(closure):
	"""AND-OR propagation: the derivable subset of the closure nodes,
	plus each derivable node's minimal proof depth."""
	depth = {}
	changed = True
	while changed:
		changed = False
		for seq, options in closure.edges.items():
			best = depth.get(seq)
			for idx, prems in options:
				if all(p in depth for p in prems):
					d = 1 + max((depth[p] for p in prems), default=0)
					if best is None or d < best:
						best = d
			if best is not None and depth.get(seq) != best:
				depth[seq] = best
				changed = True
	return depth


# ---------------------------------------------------------------- proofs

@dataclass(frozen=True)
class ProofTree:
	sequent: object
	rule: str
	children: tuple = ()

	def depth(self):
		return 1 + max((c.depth() for c in self.children), default=0)

	def size(self):
		return 1 + sum(c.size() for c in self.children)


def _extract(seq, closure, depth, rules):
	"""Minimal-depth proof tree for a derivable closure node. Ties break
	toward the earliest rule in the calculus order."""
	best = None
	for idx, prems in sorted(closure.edges[seq]):
		if not all(p in depth for p in prems):
			continue
		d = 1 + max((depth[p] for p in prems), default=0)
		if d == depth[seq]:
			best = (idx, prems)
			break
	idx, prems = best
	kids = tuple(_extract(p, closure, depth, rules) for p in prems)
	return ProofTree(seq, rules[idx].name, kids)


def derive_cutfree(goal, rules, quotient=None, budget=200000):
	"""Cut-free backward proof search.

	Returns (proof tree or None, closure). The proof, when found, is of
	the canonicalized goal and has minimal depth over the closure.
	"""
	if quotient is None:
		quotient = Quotient()
	closure = backward_closure(goal, rules, quotient, budget)
	depth = derivable_set(closure)
	if closure.goal in depth:
		return _extract(closure.goal, closure, depth, rules), closure
	return None, closure


def replay(tree, rules, quotient=None):
	"""Validate a proof tree: each node must be an instance of its rule
	with exactly its children as premises (modulo the quotient)."""
	if quotient is None:
		quotient = Quotient()
	by_name = {r.name: r for r in rules}
	rule = by_name.get(tree.rule)
	if rule is None:
		return False
	if len(rule.premises) != len(tree.children):
		return False

	def covers(b, i):
		"""Premises i.. are instances matching the children, extending b
		(variables like the cut formula are bound by the children)."""
		if i == len(rule.premises):
			return True
		pat, child = rule.premises[i], tree.children[i]
		try:
			want = quotient.canonical(instantiate(pat, b))
			if quotient.canonical(child.sequent) == want and covers(b, i + 1):
				return True
		except KeyError:
			pass
		for b2 in quotient.matches(pat, child.sequent, b):
			if covers(b2, i + 1):
				return True
		return False

	if not any(covers(b, 0)
			   for b in quotient.matches(rule.conclusion, tree.sequent)):
		return False
	return all(replay(c, rules, quotient) for c in tree.children)


# ---------------------------------------------------------------- certificate

def _pattern_vars(seq):
	out = {}
	def walk(t):
		if isinstance(t, MetaVar):
			out[t.name] = out.get(t.name, 0) + 1
		elif isinstance(t, (Meet, Join)):
			walk(t.left)
			walk(t.right)
		elif isinstance(t, (App, SApp)):
			for a in t.args:
				walk(a)
	walk(seq.ante)
	walk(seq.succ)
	return out


def complexity_certificate(rules, quotient=None):
	"""Symbolic check that every non-cut rule is complexity-non-increasing
	read backward: each premise's variable multiset is contained in the
	conclusion's and its connective count does not exceed the conclusion's,
	after canonicalizing both patterns through the quotient.

	Returns (ok, failing rule names).
	"""
	if quotient is None:
		quotient = Quotient()
	failing = []
	for r in rules:
		if r.klass == KLASS_CUT:
			continue
		concl = quotient.canonical(r.conclusion)
		cvars = _pattern_vars(concl)
		climit = complexity(concl)
		for p in r.premises:
			p = quotient.canonical(p)
			pvars = _pattern_vars(p)
			if any(pvars[v] > cvars.get(v, 0) for v in pvars):
				failing.append(r.name)
				break
			if complexity(p) > climit:
				failing.append(r.name)
				break
	return not failing, failing


# ---------------------------------------------------------------- decision

STATUS_DERIVABLE = "derivable"
STATUS_UNDERIVABLE = "underivable"
STATUS_UNSUPPORTED = "unsupported"


@dataclass
class Decision:
	status: str
	proof: object = None
	closure: object = None
	reason: str = ""


def decide(goal, rules, quotient=None, assume_finite_closure=False,
		   budget=200000):
	"""Decide derivability of a sequent by saturated backward search.

	Total when the complexity certificate holds; otherwise only attempted
	when the caller vouches for a finite closure, in which case reaching a
	fixpoint still yields a sound verdict and exhausting the budget
	reports UNSUPPORTED.
	"""
	if quotient is None:
		quotient = Quotient()
	ok, failing = complexity_certificate(rules, quotient)
	if not ok and not assume_finite_closure:
		return Decision(STATUS_UNSUPPORTED,
						reason="no termination certificate; rules increase "
							   "complexity: " + ", ".join(failing))
	proof, closure = derive_cutfree(goal, rules, quotient, budget)
	if proof is not None:
		return Decision(STATUS_DERIVABLE, proof=proof, closure=closure)
	if not closure.complete:
		return Decision(STATUS_UNSUPPORTED, closure=closure,
						reason="search budget exhausted before saturation")
	return Decision(STATUS_UNDERIVABLE, closure=closure)


# ---------------------------------------------------------------- forward

def _random_formula(rng, sig, atoms, depth):
	if depth <= 0 or rng.random() < 0.4:
		return Atom(rng.choice(atoms))
	ops = ["meet", "join", "top", "bot"]
	base = [c for c in sig.connectives if c.is_base]
	ops += ["app"] * min(len(base), 4)
	kind = rng.choice(ops)
	if kind == "top":
		return Top()
	if kind == "bot":
		return Bot()
	if kind == "meet":
		return Meet(_random_formula(rng, sig, atoms, depth - 1),
					_random_formula(rng, sig, atoms, depth - 1))
	if kind == "join":
		return Join(_random_formula(rng, sig, atoms, depth - 1),
					_random_formula(rng, sig, atoms, depth - 1))
	c = rng.choice(base)
	return App(c.name, tuple(_random_formula(rng, sig, atoms, depth - 1)
							 for _ in range(c.arity)))


def forward_generate(rules, sig, count=100, max_depth=5, seed=0,
					 atoms=("p", "q", "r"), pool_depth=2):
	"""Grow random valid proofs forward from the zero-premise rules.

	Premise patterns are matched against already proven sequents; leftover
	conclusion variables (and all variables of zero-premise rules) are
	filled from a seeded random formula pool. Deterministic per seed.
	Returns up to `count` proof trees of depth at most max_depth.
	"""
	rng = random.Random(seed)
	atoms = list(atoms)

	def fill(bindings, pattern):
		b = dict(bindings)
		for name in metavars(pattern):
			if name not in b:
				if name.startswith("a"):
					b[name] = Atom(rng.choice(atoms))
				else:
					b[name] = _random_formula(rng, sig, atoms, pool_depth)
		return b

	proven = []
	trees = []
	axioms = [r for r in rules if not r.premises]
	attempts = 0
	while len(trees) < count and attempts < count * 60:
		attempts += 1
		if not proven or rng.random() < 0.25:
			rule = rng.choice(axioms)
			b = fill({}, rule.conclusion)
			tree = ProofTree(instantiate(rule.conclusion, b), rule.name)
		else:
			rule = rng.choice(rules)
			b = {}
			kids = []
			ok = True
			for pat in rule.premises:
				picks = rng.sample(proven, min(len(proven), 8))
				hit = None
				for cand in picks:
					nb = match(pat, cand.sequent, b)
					if nb is not None:
						hit = (nb, cand)
						break
				if hit is None:
					ok = False
					break
				b, cand = hit
				kids.append(cand)
			if not ok:
				continue
			b = fill(b, rule.conclusion)
			tree = ProofTree(instantiate(rule.conclusion, b),
							 rule.name, tuple(kids))
		if tree.depth() > max_depth:
			continue
		proven.append(tree)
		trees.append(tree)
	return trees
