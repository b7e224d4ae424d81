"""Axiom classification by signed generation trees.

An axiom is a sequent between two formulas, read as the inequality
"antecedent below succedent". Its signed generation tree assigns + to the
antecedent root and - to the succedent root; signs propagate to children,
flipping through order-type-d coordinates.

Inner nodes fall into four classes. Outer skeleton: delta (+join, -meet)
and slr (+F-connective, -G-connective of positive arity). Inner pia: sra
(+meet, -join, unary +G / -F) and srr (+G / -F of arity at least two). A
branch is good when, reading from the root, skeleton nodes come first and
pia nodes after. An assignment eps of 1/d to the variables makes a leaf
critical when it is +p with eps(p)=1 or -p with eps(p)=d.

The axiom is analytic inductive for a witness (order, eps) when every
branch is good and, at each srr node on a critical branch toward p, each
subtree hanging off the branch only has leaves that disagree with eps
(sign-wise) and only variables strictly below p in the order.
"""

from dataclasses import dataclass
from itertools import product

from .signature import ONE, DUAL, FAM_F, FAM_G
from .syntax import Atom, Top, Bot, Meet, Join, App

PLUS = "+"
MINUS = "-"

SKELETON = ("delta", "slr")
PIA = ("sra", "srr")


def _flip(sign):
	return MINUS if sign == PLUS else PLUS


def node_class(sign, phi, sig):
	"""Table class of an inner node, or None for leaves."""
	if isinstance(phi, Meet):
		return "sra" if sign == PLUS else "delta"
	if isinstance(phi, Join):
		return "delta" if sign == PLUS else "sra"
	if isinstance(phi, App):
		c = sig.connective(phi.conn)
		if c.arity == 0:
			return None
		if c.family == FAM_F:
			if sign == PLUS:
				return "slr"
			return "sra" if c.arity == 1 else "srr"
		if sign == MINUS:
			return "slr"
		return "sra" if c.arity == 1 else "srr"
	return None


def children(sign, phi, sig):
	"""Signed children of a node."""
	if isinstance(phi, (Meet, Join)):
		return [(sign, phi.left), (sign, phi.right)]
	if isinstance(phi, App):
		c = sig.connective(phi.conn)
		return [(sign if c.order_type[i] == ONE else _flip(sign), a)
				for i, a in enumerate(phi.args)]
	return []


def signed_leaves(sign, phi, sig):
	"""All (sign, atom name) leaves under a signed node."""
	if isinstance(phi, Atom):
		return [(sign, phi.name)]
	out = []
	for s, a in children(sign, phi, sig):
		out.extend(signed_leaves(s, a, sig))
	return out


@dataclass(frozen=True)
class BranchNode:
	sign: str
	term: object
	klass: str
	sides: tuple   # signed subtrees hanging off the branch at this node


@dataclass(frozen=True)
class Branch:
	nodes: tuple       # root-to-leaf inner nodes
	leaf_sign: str
	leaf: object       # Atom, Top, Bot or nullary App


def branches(sign, phi, sig, _path=()):
	"""All root-to-leaf branches of a signed generation tree."""
	kids = children(sign, phi, sig)
	if not kids:
		return [Branch(_path, sign, phi)]
	klass = node_class(sign, phi, sig)
	out = []
	for i, (s, a) in enumerate(kids):
		sides = tuple(k for j, k in enumerate(kids) if j != i)
		node = BranchNode(sign, phi, klass, sides)
		out.extend(branches(s, a, sig, _path + (node,)))
	return out


def signed_tree(seq, sig):
	"""Branches of both sides of an axiom, antecedent + and succedent -."""
	for side in (seq.ante, seq.succ):
		if isinstance(side, Atom) or isinstance(side, (Top, Bot, Meet, Join, App)):
			continue
		raise TypeError("axiom sides must be formulas")
	return (branches(PLUS, seq.ante, sig)
			+ branches(MINUS, seq.succ, sig))


def is_good(branch):
	"""Skeleton-then-pia reading root to leaf."""
	seen_pia = False
	for node in branch.nodes:
		if node.klass in PIA:
			seen_pia = True
		elif seen_pia:
			return False
	return True


def variables(seq):
	out = set()
	def walk(t):
		if isinstance(t, Atom):
			out.add(t.name)
		elif isinstance(t, (Meet, Join)):
			walk(t.left)
			walk(t.right)
		elif isinstance(t, App):
			for a in t.args:
				walk(a)
	walk(seq.ante)
	walk(seq.succ)
	return sorted(out)


def is_critical(sign, name, eps):
	return (sign == PLUS and eps[name] == ONE) or (
		sign == MINUS and eps[name] == DUAL)


@dataclass(frozen=True)
class InductiveWitness:
	order: tuple   # strict-order pairs (smaller, larger), transitively closed
	eps: tuple     # sorted (variable, 1 | "d") pairs

	def eps_dict(self):
		return dict(self.eps)


def _closure(pairs):
	"""Transitive closure of a set of pairs."""
	closed = set(pairs)
	changed = True
	while changed:
		changed = False
		for a, b in list(closed):
			for c, d in list(closed):
				if b == c and (a, d) not in closed:
					closed.add((a, d))
					changed = True
	return closed


def _srr_requirements(branch, eps, sig):
	"""For a critical branch, the order pairs its srr nodes demand.

	Returns (ok, pairs): ok is False when some hanging subtree has a leaf
	that agrees with eps (it must not), pairs are (side variable, critical
	variable) requirements.
	"""
	if not isinstance(branch.leaf, Atom):
		return True, set()
	p = branch.leaf.name
	if not is_critical(branch.leaf_sign, p, eps):
		return True, set()
	pairs = set()
	for node in branch.nodes:
		if node.klass != "srr":
			continue
		for s, sub in node.sides:
			for ls, q in signed_leaves(s, sub, sig):
				if is_critical(ls, q, eps):
					return False, set()
				pairs.add((q, p))
	return True, pairs


def is_analytic_inductive(seq, sig, witness):
	"""Check a concrete witness: every branch good, critical branches
	satisfy the srr side conditions under the witness order."""
	eps = witness.eps_dict()
	order = _closure(witness.order)
	if any(a == b for a, b in order):
		return False
	brs = signed_tree(seq, sig)
	if not all(is_good(b) for b in brs):
		return False
	for b in brs:
		ok, pairs = _srr_requirements(b, eps, sig)
		if not ok:
			return False
		for q, p in pairs:
			if (q, p) not in order:
				return False
	return True


def find_witness(seq, sig, bound=6):
	"""Search for an analytic-inductive witness.

	Variable assignments are tried in lexicographic order (1 before d). For
	each assignment the srr side conditions pin down a minimal set of order
	pairs; a witness exists exactly when their transitive closure is
	irreflexive, and that closure is returned as the order. Axioms with
	more than ``bound`` distinct variables are refused outright.
	"""
	names = variables(seq)
	if len(names) > bound:
		raise ValueError(
			"axiom has %d variables, witness search is bounded at %d"
			% (len(names), bound))
	brs = signed_tree(seq, sig)
	if not all(is_good(b) for b in brs):
		return None
	for combo in product((ONE, DUAL), repeat=len(names)):
		eps = dict(zip(names, combo))
		required = set()
		ok = True
		for b in brs:
			good, pairs = _srr_requirements(b, eps, sig)
			if not good:
				ok = False
				break
			required |= pairs
		if not ok:
			continue
		closed = _closure(required)
		if any(a == b for a, b in closed):
			continue
		return InductiveWitness(tuple(sorted(closed)),
								tuple(sorted(eps.items())))
	return None
