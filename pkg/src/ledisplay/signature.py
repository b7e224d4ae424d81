"""Connective signatures for lattice-expansion languages.

A signature consists of two disjoint families of connectives, F and G, each
connective carrying an arity and an order-type over {1, d}. F-connectives
are coordinatewise join-preserving where the order-type entry is 1 and
meet-reversing where it is d; G-connectives dually. Expansion adds, for
each base connective and coordinate, the residual connective that the
display rules need.
"""

import json
from dataclasses import dataclass

ONE = 1
DUAL = "d"
FAM_F = "F"
FAM_G = "G"


def dual(entry):
	"""Flip a single order-type entry."""
	return DUAL if entry == ONE else ONE


def dual_type(order_type):
	return tuple(dual(e) for e in order_type)


@dataclass(frozen=True)
class Connective:
	name: str
	family: str          # FAM_F or FAM_G
	arity: int
	order_type: tuple    # entries ONE or DUAL, length == arity
	origin: tuple = None  # None for base connectives, else (parent, coord)

	@property
	def is_base(self):
		return self.origin is None


def residual(conn, i):
	"""The residual of `conn` in coordinate i (1-based).

	For f in F: lands in G if eps_f(i) = 1 (order-type keeps entry i and
	dualizes the rest), in F if eps_f(i) = d (order-type unchanged).
	For g in G the placement is dual. Naming is deterministic: `<f>.r<i>`
	for F-parents, `<g>.l<i>` for G-parents.
	"""
	eps = conn.order_type
	ei = eps[i - 1]
	if conn.family == FAM_F:
		name = "%s.r%d" % (conn.name, i)
		family = FAM_G if ei == ONE else FAM_F
	else:
		name = "%s.l%d" % (conn.name, i)
		family = FAM_F if ei == ONE else FAM_G
	if ei == ONE:
		ot = tuple(ONE if j == i - 1 else dual(eps[j]) for j in range(conn.arity))
	else:
		ot = tuple(eps[j] for j in range(conn.arity))
	return Connective(name, family, conn.arity, ot, origin=(conn.name, i))


class Signature:
	"""Immutable set of connectives with name lookup."""

	def __init__(self, connectives=()):
		self.connectives = tuple(connectives)
		self.by_name = {}
		for c in self.connectives:
			self.by_name.setdefault(c.name, c)

	def connective(self, name):
		c = self.by_name.get(name)
		if c is None:
			raise KeyError("unknown connective: %r" % name)
		return c

	def __contains__(self, name):
		return name in self.by_name

	def family(self, fam, base_only=False):
		return [c for c in self.connectives
				if c.family == fam and (c.is_base or not base_only)]

	def validate(self):
		"""Return a list of violation messages; empty means ok."""
		problems = []
		seen = {}
		for c in self.connectives:
			if c.name in seen:
				problems.append("duplicate connective name: %s" % c.name)
			seen[c.name] = c
			if c.family not in (FAM_F, FAM_G):
				problems.append("%s: family must be F or G, got %r" % (c.name, c.family))
			if c.arity < 0:
				problems.append("%s: negative arity" % c.name)
			if len(c.order_type) != c.arity:
				problems.append("%s: order-type length %d != arity %d"
								% (c.name, len(c.order_type), c.arity))
			for e in c.order_type:
				if e not in (ONE, DUAL):
					problems.append("%s: bad order-type entry %r" % (c.name, e))
		return problems

	def expand(self):
		"""Add residuals for every base connective and coordinate.

		Idempotent; residuals of residuals are never generated.
		"""
		problems = self.validate()
		if problems:
			raise ValueError("invalid signature: " + "; ".join(problems))
		out = list(self.connectives)
		have = set(self.by_name)
		for c in self.connectives:
			if not c.is_base:
				continue
			for i in range(1, c.arity + 1):
				r = residual(c, i)
				if r.name not in have:
					out.append(r)
					have.add(r.name)
		return Signature(out)


def load_signature(source):
	"""Build a Signature from a JSON string or parsed dict.

	Format: {"connectives": [{"name", "family", "arity", "order_type"}]}
	with order-type entries 1 or "d".
	"""
	if isinstance(source, str):
		source = json.loads(source)
	conns = []
	for entry in source.get("connectives", []):
		ot = tuple(ONE if e == 1 else DUAL for e in entry.get("order_type", []))
		conns.append(Connective(entry["name"], entry["family"],
								entry["arity"], ot))
	sig = Signature(conns)
	problems = sig.validate()
	if problems:
		raise ValueError("invalid signature: " + "; ".join(problems))
	return sig
