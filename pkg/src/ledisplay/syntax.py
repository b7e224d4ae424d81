"""Two-sorted term language: formulas, structures, sequents.

Formulas are single-sorted. Structures come in an F-sort (antecedent side)
and a G-sort (succedent side): a formula is a structure of either sort, and
a structural application F.name(...) / G.name(...) has the sort of its
connective's family, with argument sorts driven by the order-type (entry 1
keeps the parent sort, entry d flips it).

Surface grammar (ASCII):
	atoms        [a-z][a-zA-Z0-9_]*
	T, B         top, bottom
	a & b, a | b meet and join, meet binds tighter, both left-associative
	name(...)    operational application
	F.name(...)  structural application (family must match the prefix)
	x => y       sequent
	X1, Y1, phi1 metavariables (pattern mode only; X antecedent-sort,
	             Y succedent-sort, phi formula)
"""

import re
from dataclasses import dataclass

from .signature import ONE, FAM_F, FAM_G


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Atom:
	name: str


@dataclass(frozen=True)
class Top:
	pass


@dataclass(frozen=True)
class Bot:
	pass


@dataclass(frozen=True)
class Meet:
	left: object
	right: object


@dataclass(frozen=True)
class Join:
	left: object
	right: object


@dataclass(frozen=True)
class App:
	"""Operational connective application."""
	conn: str
	args: tuple


@dataclass(frozen=True)
class SApp:
	"""Structural connective application."""
	conn: str
	args: tuple


@dataclass(frozen=True)
class MetaVar:
	"""Pattern-only leaf. kind is 'structure', 'formula' or 'atom';
	sort is FAM_F or FAM_G for structure kind, '*' otherwise."""
	name: str
	kind: str
	sort: str = "*"


FORMULA_TYPES = (Atom, Top, Bot, Meet, Join, App)


def is_formula(t):
	return isinstance(t, FORMULA_TYPES) or (
		isinstance(t, MetaVar) and t.kind in ("formula", "atom"))


@dataclass(frozen=True)
class Sequent:
	ante: object   # F-sort structure
	succ: object   # G-sort structure


class SortError(ValueError):
	pass


def arg_sort(parent_sort, eps_entry):
	if eps_entry == ONE:
		return parent_sort
	return FAM_G if parent_sort == FAM_F else FAM_F


def check_term(t, sort, sig):
	"""Verify sort discipline and arities; raise SortError on violation."""
	if isinstance(t, MetaVar):
		if t.kind == "structure" and t.sort != sort:
			raise SortError("metavariable %s has sort %s, expected %s"
							% (t.name, t.sort, sort))
		return
	if isinstance(t, (Atom, Top, Bot)):
		return
	if isinstance(t, (Meet, Join)):
		check_term(t.left, sort, sig)
		check_term(t.right, sort, sig)
		return
	if isinstance(t, App):
		c = sig.connective(t.conn)
		if len(t.args) != c.arity:
			raise SortError("%s expects %d arguments, got %d"
							% (t.conn, c.arity, len(t.args)))
		for a in t.args:
			if not is_formula(a):
				raise SortError("operational %s takes formula arguments" % t.conn)
			check_term(a, sort, sig)
		return
	if isinstance(t, SApp):
		c = sig.connective(t.conn)
		if c.family != sort:
			raise SortError("structural %s is %s-sort, expected %s-sort"
							% (t.conn, c.family, sort))
		if len(t.args) != c.arity:
			raise SortError("%s expects %d arguments, got %d"
							% (t.conn, c.arity, len(t.args)))
		for i, a in enumerate(t.args):
			check_term(a, arg_sort(sort, c.order_type[i]), sig)
		return
	raise SortError("not a term: %r" % (t,))


def check_sequent(s, sig):
	check_term(s.ante, FAM_F, sig)
	check_term(s.succ, FAM_G, sig)
	return s


# ---------------------------------------------------------------- measure

def complexity_term(t):
	"""Number of connective occurrences (nullary connectives count 1)."""
	if isinstance(t, (Atom, MetaVar)):
		return 0
	if isinstance(t, (Top, Bot)):
		return 1
	if isinstance(t, (Meet, Join)):
		return 1 + complexity_term(t.left) + complexity_term(t.right)
	if isinstance(t, (App, SApp)):
		return 1 + sum(complexity_term(a) for a in t.args)
	raise TypeError(repr(t))


def complexity(seq):
	return complexity_term(seq.ante) + complexity_term(seq.succ)


def substructures(t):
	"""The structure itself plus, through structural applications, all
	argument structures. Stops at formulas (a formula is one structure)."""
	out = {t}
	if isinstance(t, SApp):
		for a in t.args:
			out |= substructures(a)
	return out


def subformulas(phi):
	out = {phi}
	if isinstance(phi, (Meet, Join)):
		out |= subformulas(phi.left) | subformulas(phi.right)
	elif isinstance(phi, App):
		for a in phi.args:
			out |= subformulas(a)
	return out


def subterms(seq):
	"""(substructures, subformulas) of both sides, subformulas closed."""
	structs = substructures(seq.ante) | substructures(seq.succ)
	fmls = set()
	for s in structs:
		if is_formula(s):
			fmls |= subformulas(s)
	for s in list(structs):
		if isinstance(s, SApp):
			for a in s.args:
				if is_formula(a):
					fmls |= subformulas(a)
	return structs, fmls


# ---------------------------------------------------------------- printing

def print_term(t):
	if isinstance(t, Atom):
		return t.name
	if isinstance(t, Top):
		return "T"
	if isinstance(t, Bot):
		return "B"
	if isinstance(t, Meet):
		return "(%s & %s)" % (print_term(t.left), print_term(t.right))
	if isinstance(t, Join):
		return "(%s | %s)" % (print_term(t.left), print_term(t.right))
	if isinstance(t, App):
		return "%s(%s)" % (t.conn, ", ".join(print_term(a) for a in t.args))
	if isinstance(t, SApp):
		return "%s.%s(%s)" % ("?", t.conn, ", ".join(print_term(a) for a in t.args))
	if isinstance(t, MetaVar):
		return t.name
	raise TypeError(repr(t))


def print_structure(t, sort, sig):
	if isinstance(t, SApp):
		fam = sig.connective(t.conn).family
		args = []
		c = sig.connective(t.conn)
		for i, a in enumerate(t.args):
			args.append(print_structure(a, arg_sort(fam, c.order_type[i]), sig))
		return "%s.%s(%s)" % (fam, t.conn, ", ".join(args))
	return print_term(t)


def print_sequent(seq, sig):
	return "%s => %s" % (print_structure(seq.ante, FAM_F, sig),
						 print_structure(seq.succ, FAM_G, sig))


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
	def __init__(self, msg, pos):
		super().__init__("%s (at position %d)" % (msg, pos))
		self.pos = pos


_TOKEN = re.compile(r"""
	(?P<ws>\s+)
  | (?P<sapp>[FG]\.[a-z][a-zA-Z0-9_]*(?:\.[rl][0-9]+)*)
  | (?P<arrow>=>)
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
  | (?P<const>[TB])
  | (?P<mvar>[XY][0-9]+)
  | (?P<punct>[(),&|])
""", re.VERBOSE)


def _tokenize(text):
	pos = 0
	tokens = []
	while pos < len(text):
		m = _TOKEN.match(text, pos)
		if not m:
			raise ParseError("unexpected character %r" % text[pos], pos)
		if m.lastgroup != "ws":
			tokens.append((m.lastgroup, m.group(), pos))
		pos = m.end()
	tokens.append(("eof", "", len(text)))
	return tokens


class _Parser:
	def __init__(self, text, sig, patterns=False):
		self.tokens = _tokenize(text)
		self.i = 0
		self.sig = sig
		self.patterns = patterns

	def peek(self):
		return self.tokens[self.i]

	def next(self):
		tok = self.tokens[self.i]
		self.i += 1
		return tok

	def expect(self, kind, text=None):
		tok = self.next()
		if tok[0] != kind or (text is not None and tok[1] != text):
			raise ParseError("expected %s, found %r" % (text or kind, tok[1]), tok[2])
		return tok

	def sequent(self):
		ante = self.structure(FAM_F)
		self.expect("arrow")
		succ = self.structure(FAM_G)
		self.expect("eof")
		return Sequent(ante, succ)

	def structure(self, sort):
		kind, text, pos = self.peek()
		if kind == "sapp":
			return self.sapp(sort)
		if kind == "mvar" and self.patterns:
			self.next()
			want = FAM_F if text[0] == "X" else FAM_G
			if want != sort:
				raise ParseError("metavariable %s is %s-sort, expected %s-sort"
								 % (text, want, sort), pos)
			return MetaVar(text, "structure", sort)
		return self.formula()

	def sapp(self, sort):
		kind, text, pos = self.next()
		fam, name = text.split(".", 1)
		if name not in self.sig:
			raise ParseError("unknown structural connective %r" % name, pos)
		c = self.sig.connective(name)
		if c.family != fam:
			raise ParseError("connective %s is in family %s, written %s"
							 % (name, c.family, fam), pos)
		if fam != sort:
			raise ParseError("%s-sort structure in %s-sort position"
							 % (fam, sort), pos)
		self.expect("punct", "(")
		args = []
		for i in range(c.arity):
			if i:
				self.expect("punct", ",")
			args.append(self.structure(arg_sort(sort, c.order_type[i])))
		self.expect("punct", ")")
		return SApp(name, tuple(args))

	def formula(self):
		left = self.meet()
		while self.peek()[:2] == ("punct", "|"):
			self.next()
			left = Join(left, self.meet())
		return left

	def meet(self):
		left = self.primary()
		while self.peek()[:2] == ("punct", "&"):
			self.next()
			left = Meet(left, self.primary())
		return left

	def primary(self):
		kind, text, pos = self.next()
		if kind == "const":
			return Top() if text == "T" else Bot()
		if kind == "punct" and text == "(":
			phi = self.formula()
			self.expect("punct", ")")
			return phi
		if kind == "ident":
			if self.peek()[:2] == ("punct", "("):
				if text not in self.sig:
					raise ParseError("unknown connective %r" % text, pos)
				c = self.sig.connective(text)
				self.next()
				args = []
				for i in range(c.arity):
					if i:
						self.expect("punct", ",")
					args.append(self.formula())
				self.expect("punct", ")")
				return App(text, tuple(args))
			if self.patterns and re.fullmatch(r"phi[0-9]+", text):
				return MetaVar(text, "formula")
			return Atom(text)
		raise ParseError("expected a formula, found %r" % text, pos)


def parse_sequent(text, sig, patterns=False):
	seq = _Parser(text, sig, patterns).sequent()
	check_sequent(seq, sig)
	return seq


def parse_formula(text, sig, patterns=False):
	p = _Parser(text, sig, patterns)
	phi = p.formula()
	p.expect("eof")
	check_term(phi, FAM_F, sig)
	return phi
