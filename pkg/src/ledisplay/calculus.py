"""Rule schemas and the generated base calculus.

A rule schema has premise and conclusion sequent patterns whose leaves may
be metavariables. `base_rules` generates the full calculus for an expanded
signature: identity and cut, the invertible display pairs that move every
argument of a structural connective into displayed position, the lattice
rules, and left/right introduction rules for each base connective.

`check_analytic` vets user-supplied structural rules against the closure
conditions that keep cut elimination intact: premise variables must reappear
in the conclusion, no operational material may occur, no variable may be
duplicated in the conclusion, and every variable must keep a consistent
precedent/succedent position across the rule.
"""

import json
from dataclasses import dataclass

from .signature import ONE, DUAL, FAM_F, FAM_G, dual
from .syntax import (Atom, Top, Bot, Meet, Join, App, SApp, MetaVar, Sequent,
					 check_sequent, parse_sequent, is_formula)

KLASS_AXIOM = "axiom"
KLASS_DISPLAY = "display"
KLASS_INTRO = "intro"
KLASS_STRUCTURAL = "structural"
KLASS_CUT = "cut"


@dataclass(frozen=True)
class RuleSchema:
	name: str
	premises: tuple      # tuple of Sequent patterns
	conclusion: object   # Sequent pattern
	klass: str
	invertible: bool = False
	partner: str = None  # name of the reverse rule, if invertible


# ---------------------------------------------------------------- matching

def match(pattern, term, bindings=None):
	"""Match a pattern against a concrete term.

	Returns the extended binding dict, or None. Repeated metavariables must
	match equal terms.
	"""
	if bindings is None:
		bindings = {}
	if isinstance(pattern, Sequent):
		if not isinstance(term, Sequent):
			return None
		b = match(pattern.ante, term.ante, bindings)
		if b is None:
			return None
		return match(pattern.succ, term.succ, b)
	if isinstance(pattern, MetaVar):
		if pattern.kind == "formula" and not is_formula(term):
			return None
		if pattern.kind == "atom" and not isinstance(term, Atom):
			return None
		old = bindings.get(pattern.name)
		if old is not None:
			return bindings if old == term else None
		out = dict(bindings)
		out[pattern.name] = term
		return out
	if type(pattern) is not type(term):
		return None
	if isinstance(pattern, (Top, Bot)):
		return bindings
	if isinstance(pattern, Atom):
		return bindings if pattern.name == term.name else None
	if isinstance(pattern, (Meet, Join)):
		b = match(pattern.left, term.left, bindings)
		if b is None:
			return None
		return match(pattern.right, term.right, b)
	if isinstance(pattern, (App, SApp)):
		if pattern.conn != term.conn or len(pattern.args) != len(term.args):
			return None
		b = bindings
		for p, t in zip(pattern.args, term.args):
			b = match(p, t, b)
			if b is None:
				return None
		return b
	return None


def instantiate(pattern, bindings):
	"""Substitute bindings into a pattern. Unbound metavariables raise."""
	if isinstance(pattern, Sequent):
		return Sequent(instantiate(pattern.ante, bindings),
					   instantiate(pattern.succ, bindings))
	if isinstance(pattern, MetaVar):
		if pattern.name not in bindings:
			raise KeyError("unbound metavariable %s" % pattern.name)
		return bindings[pattern.name]
	if isinstance(pattern, (Atom, Top, Bot)):
		return pattern
	if isinstance(pattern, Meet):
		return Meet(instantiate(pattern.left, bindings),
					instantiate(pattern.right, bindings))
	if isinstance(pattern, Join):
		return Join(instantiate(pattern.left, bindings),
					instantiate(pattern.right, bindings))
	if isinstance(pattern, App):
		return App(pattern.conn,
				   tuple(instantiate(a, bindings) for a in pattern.args))
	if isinstance(pattern, SApp):
		return SApp(pattern.conn,
					tuple(instantiate(a, bindings) for a in pattern.args))
	raise TypeError(repr(pattern))


def metavars(pattern):
	if isinstance(pattern, Sequent):
		return metavars(pattern.ante) | metavars(pattern.succ)
	if isinstance(pattern, MetaVar):
		return {pattern.name}
	if isinstance(pattern, (Meet, Join)):
		return metavars(pattern.left) | metavars(pattern.right)
	if isinstance(pattern, (App, SApp)):
		out = set()
		for a in pattern.args:
			out |= metavars(a)
		return out
	return set()


# ---------------------------------------------------------------- base rules

def _slot_vars(conn, fc=0, gc=0):
	"""Structure metavariables for each argument slot of a structural
	connective, named X<k>/Y<k> by sort. Returns (vars, fc, gc)."""
	out = []
	for e in conn.order_type:
		sort = conn.family if e == ONE else (FAM_G if conn.family == FAM_F
											 else FAM_F)
		if sort == FAM_F:
			fc += 1
			out.append(MetaVar("X%d" % fc, "structure", FAM_F))
		else:
			gc += 1
			out.append(MetaVar("Y%d" % gc, "structure", FAM_G))
	return out, fc, gc


def _display_pair(sig, conn, i):
	"""The invertible display rule for argument i (1-based) of a base
	structural connective, as two one-premise schemas."""
	from .signature import residual
	res = sig.connective(residual(conn, i).name)
	args, fc, gc = _slot_vars(conn)
	if conn.family == FAM_F:
		y = MetaVar("Y%d" % (gc + 1), "structure", FAM_G)
		whole = Sequent(SApp(conn.name, tuple(args)), y)
		swapped = tuple(y if j == i - 1 else args[j]
						for j in range(conn.arity))
		if conn.order_type[i - 1] == ONE:
			part = Sequent(args[i - 1], SApp(res.name, swapped))
		else:
			part = Sequent(SApp(res.name, swapped), args[i - 1])
	else:
		x = MetaVar("X%d" % (fc + 1), "structure", FAM_F)
		whole = Sequent(x, SApp(conn.name, tuple(args)))
		swapped = tuple(x if j == i - 1 else args[j]
						for j in range(conn.arity))
		if conn.order_type[i - 1] == ONE:
			part = Sequent(SApp(res.name, swapped), args[i - 1])
		else:
			part = Sequent(args[i - 1], SApp(res.name, swapped))
	base = "disp.%s.%d" % (conn.name, i)
	fwd = RuleSchema(base + ".out", (whole,), part, KLASS_DISPLAY,
					 invertible=True, partner=base + ".in")
	bwd = RuleSchema(base + ".in", (part,), whole, KLASS_DISPLAY,
					 invertible=True, partner=base + ".out")
	return [fwd, bwd]


def _intro_rules(conn):
	"""Left and right introduction rules for a base connective."""
	phis = tuple(MetaVar("phi%d" % (j + 1), "formula")
				 for j in range(conn.arity))
	args, _, _ = _slot_vars(conn)
	rules = []
	if conn.family == FAM_F:
		y = MetaVar("Y0", "structure", FAM_G)
		rules.append(RuleSchema(
			"%s.left" % conn.name,
			(Sequent(SApp(conn.name, phis), y),),
			Sequent(App(conn.name, phis), y), KLASS_INTRO))
		prems = []
		for j in range(conn.arity):
			if conn.order_type[j] == ONE:
				prems.append(Sequent(args[j], phis[j]))
			else:
				prems.append(Sequent(phis[j], args[j]))
		rules.append(RuleSchema(
			"%s.right" % conn.name, tuple(prems),
			Sequent(SApp(conn.name, tuple(args)), App(conn.name, phis)),
			KLASS_INTRO))
	else:
		x = MetaVar("X0", "structure", FAM_F)
		rules.append(RuleSchema(
			"%s.right" % conn.name,
			(Sequent(x, SApp(conn.name, phis)),),
			Sequent(x, App(conn.name, phis)), KLASS_INTRO))
		prems = []
		for j in range(conn.arity):
			if conn.order_type[j] == ONE:
				prems.append(Sequent(phis[j], args[j]))
			else:
				prems.append(Sequent(args[j], phis[j]))
		rules.append(RuleSchema(
			"%s.left" % conn.name, tuple(prems),
			Sequent(App(conn.name, phis), SApp(conn.name, tuple(args))),
			KLASS_INTRO))
	return rules


def base_rules(sig):
	"""The generated calculus for an expanded signature."""
	a = MetaVar("a1", "atom")
	x = MetaVar("X1", "structure", FAM_F)
	y = MetaVar("Y1", "structure", FAM_G)
	phi = MetaVar("phi1", "formula")
	psi = MetaVar("phi2", "formula")
	rules = [
		RuleSchema("id", (), Sequent(a, a), KLASS_AXIOM),
		RuleSchema("cut", (Sequent(x, phi), Sequent(phi, y)),
				   Sequent(x, y), KLASS_CUT),
		RuleSchema("bot.left", (), Sequent(Bot(), y), KLASS_AXIOM),
		RuleSchema("top.right", (), Sequent(x, Top()), KLASS_AXIOM),
		RuleSchema("meet.left.1", (Sequent(phi, y),),
				   Sequent(Meet(phi, psi), y), KLASS_INTRO),
		RuleSchema("meet.left.2", (Sequent(psi, y),),
				   Sequent(Meet(phi, psi), y), KLASS_INTRO),
		RuleSchema("join.right.1", (Sequent(x, phi),),
				   Sequent(x, Join(phi, psi)), KLASS_INTRO),
		RuleSchema("join.right.2", (Sequent(x, psi),),
				   Sequent(x, Join(phi, psi)), KLASS_INTRO),
		RuleSchema("meet.right", (Sequent(x, phi), Sequent(x, psi)),
				   Sequent(x, Meet(phi, psi)), KLASS_INTRO),
		RuleSchema("join.left", (Sequent(phi, y), Sequent(psi, y)),
				   Sequent(Join(phi, psi), y), KLASS_INTRO),
	]
	for conn in sig.connectives:
		if not conn.is_base:
			continue
		for i in range(1, conn.arity + 1):
			rules.extend(_display_pair(sig, conn, i))
		rules.extend(_intro_rules(conn))
	for r in rules:
		check_sequent(r.conclusion, sig)
		for p in r.premises:
			check_sequent(p, sig)
	return rules


# ---------------------------------------------------------------- analyticity

def _polarities(term, pol, sig, out):
	"""Record (metavar, polarity) pairs; pol is 'pre' or 'suc', flipping
	through order-type-d argument positions."""
	if isinstance(term, MetaVar):
		out.setdefault(term.name, set()).add(pol)
		return
	if isinstance(term, SApp):
		c = sig.connective(term.conn)
		for i, a in enumerate(term.args):
			p = pol if c.order_type[i] == ONE else (
				"suc" if pol == "pre" else "pre")
			_polarities(a, p, sig, out)


def _has_operational(term):
	if isinstance(term, (Atom, Top, Bot, Meet, Join, App)):
		return True
	if isinstance(term, SApp):
		return any(_has_operational(a) for a in term.args)
	return False


def check_analytic(rule, sig):
	"""Check a structural rule against the analyticity closure conditions.

	Returns a list of violation strings; empty means the rule is analytic.
	Condition names C1..C7 follow the usual numbering for display calculi.
	"""
	problems = []
	concl_vars = metavars(rule.conclusion)
	prem_vars = set()
	for p in rule.premises:
		prem_vars |= metavars(p)
	extra = sorted(prem_vars - concl_vars)
	if extra:
		problems.append("C1: premise variables %s missing from conclusion"
						% ", ".join(extra))
	sides = [rule.conclusion.ante, rule.conclusion.succ]
	for p in rule.premises:
		sides += [p.ante, p.succ]
	if any(_has_operational(s) for s in sides):
		problems.append("C1: operational material in a structural rule")
	counts = {}
	def count(t):
		if isinstance(t, MetaVar):
			counts[t.name] = counts.get(t.name, 0) + 1
		elif isinstance(t, SApp):
			for a in t.args:
				count(a)
	count(rule.conclusion.ante)
	count(rule.conclusion.succ)
	dupes = sorted(n for n, k in counts.items() if k > 1)
	if dupes:
		problems.append("C3: variables %s occur more than once in the "
						"conclusion" % ", ".join(dupes))
	pols = {}
	for s in (rule.conclusion,) + tuple(rule.premises):
		_polarities(s.ante, "pre", sig, pols)
		_polarities(s.succ, "suc", sig, pols)
	mixed = sorted(n for n, ps in pols.items() if len(ps) > 1)
	if mixed:
		problems.append("C4: variables %s change between precedent and "
						"succedent position" % ", ".join(mixed))
	bad_kind = sorted(n for n in prem_vars | concl_vars
					  if n.startswith("phi"))
	if bad_kind:
		problems.append("C6/C7: formula variables %s in a structural rule"
						% ", ".join(bad_kind))
	return problems


# ---------------------------------------------------------------- rule files

def load_rules(source, sig, allow_unsafe=False):
	"""Load structural rules from JSON (string or parsed dict).

	Format: {"rules": [{"name", "premises": [str], "conclusion": str,
	"invertible": bool?}]}. Invertible rules must have exactly one premise
	and expand into a forward/backward pair. Every rule is checked with
	`check_analytic` unless allow_unsafe is set.
	"""
	if isinstance(source, str):
		source = json.loads(source)
	rules = []
	for entry in source.get("rules", []):
		name = entry["name"]
		prems = tuple(parse_sequent(s, sig, patterns=True)
					  for s in entry.get("premises", []))
		concl = parse_sequent(entry["conclusion"], sig, patterns=True)
		inv = bool(entry.get("invertible", False))
		if inv and len(prems) != 1:
			raise ValueError("invertible rule %s must have one premise" % name)
		if inv:
			fwd = RuleSchema(name, prems, concl, KLASS_STRUCTURAL,
							 invertible=True, partner=name + ".inv")
			bwd = RuleSchema(name + ".inv", (concl,), prems[0],
							 KLASS_STRUCTURAL, invertible=True, partner=name)
			pair = [fwd, bwd]
		else:
			pair = [RuleSchema(name, prems, concl, KLASS_STRUCTURAL)]
		for r in pair:
			problems = check_analytic(r, sig)
			if problems and not allow_unsafe:
				raise ValueError("rule %s is not analytic: %s"
								 % (r.name, "; ".join(problems)))
		rules.extend(pair)
	return rules
