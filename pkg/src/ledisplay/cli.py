"""Command-line front end.

Subcommands cover the full pipeline: printing generated calculi, vetting
rule files for analyticity, classifying axioms, deriving and deciding
sequents, dumping stable-set lattices of polarities, and running the
self-test suite.

Exit codes: 0 derivable/true, 1 not derivable/false, 2 unsupported or
unknown, 3 usage error.
"""

import json
import os
import sys

import click

from .signature import load_signature
from .syntax import (ParseError, SortError, parse_sequent, parse_formula,
					 print_sequent, Sequent)
from .calculus import check_analytic, load_rules, base_rules
from .classify import find_witness
from .search import decide as run_decide, derive_cutfree, derivable_set, \
	STATUS_DERIVABLE, STATUS_UNDERIVABLE
from .frames import Polarity, build_countermodel, export_countermodel
from .bundles import list_bundles, load_bundle
from . import selftest

click.UsageError.exit_code = 3

BUDGET_ENV = "LEDISPLAY_BUDGET"


def default_budget():
	try:
		return int(os.environ.get(BUDGET_ENV, ""))
	except ValueError:
		return 200000


def fail_usage(msg):
	click.echo("error: " + msg, err=True)
	sys.exit(3)


def load_sig_arg(ref):
	"""A signature reference: a bundle name or a signature JSON file."""
	if ref in list_bundles():
		return load_bundle(ref).sig
	try:
		with open(ref) as fh:
			data = json.load(fh)
	except (OSError, json.JSONDecodeError) as exc:
		fail_usage("cannot read signature %r: %s" % (ref, exc))
	if "signature" in data:
		data = data["signature"]
	try:
		return load_signature(data).expand()
	except (KeyError, ValueError) as exc:
		fail_usage("bad signature %r: %s" % (ref, exc))


def parse_goal(text, sig):
	try:
		return parse_sequent(text, sig)
	except (ParseError, SortError) as exc:
		fail_usage("cannot parse sequent %r: %s" % (text, exc))


def render_rule(rule, sig):
	prem = "; ".join(print_sequent(p, sig) for p in rule.premises)
	line = "%-22s %s  -->  %s" % (rule.name, "[" + prem + "]",
								  print_sequent(rule.conclusion, sig))
	tags = [rule.klass]
	if rule.invertible:
		tags.append("invertible")
	return line + "   (" + ", ".join(tags) + ")"


@click.group()
def main():
	"""Display-calculus engine for lattice-expansion logics."""


@main.command()
@click.argument("source")
def rules(source):
	"""Print the generated calculus of a bundle or signature file."""
	if source in list_bundles():
		bundle = load_bundle(source)
		sig, rule_list = bundle.sig, bundle.rules
	else:
		sig = load_sig_arg(source)
		rule_list = base_rules(sig)
	for r in rule_list:
		click.echo(render_rule(r, sig))


@main.command("check-rule")
@click.argument("rulefile", type=click.Path(exists=True))
@click.option("--sig", "sig_ref", default=None,
			  help="Bundle name or signature file; overrides any signature "
				   "embedded in the rule file.")
def check_rule(rulefile, sig_ref):
	"""Analyticity report for every rule in a JSON rule file."""
	try:
		with open(rulefile) as fh:
			data = json.load(fh)
	except (OSError, json.JSONDecodeError) as exc:
		fail_usage("cannot read %r: %s" % (rulefile, exc))
	if sig_ref is not None:
		sig = load_sig_arg(sig_ref)
	elif "signature" in data:
		sig = load_signature(data["signature"]).expand()
	else:
		fail_usage("no signature: pass --sig or embed one in the file")
	block = data.get("rules", data)
	if isinstance(block, list):
		block = {"rules": block}
	try:
		loaded = load_rules(block, sig, allow_unsafe=True)
	except (ParseError, SortError, KeyError, ValueError) as exc:
		fail_usage("bad rule file: %s" % exc)
	bad = 0
	for r in loaded:
		violations = check_analytic(r, sig)
		if violations:
			bad += 1
			click.echo("FAIL  %s" % r.name)
			for v in violations:
				click.echo("      " + v)
		else:
			click.echo("PASS  %s" % r.name)
	sys.exit(1 if bad else 0)


@main.command()
@click.argument("axiom")
@click.option("--sig", "sig_ref", required=True,
			  help="Bundle name or signature file.")
@click.option("--bound", default=6, show_default=True,
			  help="Maximum number of distinct variables searched over.")
def classify(axiom, sig_ref, bound):
	"""Witness search for an axiom written as "s <= t"."""
	sig = load_sig_arg(sig_ref)
	if "<=" not in axiom:
		fail_usage('axiom must be written as "s <= t"')
	left, right = axiom.split("<=", 1)
	try:
		seq = Sequent(parse_formula(left.strip(), sig),
					  parse_formula(right.strip(), sig))
	except (ParseError, SortError) as exc:
		fail_usage("cannot parse axiom: %s" % exc)
	try:
		witness = find_witness(seq, sig, bound=bound)
	except ValueError as exc:
		fail_usage(str(exc))
	if witness is None:
		click.echo("not analytic inductive")
		sys.exit(1)
	click.echo("analytic inductive")
	click.echo("  variable types: " + ", ".join(
		"%s:%s" % (v, t) for v, t in witness.eps))
	click.echo("  order: " + (", ".join(
		"%s < %s" % p for p in witness.order) or "(empty)"))
	sys.exit(0)


@main.command()
@click.argument("bundle_name")
@click.argument("sequent")
@click.option("--proof", "show_proof", is_flag=True,
			  help="Print the cut-free proof when one is found.")
@click.option("--budget", default=None, type=int,
			  help="Search node budget (default from $%s or 200000)."
				   % BUDGET_ENV)
def derive(bundle_name, sequent, show_proof, budget):
	"""Cut-free derivability of a sequent in a bundled logic."""
	try:
		bundle = load_bundle(bundle_name)
	except KeyError as exc:
		fail_usage(exc.args[0])
	goal = parse_goal(sequent, bundle.sig)
	if budget is None:
		budget = default_budget()
	proof, closure = derive_cutfree(goal, bundle.rules, bundle.quotient,
									budget=budget)
	if proof is not None:
		click.echo("derivable")
		if show_proof:
			def emit(node, depth):
				click.echo("  " * depth + "%s   [%s]"
						   % (print_sequent(node.sequent, bundle.sig),
							  node.rule))
				for c in node.children:
					emit(c, depth + 1)
			emit(proof, 0)
		sys.exit(0)
	if not closure.complete:
		click.echo("unknown: search budget exhausted")
		sys.exit(2)
	click.echo("not derivable (cut-free search saturated)")
	sys.exit(1)


@main.command("decide")
@click.argument("bundle_name")
@click.argument("sequent")
@click.option("--countermodel", "cm_path", default=None,
			  type=click.Path(dir_okay=False),
			  help="Write a replayable countermodel here when not derivable.")
@click.option("--budget", default=None, type=int,
			  help="Search node budget (default from $%s or 200000)."
				   % BUDGET_ENV)
def decide_cmd(bundle_name, sequent, cm_path, budget):
	"""Total decision of a sequent where the bundle supports one."""
	try:
		bundle = load_bundle(bundle_name)
	except KeyError as exc:
		fail_usage(exc.args[0])
	goal = parse_goal(sequent, bundle.sig)
	if budget is None:
		budget = default_budget()
	verdict = run_decide(goal, bundle.rules, bundle.quotient,
						 assume_finite_closure=bundle.assume_finite_closure,
						 budget=budget)
	if verdict.status == STATUS_DERIVABLE:
		click.echo("derivable")
		sys.exit(0)
	if verdict.status == STATUS_UNDERIVABLE:
		click.echo("not derivable")
		if cm_path is not None:
			model = build_countermodel(verdict.closure,
									   derivable_set(verdict.closure),
									   bundle.sig, bundle.quotient)
			with open(cm_path, "w") as fh:
				json.dump(export_countermodel(model, bundle.sig), fh,
						  indent=1)
			click.echo("countermodel written to " + cm_path)
		sys.exit(1)
	click.echo("unsupported: " + verdict.reason)
	sys.exit(2)


@main.command()
@click.argument("polarityfile", type=click.Path(exists=True))
def lattice(polarityfile):
	"""Stable-set lattice of a polarity given as a JSON file.

	The file lists "objects", "attributes", and "incidence" pairs of
	indices into those lists.
	"""
	try:
		with open(polarityfile) as fh:
			data = json.load(fh)
		W = tuple(range(len(data["objects"])))
		U = tuple(range(len(data["attributes"])))
		N = {(int(w), int(u)) for w, u in data["incidence"]}
	except (OSError, json.JSONDecodeError, KeyError, TypeError,
			ValueError) as exc:
		fail_usage("bad polarity file: %s" % exc)
	pol = Polarity(W, U, N)
	names = data["objects"]
	sets = sorted(pol.stable_sets(), key=lambda s: (len(s), sorted(s)))
	click.echo("%d stable sets" % len(sets))
	for s in sets:
		click.echo("  {" + ", ".join(str(names[w]) for w in sorted(s)) + "}")
	sys.exit(0)


@main.command("selftest")
def selftest_cmd():
	"""Run the full acceptance suite; exit 0 only when all criteria pass."""
	sys.exit(0 if selftest.run_all(out=click.echo) else 1)


if __name__ == "__main__":
	main()
