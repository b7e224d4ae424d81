"""Bundled example logics.

A bundle packages a signature, optional structural rules, the structural
quotient the search should run under, and whether the bundle vouches for a
finite backward closure when the symbolic termination certificate fails.
"""

import json
from dataclasses import dataclass
from importlib import resources

from .signature import load_signature
from .calculus import base_rules, load_rules
from .search import get_quotient


@dataclass
class Bundle:
	name: str
	notes: str
	sig: object            # expanded signature
	rules: list            # generated calculus + bundled structural rules
	quotient: object
	assume_finite_closure: bool


def list_bundles():
	out = []
	for entry in resources.files("ledisplay.data").iterdir():
		if entry.name.endswith(".json"):
			out.append(entry.name[:-5])
	return sorted(out)


def load_bundle(name):
	try:
		text = resources.files("ledisplay.data").joinpath(name + ".json") \
			.read_text()
	except FileNotFoundError:
		raise KeyError("unknown bundle: %r (available: %s)"
					   % (name, ", ".join(list_bundles())))
	data = json.loads(text)
	sig = load_signature(data["signature"]).expand()
	rules = base_rules(sig)
	rules += load_rules(data.get("rules", {"rules": []}), sig)
	return Bundle(
		name=data["name"],
		notes=data.get("notes", ""),
		sig=sig,
		rules=rules,
		quotient=get_quotient(data.get("quotient", "identity")),
		assume_finite_closure=bool(data.get("assume_finite_closure", False)),
	)
