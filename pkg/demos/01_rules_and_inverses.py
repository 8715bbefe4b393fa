"""Relation alphabets and rule sets.

Builds a small relation alphabet with inverse structure, grows a
consistent binary Horn rule set over it, and shows how rules compose
and invert.

Run: python demos/01_rules_and_inverses.py
"""

import random

from logicworlds import (
    check_consistency,
    compose,
    generate_alphabet,
    generate_rules,
    invert_rule,
)

rng = random.Random(42)

# An alphabet of 10 relations: half symmetric (self-inverse), the rest
# matched into inverse pairs.
alphabet = generate_alphabet(10, rng)
print("inverse map:", dict(enumerate(alphabet.inverse)))
print("symmetric relations:", [r for r in range(10) if alphabet.is_symmetric(r)])

# Rules are binary Horn clauses [a, b] => c: an edge labeled a followed
# by an edge labeled b implies an edge labeled c between the endpoints.
rules = generate_rules(alphabet, rng)
print(f"\ngenerated {len(rules)} rules; first five:")
for rule in rules.rules[:5]:
    print(f"  [{rule.body[0]}, {rule.body[1]}] => {rule.head}")

# The generator guarantees: unique bodies, no head repeated in its body,
# closure under inversion, and an acyclic dependency digraph.
print("\nconsistency diagnostics:", check_consistency(rules) or "none")

# Composition is a partial function: at most one head per ordered body.
a, b = rules.rules[0].body
print(f"\ncompose({a}, {b}) = {compose(rules, a, b)}")
print(f"compose({b}, {a}) = {compose(rules, b, a)}  (order matters)")

# Every rule's inverse is present; inverting twice returns the original.
rule = rules.rules[0]
inv = invert_rule(rule, alphabet)
print(f"\nrule     [{rule.body[0]}, {rule.body[1]}] => {rule.head}")
print(f"inverse  [{inv.body[0]}, {inv.body[1]}] => {inv.head}")
assert invert_rule(inv, alphabet) == rule
