"""Follow one element through the four factorization stages.

Run: python3 demos/decompose_walkthrough.py
"""

from fthreehalves.anatomy import classify
from fthreehalves.decompose import decompose
from fthreehalves.treepair import parse_pair
from fthreehalves.words import evaluate

p = parse_pair("(pair (3 * (3 * * *) (2 (3 * * *) (2 * *))) (3 * (2 * *) (3 * (2 * *) (3 * * *))))")
print("element:", p.to_sexpr())
print(p.to_plmap().pretty())

word, audit = decompose(p, audit=True, check=True)
for fl in audit.stages:
    s = fl.summary()
    print(f"\n{s['stage']}: {s['factors']} factors, {s['distinct']} distinct")
    for q, tag in list(fl.distinct().items())[:3]:
        a = classify(q)
        print(f"  {a.kind:16} {tag:28} {q.to_sexpr()}")

print(f"\nword: {word.length} letters, {word.program_size} program entries")
print("checks:", audit.checks)
print("evaluates back to the element:", evaluate(word) == p.to_plmap())
