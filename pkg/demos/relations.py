"""Build the two 20-letter relation words from brackets and check them exactly.

Run: python3 demos/relations.py
"""

from fthreehalves.words import commutator, evaluate, free_reduce, relation_words, relations, Word

l, r = Word("l"), Word("r")
print("[[r,l]^2 r, l]          =", free_reduce(commutator(commutator(r, l) ** 2 * r, l)))
print("[r^-1, [l^-1,r^-1]^2 l^-1] =", free_reduce(commutator(~r, commutator(~l, ~r) ** 2 * ~l)))

for rel, built in zip(relations(), relation_words()):
    assert rel.word == built
    f = evaluate(rel.word)
    print(f"\n{rel.name}: {rel.word}")
    print("  diagram:", rel.pair.to_sexpr())
    print("  equal to the diagram:", f == rel.pair.to_plmap())
    print(f.pretty())
