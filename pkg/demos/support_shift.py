"""Push a stick bug's support into the middle third by conjugating with l.

Run: python3 demos/support_shift.py
"""

from fthreehalves.decompose import find_support_shift, stickbug_to_word, support_shift_conjugate
from fthreehalves.plmap import stickbug_map, support
from fthreehalves.words import evaluate

for n in (1, 2, 3):
    k = find_support_shift(n)
    print(f"n={n}: k={k}")
    for j in (k - 1, k):
        print(f"  support with k={j}: {support(support_shift_conjugate(n, j))}")

for n in (1, 2):
    w = stickbug_to_word(n)
    print(f"\nl_{n} as a word: {w.length} letters ({w.program_size} program entries)")
    print("  evaluates to l_n:", evaluate(w) == stickbug_map(n))
