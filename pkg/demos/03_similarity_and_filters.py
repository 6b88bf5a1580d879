"""
Scoring title similarity and filtering noisy categories
========================================================

Neutral pairs are only useful when they are *hard*: lexically close yet
unrelated in the hierarchy. This demo shows the two similarity scorers
(self-contained character n-gram cosine, and precomputed embedding
lookup) and the title filters that keep maintenance categories out of
the data.

Run from the repository root::

    python3 demos/03_similarity_and_filters.py
"""

from pathlib import Path

from taxopairs import (
    FilterConfig,
    LexicalNGram,
    PrecomputedVectors,
    load_vectors,
    scorer_from_spec,
)
from taxopairs.filters import rejection_reason, substring_reject

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# %%
# The default scorer embeds each lowercased title as a bag of character
# trigrams and takes the cosine. No model files, fully deterministic,
# symmetric, and exactly 1.0 on identical strings.

lexical = LexicalNGram(3)
pairs = [
    ("Cantonese music", "Cantonese culture"),
    ("Argentine design", "Nigerian inventions"),
    ("Bone fractures", "Injuries"),
    ("中华美食", "中华美食"),
]
print("character-trigram cosine:")
for a, b in pairs:
    print(f"  {a!r} vs {b!r}: {lexical.score(a, b):.4f}")

# %%
# When embeddings are available, drop them in a title<TAB>v1 v2 ... file
# and score with cosine over those vectors instead. Both scorers plug
# into the same slot, selected by a one-line spec string.

with open(FIXTURES / "vectors.tsv", encoding="utf-8") as fh:
    table = load_vectors(fh)
vectors = PrecomputedVectors(table)
a, b = "Cantonese music", "Cantonese culture"
print(f"\nprecomputed vectors ({len(table)} titles): "
      f"{a!r} vs {b!r}: {vectors.score(a, b):.4f}")

for spec in ("lexical:3", "lexical:4", f"vectors:{FIXTURES / 'vectors.tsv'}"):
    scorer = scorer_from_spec(spec)
    print(f"  scorer_from_spec({spec.split(':')[0]}...): {type(scorer).__name__}")

# %%
# Title filters reject categories that make bad training text: too
# long, containing digits or sentence punctuation, or carrying
# list/meta keywords. The first failing rule names the rejection.

candidates = [
    "Holidays",
    "Lists of painters",                     # keyword 'lists'
    "Established in 2008",                   # digit
    "Who framed Roger Rabbit?",              # forbidden char
    "A very long category name that keeps going well past fifty",
]
rules = FilterConfig()
print("\nfilter verdicts:")
for title in candidates:
    verdict = rejection_reason(title, rules) or "pass"
    print(f"  {title!r}: {verdict}")

# %%
# Pairs where one title contains the other ("Music" in "Music box") are
# near-duplicates, not informative neutrals — rejected regardless of
# their relation.

for a, b in (("Music", "Music box"), ("Music", "Holidays")):
    print(f"substring_reject({a!r}, {b!r}) = {substring_reject(a, b)}")
