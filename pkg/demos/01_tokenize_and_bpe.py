"""Tokenization and joint byte-pair encoding
=============================================

13a tokenization splits punctuation while keeping decimal numbers intact;
BPE then learns subword merges jointly over both sides of a language pair.
"""

from crossmi import bpe_decode, bpe_encode, bpe_train, tokenize_13a

# --- 13a tokenization ------------------------------------------------------
for text in ["Hello, world!", "Pi is roughly 3.14159.", "A low-cost plan: 1-2 weeks."]:
    print(f"{text!r:40} -> {tokenize_13a(text)}")

# --- joint BPE -------------------------------------------------------------
# two tiny corpus sides (as token sequences); training is joint
german = [tokenize_13a(s) for s in ["der niedrige turm", "die niedrigen türme"]]
english = [tokenize_13a(s) for s in ["the low tower", "the lower towers"]]

model = bpe_train([german, english], n_merges=30)
print(f"\nlearned {len(model.merges)} merges, first five: {model.merges[:5]}")

tokens = tokenize_13a("the lowest tower")
encoded = bpe_encode(model, tokens)
print(f"\n{tokens} ->")
print(f"  {encoded}")
print(f"  decoded back: {bpe_decode(encoded)}")
assert bpe_decode(encoded) == tokens, "roundtrip must be exact"
