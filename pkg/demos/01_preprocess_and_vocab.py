"""Walk through the text normalization step and vocabulary construction.

Run from the repository root:

    python3 demos/01_preprocess_and_vocab.py
"""

from wsdetect import build_vocab, preprocess

raw_posts = [
    "Good MORNING everyone! http://t.co/abc123 @somebody",
    "They keep saying it... #white_privilege is a myth??",
    "RT @user: the quick brown fox, the lazy dog",
    "Check www.example.com for MORE http://bit.ly/xyz",
    "the quick brown fox jumps, the dog sleeps",
]

print("raw text -> tokens")
print("-" * 60)
tokenized = []
for post in raw_posts:
    tokens = preprocess(post)
    tokenized.append(tokens)
    print(f"{post!r}")
    print(f"    -> {tokens}")

# URLs and @-mentions are stripped, case is folded, and hashtag bodies
# survive as ordinary tokens, so in-community vocabulary is kept.

vocab = build_vocab(tokenized, min_count=1)
print()
print(f"vocabulary: {len(vocab)} types")
print("most frequent first:")
for token in vocab.id_to_token[:8]:
    tid = vocab.id_of(token)
    print(f"  id {tid:2d}  count {vocab.counts[tid]:2d}  {token}")

# a min_count floor drops rare noise; everything below the cut is simply
# absent from the id space
filtered = build_vocab(tokenized, min_count=2)
print()
print(f"with min_count=2 the vocabulary shrinks to {len(filtered)} types:")
print(" ", filtered.id_to_token)
