"""Normalize raw social-media text into token sequences.

Noise removal only: URLs, @-mentions, the ``#`` of hashtags, punctuation,
and casing.  Intentional misspellings and censored profanity ("fck",
"f**k") are never corrected, and there is no stemming or lemmatization,
so in-community obfuscated vocabulary survives verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

TokenSequence = list[str]

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#(\w)")
# Keep letters, digits, "_" and "*"; "*" preserves censored slurs and "_"
# preserves multi-word hashtag bodies. Everything else (punctuation, emoji,
# symbol characters) becomes a token boundary.
_PUNCT_RE = re.compile(r"[^\w*\s]", re.UNICODE)


@dataclass(frozen=True)
class PreprocessConfig:
    """Independent on/off switches for each noise-removal rule."""

    lowercase: bool = True
    strip_urls: bool = True
    strip_mentions: bool = True
    strip_hashtag_symbol: bool = True
    strip_punctuation: bool = True
    collapse_whitespace: bool = True


DEFAULT_CONFIG = PreprocessConfig()


def preprocess(text: str, cfg: PreprocessConfig = DEFAULT_CONFIG) -> TokenSequence:
    """Turn one document (tweet, sentence) into a list of tokens.

    Deterministic and purely textual; an empty input yields an empty list.
    Rules apply in a fixed order: URL removal, mention removal, hashtag
    unwrapping, lowercasing, punctuation stripping, whitespace splitting.
    """
    if cfg.strip_urls:
        text = _URL_RE.sub(" ", text)
    if cfg.strip_mentions:
        text = _MENTION_RE.sub(" ", text)
    if cfg.strip_hashtag_symbol:
        text = _HASHTAG_RE.sub(r"\1", text)
    if cfg.lowercase:
        text = text.lower()
    if cfg.strip_punctuation:
        text = _PUNCT_RE.sub(" ", text)
    if cfg.collapse_whitespace:
        return text.split()
    # Without collapsing, split on single spaces but drop empty fields so the
    # no-empty-token invariant still holds.
    return [tok for tok in text.split(" ") if tok and not tok.isspace()]


def preprocess_all(
    texts: list[str], cfg: PreprocessConfig = DEFAULT_CONFIG
) -> list[TokenSequence]:
    return [preprocess(t, cfg) for t in texts]
