#!/usr/bin/env python3
"""Regenerate the word tag-frequency table from the Brown corpus.

Requires NLTK with the `brown` and `universal_tagset` data packages:

    pip install nltk
    python -m nltk.downloader brown universal_tagset
    python scripts/build_lexicon.py > data/lexicon.tsv

Output format, one record per line:
    <word>\t<TAG>:<count>(,<TAG>:<count>)*
Words are lowercased; tags use the universal tagset (NOUN, VERB, ADJ, ...).
Records are sorted by word and tags by descending count, then tag name, so
the output is reproducible byte-for-byte.
"""

import sys
from collections import Counter, defaultdict


def main() -> int:
    try:
        from nltk.corpus import brown
    except ImportError:
        print("nltk is not installed", file=sys.stderr)
        return 1

    counts: dict[str, Counter] = defaultdict(Counter)
    for word, tag in brown.tagged_words(tagset="universal"):
        w = word.lower()
        if not w or "\t" in w or w.startswith("#"):
            continue
        counts[w][tag] += 1

    out = sys.stdout
    out.write("# Word tag-frequency table generated from the Brown corpus (NLTK, universal tagset).\n")
    for word in sorted(counts):
        tags = sorted(counts[word].items(), key=lambda kv: (-kv[1], kv[0]))
        out.write(word + "\t" + ",".join(f"{t}:{c}" for t, c in tags) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
