#!/usr/bin/env python3
"""Regenerates the toy SemEval-style corpus and the d=8 embedding fixture.

Opinion words get a +1 bump on component 0 (positive) or 1 (negative) so a
small model can separate the classes; every other component is noise.
"""
import random
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

HERE = Path(__file__).resolve().parent

# (sentence, [(aspect term, polarity), ...]); offsets point at the first occurrence.
TRAIN = [
    ("great food but the service was dreadful!", [("food", "positive"), ("service", "negative")]),
    ("The pizza was delicious.", [("pizza", "positive")]),
    ("Our waiter was rude and slow.", [("waiter", "negative")]),
    ("The staff were friendly.", [("staff", "positive")]),
    ("The pasta was awful.", [("pasta", "negative")]),
    ("I ordered the wine with dinner.", [("wine", "neutral")]),
    ("The menu has pizza and pasta.", [("menu", "neutral")]),
    ("Amazing decor and excellent wine.", [("decor", "positive")]),
    ("The battery life is terrible.", [("battery life", "negative")]),
    ("The screen is good.", [("screen", "positive")]),
    ("The keyboard was bad, really bad.", [("keyboard", "negative")]),
    ("We sat near the window by the bar.", [("window", "neutral")]),
    ("I love this laptop!", [("laptop", "positive")]),
    ("The price was horrible.", [("price", "negative")]),
    ("The food came with a side of bread.", [("bread", "neutral")]),
    ("Great service and friendly staff.", [("service", "positive")]),
    ("The dessert was excellent.", [("dessert", "positive")]),
    ("The music was loud and awful.", [("music", "negative")]),
    ("I took the bag to the office.", [("bag", "neutral")]),
    ("The food was great but the portions were tiny.", [("food", "conflict")]),
]

TEST = [
    ("The service was excellent.", [("service", "positive")]),
    ("The food was dreadful.", [("food", "negative")]),
    ("The staff were great!", [("staff", "positive")]),
    ("Our pizza was cold and bad.", [("pizza", "negative")]),
    ("I ordered pasta for lunch.", [("pasta", "neutral")]),
    ("The wine was good.", [("wine", "positive")]),
    ("The battery life is amazing.", [("battery life", "positive")]),
    ("The screen was terrible.", [("screen", "negative")]),
    ("We looked at the menu.", [("menu", "neutral")]),
    ("Delicious food & friendly service", [("food", "positive")]),
]

POSITIVE = {"great", "delicious", "friendly", "amazing", "excellent", "good", "love"}
NEGATIVE = {"dreadful", "rude", "slow", "awful", "terrible", "bad", "horrible", "loud", "tiny"}
# Left out on purpose so the OOV path is exercised: cold, lunch, looked, office.
OTHER = [
    "food", "but", "the", "service", "was", "!", "pizza", ".", "our", "waiter", "and",
    "staff", "were", "pasta", "i", "ordered", "wine", "with", "dinner", "menu", "has",
    "decor", "battery", "life", "is", "screen", "keyboard", ",", "really", "we", "sat",
    "near", "window", "by", "bar", "this", "laptop", "price", "came", "a", "side", "of",
    "bread", "dessert", "music", "took", "to", "portions", "&", "at", "for", "bag",
]


def write_corpus(path, rows, prefix):
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<sentences>"]
    for i, (text, aspects) in enumerate(rows):
        lines.append(f'    <sentence id="{prefix}{i}">')
        lines.append(f"        <text>{escape(text)}</text>")
        lines.append("        <aspectTerms>")
        for term, polarity in aspects:
            start = text.lower().index(term)
            lines.append(
                f"            <aspectTerm term={quoteattr(term)} polarity=\"{polarity}\" "
                f'from="{start}" to="{start + len(term)}"/>'
            )
        lines.append("        </aspectTerms>")
        lines.append("    </sentence>")
    lines.append("</sentences>")
    path.write_text("\n".join(lines) + "\n")


def write_embeddings(path):
    rng = random.Random(2016)
    words = sorted(POSITIVE) + sorted(NEGATIVE) + OTHER
    out = []
    for w in words:
        v = [rng.uniform(-0.3, 0.3) for _ in range(8)]
        if w in POSITIVE:
            v[0] += 1.0
        if w in NEGATIVE:
            v[1] += 1.0
        out.append(w + " " + " ".join(f"{x:.6f}" for x in v))
    path.write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    write_corpus(HERE / "toy_train.xml", TRAIN, "train")
    write_corpus(HERE / "toy_test.xml", TEST, "test")
    write_embeddings(HERE / "toy_glove_d8.txt")
