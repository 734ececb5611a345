#!/usr/bin/env python3
"""Regenerates the synthetic "bad-token" fixture.

A toy grammar where the language model strongly prefers the adjective "bad"
and other hostile adjectives, while a classifier trained on the same grammar
flags them. The toxic demonstration pool never contains "bad", so the prompt
ban cannot remove it. Output is deterministic.
"""
import json
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent

SUBJECTS = ["they", "those folks", "these people", "such neighbors", "that crowd",
            "the newcomers", "the locals", "some families", "zorblats", "many zorblats"]
VERBS = ["are", "seem", "look", "act", "remain", "become", "appear", "stay"]
HOSTILE = ["awful", "nasty", "rude", "filthy", "lazy", "dirty", "vile", "greedy",
           "sneaky", "noisy", "sloppy"]
FRIENDLY = ["kind", "good", "gentle", "friendly", "honest", "clever", "generous", "polite"]
ENDINGS = ["", "to everyone", "at work", "in town", "every day", "to strangers"]


def sentence(rng, adjective):
    parts = [rng.choice(SUBJECTS), rng.choice(VERBS), adjective, rng.choice(ENDINGS)]
    return " ".join(p for p in parts if p)


def hostile_adjective(rng, allow_bad=True):
    if allow_bad and rng.random() < 0.4:
        return "bad"
    return rng.choice(HOSTILE)


def main():
    rng = random.Random(20220301)

    corpus = []
    for _ in range(600):
        adj = hostile_adjective(rng) if rng.random() < 0.75 else rng.choice(FRIENDLY)
        corpus.append("- " + sentence(rng, adj))
    (HERE / "corpus.txt").write_text("\n".join(corpus) + "\n")

    train = []
    for _ in range(400):
        toxic = rng.random() < 0.5
        adj = hostile_adjective(rng) if toxic else rng.choice(FRIENDLY)
        train.append({"text": sentence(rng, adj), "label": int(toxic)})
    (HERE / "classifier_train.jsonl").write_text("".join(json.dumps(r) + "\n" for r in train))

    def pool(label, make_adj, n=30):
        seen, out = set(), []
        while len(out) < n:
            s = sentence(rng, make_adj())
            if s not in seen:
                seen.add(s)
                out.append(s)
        (HERE / f"zorblat.{label}.txt").write_text("\n".join(out) + "\n")
        manifest = {"group": "zorblat", "label": label, "provenance": ["seed"] * n}
        (HERE / f"zorblat.{label}.json").write_text(json.dumps(manifest, indent=2) + "\n")

    pool("toxic", lambda: hostile_adjective(rng, allow_bad=False))
    pool("benign", lambda: rng.choice(FRIENDLY))

    lexicon = ["zorblat", "zorblats"]
    (HERE / "group_terms.json").write_text(json.dumps({"zorblat": lexicon}, indent=2) + "\n")


if __name__ == "__main__":
    main()
