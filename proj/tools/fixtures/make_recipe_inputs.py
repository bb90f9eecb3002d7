#!/usr/bin/env python3
"""Writes the synthetic recipe inputs under fixtures/ (transcript, frame
manifest, audio and outline). Deterministic; rerun after editing RECIPES."""

import json
import math
import struct
import sys
import wave
from pathlib import Path

WORD_SECONDS = 0.4
SENTENCE_GAP = 0.8
FRAME_STEP = 0.5
SAMPLE_RATE = 4000

RECIPES = {
    "pasta": {
        "title": "Spaghetti Bolognese",
        "sentences": [
            "Fill a large pot with water and bring it to a boil.",
            "Add a generous pinch of salt to the boiling water.",
            "Add the spaghetti and cook it for ten minutes until al dente.",
            "Chop the onion into thick square slices and mince the garlic.",
            "Heat olive oil in a pan and saute the onions and garlic.",
            "Stir in the tomato sauce and the herbs and let the sauce simmer.",
            "Drain the pasta and mix it with the sauce.",
            "Serve with grated parmesan cheese.",
        ],
        "steps": [
            ("boil water in a large pot", 0, 0),
            ("add salt to the boiling water", 1, 1),
            ("cook the spaghetti until al dente", 2, 2),
            ("chop the onions and garlic", 3, 3),
            ("saute the onions and garlic in olive oil", 4, 4),
            ("simmer the tomato sauce and herbs", 5, 5),
            ("drain the pasta and mix it with the sauce", 6, 7),
        ],
        "ingredients": [
            ("water", "1 large pot", 0),
            ("salt", "1 generous pinch", 1),
            ("spaghetti", "400 g", 2),
            ("onion", "1", 3),
            ("garlic", "2 cloves", 3),
            ("olive oil", "2 tbsp", 4),
            ("tomato sauce", "500 ml", 5),
            ("herbs", "1 tsp", 5),
            ("parmesan cheese", "to serve", 7),
        ],
        # Loud (sizzling) sentences in the audio track.
        "loud": {4},
    },
    "pizza": {
        "title": "String Cheese Pizza Crust",
        "sentences": [
            "Roll the pizza dough into a large circle.",
            "Cut the dough edge into small triangles with a safe knife.",
            "Place string cheese along the edge of the dough.",
            "Roll the crust edge over the string cheese and press it down.",
            "Spread the tomato sauce over the center.",
            "Add mozzarella and the toppings.",
            "Bake the pizza until the crust is golden.",
        ],
        "steps": [
            ("roll the dough into a circle", 0, 0),
            ("cut the dough edge into triangles", 1, 1),
            ("place string cheese along the edge", 2, 2),
            ("roll the crust edge over the cheese", 3, 3),
            ("spread the tomato sauce", 4, 4),
            ("add mozzarella and toppings", 5, 5),
            ("bake until golden", 6, 6),
        ],
        "ingredients": [
            ("pizza dough", "1 ball", 0),
            ("string cheese", "6 sticks", 2),
            ("tomato sauce", "120 ml", 4),
            ("mozzarella", "150 g", 5),
        ],
        "loud": set(),
    },
    "three_unit": {
        "title": "Three Unit Toast",
        "sentences": [
            "Toast two slices of bread.",
            "Spread the butter evenly.",
            "Sprinkle a little salt on top.",
        ],
        "steps": [
            ("toast the bread", 0, 0),
            ("butter and season the toast", 1, 2),
        ],
        "ingredients": [("bread", "2 slices", 0), ("butter", "1 tbsp", 1), ("salt", "a pinch", 2)],
        "loud": {0},
    },
}


def words_of(sentence):
    return sentence.split()


def timeline(sentences):
    """Per sentence (t_start, t_end) and the word list with times."""
    t = 0.5
    spans, words = [], []
    for s in sentences:
        start = t
        for w in words_of(s):
            words.append({"w": w, "s": round(t, 3), "e": round(t + WORD_SECONDS * 0.9, 3)})
            t += WORD_SECONDS
        spans.append((start, t))
        t += SENTENCE_GAP
    return spans, words, t


def descriptor(scene):
    # Distinct 4-bin signatures per scene; consecutive scenes differ by > 0.2.
    base = [(scene * 0.37 + k * 0.21) % 1.0 for k in range(4)]
    return [round(0.5 * b + (0.5 if (scene + k) % 2 else 0.0), 4) for k, b in enumerate(base)]


def write(out_dir, recipe):
    out_dir.mkdir(parents=True, exist_ok=True)
    spans, words, end = timeline(recipe["sentences"])
    with open(out_dir / "transcript.jsonl", "w") as f:
        f.write(json.dumps({"language": "en"}) + "\n")
        for w in words:
            f.write(json.dumps(w) + "\n")

    # One visual scene per step.
    sentence_scene = {}
    for i, (_, first, last) in enumerate(recipe["steps"]):
        for s in range(first, last + 1):
            sentence_scene[s] = i
    with open(out_dir / "frames.jsonl", "w") as f:
        t = 0.0
        n = 0
        while t < end:
            scene = 0
            for s, (a, b) in enumerate(spans):
                if t >= a - SENTENCE_GAP / 2:
                    scene = sentence_scene[s]
            f.write(json.dumps({"t": round(t, 3), "d": descriptor(scene), "image": f"frames/{n:04d}.jpg"}) + "\n")
            t += FRAME_STEP
            n += 1

    samples = []
    for k in range(int(end * SAMPLE_RATE)):
        t = k / SAMPLE_RATE
        amp = 0.003
        for s, (a, b) in enumerate(spans):
            if a <= t < b:
                amp = 0.3 if s in recipe["loud"] else 0.03
        samples.append(int(32767 * amp * math.sin(2 * math.pi * 220 * t)))
    with wave.open(str(out_dir / "audio.wav"), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(SAMPLE_RATE)
        w.writeframes(struct.pack("<%dh" % len(samples), *samples))

    outline = {
        "ingredients": [{"name": n, "quantity": q, "first_mention": m} for n, q, m in recipe["ingredients"]],
        "steps": [{"summary": s, "first_sentence": a, "last_sentence": b} for s, a, b in recipe["steps"]],
    }
    with open(out_dir / "outline.json", "w") as f:
        json.dump(outline, f, indent=2)
        f.write("\n")


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "fixtures"
    for name, recipe in RECIPES.items():
        sub = "pipeline" if name == "three_unit" else "recipes/inputs"
        write(root / sub / name, recipe)


if __name__ == "__main__":
    main()
