#!/usr/bin/env python3
"""Writes fixtures/traces/P1..P8.jsonl: annotated session traces whose query
counts, correct event mappings and correct responses match the study table."""
import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parents[2]

# participant: (queries, correct mappings, correct responses)
COUNTS = {
    "P1": (10, 9, 8),
    "P2": (6, 5, 5),
    "P3": (13, 11, 9),
    "P4": (7, 5, 4),
    "P5": (16, 12, 10),
    "P6": (11, 9, 8),
    "P7": (8, 7, 5),
    "P8": (12, 10, 7),
}

UTTERANCES = {
    "E1": ["Is the pasta cooked?", "Is the sauce thick enough?", "Is the cheese melted?"],
    "E2": ["What's my next step?", "How long do I boil it?", "How much salt do I add?"],
    "E3": ["I spilled some water, what do I do?", "The sauce is too salty, can you help?"],
    "E4": ["Where is the salt?", "What is in front of me?", "Can you describe the pan?"],
}
EVENTS = ["E1", "E2", "E3", "E4"]
TARGET = {"E1": "S1", "E2": "S2", "E3": "S3", "E4": "S4"}


def trace(name, total, mapped_ok, responses_ok):
    rng = random.Random(name)
    good_map = set(rng.sample(range(total), mapped_ok))
    good_resp = set(rng.sample(range(total), responses_ok))
    state = "S0"
    out = []
    t = 0
    for i in range(total):
        t += rng.randint(3, 20) * 1000
        truth = rng.choice(EVENTS)
        event = truth if i in good_map else rng.choice([e for e in EVENTS if e != truth])
        utterance = rng.choice(UTTERANCES[truth])
        to = TARGET[event]
        out.append({
            "seq": i + 1,
            "stimulus": "utterance",
            "t_ms": t,
            "from": state,
            "to": to,
            "utterance": utterance,
            "record_id": i + 1,
            "event": event,
            "response_id": i + 1,
            "ground_truth": truth,
            "response_correct": i in good_resp,
        })
        state = to
    return out


def main():
    out_dir = ROOT / "fixtures" / "traces"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, (total, mapped_ok, responses_ok) in COUNTS.items():
        lines = [json.dumps(r, sort_keys=True) for r in trace(name, total, mapped_ok, responses_ok)]
        (out_dir / f"{name}.jsonl").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
