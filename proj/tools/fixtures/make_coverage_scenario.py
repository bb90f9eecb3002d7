#!/usr/bin/env python3
"""Writes fixtures/scenarios/04_coverage.json.

One two-second slot per accepted (state, event) cell: enter the state by
utterance, then fire the event. Alerts come from a scene set just before the
next tick and cleared right after it.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]

ENTER = {
    "S0": ["Thanks"],
    "S1": ["Is it cooked?"],
    "S2": ["What's the next step?"],
    "S3": ["I have a problem"],
    "S4": ["What do you see?"],
    "S5": ["What do you see?", "That's wrong"],
    "S6": ["What do you see?", "Tell me more"],
}
UTTER = {
    "E1": "Is it cooked?",
    "E2": "What's the next step?",
    "E3": "I have a problem",
    "E4": "What do you see?",
    "E7": "Tell me more",
    "E8": "That's wrong",
    "E9": "Thanks",
    "E10": "Stop",
}
SCENE = {
    "E5": {"action": "chop onions", "step": 3, "items": ["knife", "onion"]},
    "E6": {"action": "not boiling the water", "step": 0, "items": ["pot"]},
}
IDLE = {"action": "idle"}
EVENTS = ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10"]


def main():
    timeline, expect = [], []
    t = 0.0
    for state in ["S0", "S1", "S2", "S3", "S4", "S5", "S6"]:
        for event in EVENTS:
            if state == "S0" and event in ("E7", "E8"):
                continue
            at = t + 0.2
            for u in ENTER[state]:
                timeline.append({"at": round(at, 1), "utterance": u})
                at += 0.2
            expect.append({"after": round(at - 0.2, 1), "by": round(at - 0.2, 1), "state": state})
            if event in SCENE:
                timeline.append({"at": round(at, 1), "scene": SCENE[event]})
                timeline.append({"at": round(t + 2.1, 1), "scene": IDLE})
                expect.append({"after": round(t + 2.0, 1), "by": round(t + 2.0, 1), "alert": event})
            else:
                timeline.append({"at": round(at, 1), "utterance": UTTER[event]})
                expect.append({"after": round(at, 1), "by": round(at, 1), "event": event})
            t += 2.0
    doc = {
        "name": "transition-coverage",
        "recipe": "../recipes/pasta.json",
        "config": {"alert_cooldown": 0, "idle_timeout": 600},
        "duration": t + 1.0,
        "timeline": timeline,
        "expect": expect,
    }
    out = ROOT / "fixtures" / "scenarios" / "04_coverage.json"
    out.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
