#!/usr/bin/env python3
"""Dictionary-backed tagger worker used as a test double.

Speaks the line-delimited JSON protocol on stdio: one ``{"ready": true}``
line at startup, then one response object per request. Flags make it
misbehave on purpose so failure paths can be exercised:

  --dict PATH       JSON object mapping surface form to class label
  --crash-after N   exit(3) when the (N+1)-th request arrives
  --hang            never answer (for timeout tests)
  --offset-bug      shift every reported span by +100
  --no-ready        skip the startup announcement
  --prefix-bogus    emit a response with an unknown id before each real one
"""

from __future__ import annotations

import argparse
import json
import sys
import time

DEFAULT_NAMES = {"Copacabana": "LOC", "São João": "LOC", "Ipanema": "LOC"}


def find_entities(text: str, names: dict[str, str]) -> list[dict]:
    hits: list[tuple[int, int, str]] = []
    for name, label in names.items():
        start = 0
        while (i := text.find(name, start)) != -1:
            end = i + len(name)
            left_ok = i == 0 or not text[i - 1].isalnum()
            right_ok = end == len(text) or not text[end].isalnum()
            if left_ok and right_ok:
                hits.append((i, end, label))
            start = i + 1
    hits.sort(key=lambda h: (h[0], h[0] - h[1]))
    picked: list[dict] = []
    cursor = 0
    for i, end, label in hits:
        if i >= cursor:
            picked.append({"start": i, "end": end, "class": label})
            cursor = end
    return picked


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--dict", dest="dict_path")
    parser.add_argument("--crash-after", type=int, default=None)
    parser.add_argument("--hang", action="store_true")
    parser.add_argument("--offset-bug", action="store_true")
    parser.add_argument("--no-ready", action="store_true")
    parser.add_argument("--prefix-bogus", action="store_true")
    args = parser.parse_args()

    names = DEFAULT_NAMES
    if args.dict_path:
        with open(args.dict_path, encoding="utf-8") as handle:
            names = json.load(handle)

    if not args.no_ready:
        print(json.dumps({"ready": True}), flush=True)

    served = 0
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            request_id = request["id"]
            text = request["text"]
        except (ValueError, KeyError, TypeError):
            print(json.dumps({"id": None, "error": "bad request"}), flush=True)
            continue
        if args.hang:
            time.sleep(3600)
        if args.crash_after is not None and served >= args.crash_after:
            sys.exit(3)
        entities = find_entities(text, names)
        if args.offset_bug:
            entities = [
                {**e, "start": e["start"] + 100, "end": e["end"] + 100}
                for e in entities
            ]
        if args.prefix_bogus:
            print(json.dumps({"id": 999999, "entities": []}), flush=True)
        print(json.dumps({"id": request_id, "entities": entities}, ensure_ascii=False), flush=True)
        served += 1


if __name__ == "__main__":
    main()
