"""Test adapter speaking the JSON-lines protocol on stdin/stdout.

usage: tagger.py MODE   where MODE is one of
  all_o     reply with an O tag per token
  short     reply with one tag too few
  sleep     never reply
  embed     reply to {"phrase"} with a fixed-length vector
"""
import json
import sys
import time

mode = sys.argv[1]
for line in sys.stdin:
    req = json.loads(line)
    if mode == "sleep":
        time.sleep(30)
        continue
    if mode == "embed":
        phrase = req["phrase"].casefold()
        vec = [float(phrase.count(c)) for c in "abcdefghijklmnopqrstuvwxyz"]
        reply = {"id": req["id"], "vector": vec}
    else:
        n = len(req["tokens"]) - (mode == "short")
        reply = {"id": req["id"], "tags": ["O"] * n}
    sys.stdout.write(json.dumps(reply) + "\n")
    sys.stdout.flush()
