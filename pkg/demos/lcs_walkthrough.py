"""Follow one longest-common-substring run probe by probe.

    python3 demos/lcs_walkthrough.py [x y] [--gate]
"""

import sys

from qlcs import GroverConfig, lcs
from qlcs.strings import Alphabet, pad_input

args = [a for a in sys.argv[1:] if not a.startswith("--")]
x_raw, y_raw = args if len(args) == 2 else ("0110100", "1101001")
mode = "gate" if "--gate" in sys.argv else "abstract"

alphabet = Alphabet.for_texts(x_raw, y_raw)
x, y = pad_input(x_raw, "$", alphabet), pad_input(y_raw, "%", alphabet)
print(f"x = {x_raw!r} padded to {x.n} symbols: {x.symbols}")
print(f"y = {y_raw!r} padded to {y.n} symbols: {y.symbols}")
print("Padding with distinct sentinels means no window that touches the padding can match.\n")

report = lcs(x_raw, y_raw, GroverConfig(seed=3), mode, alphabet)
for it in report.iterations:
    verdict = "found" if it.verified else "none"
    print(
        f"search [{it.l}, {it.r}] probe d={it.d}: {verdict:5} "
        f"(rotation search p={it.search_success_prob}, start search p={it.verify_success_prob}, restarts {it.restarts})"
    )

w = report.witness
print(f"\nlongest common substring: {report.answer}")
if report.answer:
    print(f"  x[{w['x_pos']}:{w['x_pos'] + report.answer}] = {x_raw[w['x_pos']:w['x_pos'] + report.answer]!r}")
    print(f"  y[{w['y_pos']}:{w['y_pos'] + report.answer}] = {y_raw[w['y_pos']:w['y_pos'] + report.answer]!r}")
print(f"{report.oracle_calls} oracle calls, {report.resources['qubits']} qubits, depth {report.resources['depth']} ({mode} mode)")
