"""Watch Grover's amplitude amplification on a single marked item.

The gate-level search uses the real palindrome oracle with phase kickback.
The abstract search applies the same truth table as a phase. Both give the
same amplitudes, and the success probability follows sin^2((2k+1) theta).
"""

import numpy as np

from qlcs.driver import AbstractEngine, GateEngine, Tally, palindrome_pair_table
from qlcs.grover import diffuser_for, search_amplitudes, success_probability
from qlcs.sim import apply_circuit
from qlcs.strings import Alphabet, pad_input

text = pad_input("0001000", "$", Alphabet.binary())
d = 7  # only the whole raw text is a palindrome of length 7 or 8
marked = int(palindrome_pair_table(text, d).sum())
for engine in (GateEngine(text), AbstractEngine(text)):
    oracle = engine.rho_pair(d)
    state = engine.prepare(oracle, d, {}, Tally())
    diffuser = diffuser_for(oracle)
    print(f"{engine.mode} mode, N={text.n}, {marked} marked start(s)")
    for k in range(1, 5):
        state = apply_circuit(oracle.apply(state), diffuser.circuit)
        amps = search_amplitudes(state, "i").real
        p = oracle.marked(state)
        print(f"  k={k}: P(marked)={p:.6f} closed form {success_probability(text.n, marked, k):.6f}  amps {np.round(amps, 3)}")
    print()
