import itertools

import numpy as np
import pytest

from conftest import naive_lcs, naive_lps
from qlcs.driver import (
    AbstractEngine,
    CapacityError,
    GateEngine,
    RunReport,
    lcs,
    lps,
    max_iterations,
    palindrome_pair_table,
    quantum_test_lcs,
    quantum_test_lps,
)
from qlcs.grover import GroverConfig
from qlcs.strings import Alphabet, InputError, pad_input, phi, psi_table, rho_in_text

BIN = Alphabet.binary()
CFG = GroverConfig(seed=3)


def engines(a, b=None, alphabet=BIN):
    x = pad_input(a, "$", alphabet)
    y = pad_input(b, "%", alphabet) if b is not None else None
    return [GateEngine(x, y), AbstractEngine(x, y)]


class TestIterativeTest:
    @pytest.mark.parametrize("engine", engines("01", "01"), ids=["gate", "abstract"])
    def test_lcs_solvable(self, engine):
        out = quantum_test_lcs(engine, 1, CFG)
        assert out.verified
        w = out.witness
        assert phi(engine.x, engine.y, w.i, w.j, 1)

    @pytest.mark.parametrize("engine", engines("000", "111"), ids=["gate", "abstract"])
    def test_lcs_unsolvable(self, engine):
        out = quantum_test_lcs(engine, 1, CFG)
        assert not out.verified and out.witness is None and out.restarts == CFG.restarts

    @pytest.mark.parametrize("engine", engines("010", "110"), ids=["gate", "abstract"])
    def test_lcs_empty_window(self, engine):
        assert quantum_test_lcs(engine, 0, CFG).verified

    @pytest.mark.parametrize("engine", engines("ab", alphabet=Alphabet("ab")), ids=["gate", "abstract"])
    def test_lps_single_symbol(self, engine):
        out = quantum_test_lps(engine, 1, CFG)
        assert out.verified and out.witness.d == 1

    @pytest.mark.parametrize("engine", engines("ab", alphabet=Alphabet("ab")), ids=["gate", "abstract"])
    def test_lps_no_pair(self, engine):
        assert not quantum_test_lps(engine, 2, CFG).verified

    @pytest.mark.parametrize("engine", engines("aba", alphabet=Alphabet("ab")), ids=["gate", "abstract"])
    def test_lps_three(self, engine):
        out = quantum_test_lps(engine, 3, CFG)
        assert out.verified and out.witness.i == 0 and out.witness.d == 3

    @pytest.mark.parametrize("engine", engines("aba", alphabet=Alphabet("ab")), ids=["gate", "abstract"])
    def test_lps_reports_longer_of_pair(self, engine):
        out = quantum_test_lps(engine, 2, CFG)
        assert out.verified and out.witness.d == 3
        assert rho_in_text(engine.x, out.witness.i, 3, engine.x.sentinel)


class TestLCS:
    @pytest.mark.parametrize("mode", ["gate", "abstract", "classical"])
    def test_examples(self, mode):
        cfg = GroverConfig(seed=7)
        assert lcs("0110", "0110", cfg, mode).answer == 4
        assert lcs("abab", "bbaa", cfg, mode).answer == naive_lcs("abab", "bbaa") == 2
        assert lcs("000", "111", cfg, mode).answer == 0

    def test_witness_positions(self):
        rep = lcs("abab", "bbaa", CFG, "gate")
        w = rep.witness
        assert "abab"[w["x_pos"] : w["x_pos"] + 2] == "bbaa"[w["y_pos"] : w["y_pos"] + 2]

    def test_empty(self):
        rep = lcs("", "", CFG)
        assert rep.answer == 0 and rep.n == 1 and rep.witness == {"x_pos": None, "y_pos": None}

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            lcs("01", "011", CFG)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            lcs("0" * 16, "1" * 16, CFG, "gate")
        assert lcs("0" * 16, "1" * 16, CFG, "abstract").answer == 0

    def test_classical_mode_has_no_resources(self):
        rep = lcs("000", "111", CFG, "classical")
        assert rep.iterations == () and rep.oracle_calls == 0
        assert rep.resources["depth"] == 0 and not any(rep.resources["gates"].values())

    def test_gate_and_abstract_agree(self):
        words = ["".join(t) for t in itertools.product("01", repeat=3)]
        for a, b in itertools.product(words[::3], words[1::3]):
            g = lcs(a, b, CFG, "gate")
            s = lcs(a, b, CFG, "abstract")
            assert g.answer == s.answer == naive_lcs(a, b)


class TestLPS:
    @pytest.mark.parametrize("mode", ["gate", "abstract", "classical"])
    def test_examples(self, mode):
        assert lps("aaaa", CFG, mode).answer == 4
        assert lps("ab", CFG, mode).answer == 1

    def test_long_example(self):
        s = "abaacbcbbca"
        rep = lps(s, CFG)
        assert rep.answer == naive_lps(s)
        w = rep.witness["x_pos"]
        window = s[w : w + rep.answer]
        assert window == window[::-1]

    def test_parity_gap(self):
        # no palindrome of length 2 but one of length 3: a plain length search would stop at 1
        for mode in ("gate", "abstract"):
            assert lps("010", CFG, mode).answer == 3

    def test_empty(self):
        assert lps("", CFG).answer == 0


class TestLoop:
    def test_soundness_and_termination(self):
        rng = np.random.default_rng(0)
        for _ in range(40):
            L = int(rng.integers(0, 16))
            a = "".join(rng.choice(list("01"), L))
            b = "".join(rng.choice(list("01"), L))
            cfg = GroverConfig(seed=int(rng.integers(1000)), restarts=1, shots=1)
            for rep, truth in ((lcs(a, b, cfg), naive_lcs(a, b)), (lps(a, cfg), naive_lps(a))):
                assert rep.answer <= truth
                assert len(rep.iterations) <= max_iterations(rep.n)
                widths = [it.r - it.l for it in rep.iterations]
                assert all(w2 < w1 for w1, w2 in zip(widths, widths[1:]))

    def test_monotone_predicates(self):
        rng = np.random.default_rng(1)
        for _ in range(40):
            L = int(rng.integers(1, 16))
            x = pad_input("".join(rng.choice(list("01"), L)), "$", BIN)
            y = pad_input("".join(rng.choice(list("01"), L)), "%", BIN)
            lcs_ok = [bool(psi_table(x, y, d).any()) for d in range(x.n + 1)]
            lps_ok = [bool(palindrome_pair_table(x, d).any()) for d in range(x.n + 1)]
            for ok in (lcs_ok, lps_ok):
                top = max(d for d, v in enumerate(ok) if v)
                assert all(ok[: top + 1]) and not any(ok[top + 1 :])

    def test_false_negatives_flagged(self, monkeypatch):
        monkeypatch.setattr(AbstractEngine, "check", lambda *a, **k: False)
        rep = lcs("0101", "0101", CFG)
        assert rep.answer == 0
        assert rep.iterations[0].false_negative
        assert all(it.false_negative for it in rep.iterations)

    def test_probabilities_reported(self):
        rep = lcs("0110", "0110", CFG, "gate")
        first = rep.iterations[0]
        assert first.verified and 0 < first.search_success_prob <= 1
        assert first.verify_success_prob is not None


class TestReport:
    def test_round_trip(self):
        rep = lcs("0110100", "1101001", CFG)
        assert RunReport.from_json(rep.to_json()) == rep

    def test_schema(self):
        import json

        data = json.loads(lps("abba", CFG).to_json())
        assert list(data) == [
            "problem", "n", "raw_len", "answer", "witness", "iterations", "resources",
            "oracle_calls", "seed", "mode", "schedule",
        ]
        assert set(data["witness"]) == {"x_pos", "y_pos"}
        assert set(data["resources"]) == {"qubits", "depth", "gates"}
        assert list(data["iterations"][0]) == [
            "l", "r", "d", "verified", "search_success_prob", "verify_success_prob", "restarts", "false_negative",
        ]

    def test_deterministic(self):
        a = lcs("0110100", "1101001", GroverConfig(seed=11), "gate").to_json()
        b = lcs("0110100", "1101001", GroverConfig(seed=11), "gate").to_json()
        assert a == b
