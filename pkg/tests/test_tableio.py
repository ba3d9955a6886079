import json
import random

import pytest

from gossipsim import tableio
from gossipsim.engine import SimConfig, simulate, simulate_optimized
from gossipsim.fsa import Permutation, permutation_set


def random_system(rng):
    n = rng.randint(1, 9)
    perms = []
    for i in range(n + 1):
        targets = [j for j in range(n + 1) if j != i]
        rng.shuffle(targets)
        perms.append(Permutation(i, n, tuple(targets)))
    return n, perms


class TestTextRoundTrip:
    def test_fifty_randomized_runs(self):
        rng = random.Random(2024)
        for _ in range(50):
            n, perms = random_system(rng)
            optimizer = rng.random() < 0.3
            cfg = SimConfig(optimizer=optimizer,
                            sessions=rng.choice([1, 1, 1, 2, 3]))
            run = (simulate_optimized if optimizer else simulate)(n, perms, cfg)
            again = tableio.parse_text(tableio.render_text(run))
            assert again == run
            assert again.sessions == run.sessions

    def test_footer_lines_are_ignored_by_parser(self):
        run = simulate(4, permutation_set("identity", 4))
        text = tableio.render_text(run) + tableio.metrics_footer(run)
        assert tableio.parse_text(text) == run

    def test_footer_contents(self):
        run = simulate(4, permutation_set("identity", 4))
        footer = tableio.metrics_footer(run)
        assert "lambda=18 mu=2.22 epsilon=44.44%" in footer
        assert footer.splitlines()[1].startswith("nu=2 2 2")

    def test_parse_rejects_ragged_rows(self):
        with pytest.raises(ValueError, match="ragged"):
            tableio.parse_text("0: S1 R1\n1: R0\n")

    def test_parse_rejects_bad_cells(self):
        with pytest.raises(ValueError, match="bad run-table cell"):
            tableio.parse_text("0: S9\n1: R0\n")


class TestCsv:
    def test_shape_pipelined_n9(self):
        run = simulate(9, permutation_set("pipelined", 9))
        lines = tableio.render_csv(run).splitlines()
        assert lines[0] == "id," + ",".join(str(t) for t in range(1, 28))
        assert len(lines) == 11   # header + 10 processors
        assert all(len(line.split(",")) == 28 for line in lines[1:])

    def test_cells_match_text_encoding(self):
        run = simulate(2, permutation_set("identity", 2))
        row0 = tableio.render_csv(run).splitlines()[1].split(",")
        assert row0[0] == "0"
        assert row0[1] == "S1"


class TestJson:
    def test_schema(self):
        run = simulate(4, permutation_set("identity", 4))
        payload = json.loads(tableio.render_json(run))
        assert payload["n"] == 4
        assert payload["sessions"] == 1
        assert payload["lambda"] == 18
        assert payload["nu"][6] == 4
        assert payload["metrics"]["mu"] == "2.222222"
        assert payload["metrics"]["epsilon"] == "0.444444"
        assert payload["grid"][0][0] == {"k": "S", "p": 1}
        assert payload["grid"][0][5] == {"k": "-"}
        assert payload["grid"][1][1] == {"k": "*"}

    def test_grid_matches_actions(self):
        run = simulate(3, permutation_set("pipelined", 3))
        payload = tableio.json_payload(run)
        cell = payload["grid"][1][0]
        assert cell == {"k": "R", "p": 0}


class TestPgm:
    def test_two_processor_image_bytes(self):
        run = simulate(1, permutation_set("identity", 1))
        data = tableio.render_pgm(run)
        assert data == b"P5\n2 2\n255\n" + bytes([0, 128, 128, 0])

    def test_dimensions_and_determinism(self):
        run = simulate(20, permutation_set("identity", 20))
        data = tableio.render_pgm(run)
        header, rest = data.split(b"\n", 1)
        assert header == b"P5"
        dims = rest.split(b"\n", 2)
        width, height = map(int, dims[0].split())
        assert (width, height) == (run.length, 21)
        assert len(dims[2]) == width * height
        assert data == tableio.render_pgm(simulate(20, permutation_set("identity", 20)))

    def test_palette(self):
        run = simulate(2, permutation_set("identity", 2))
        body = tableio.render_pgm(run).split(b"\n", 3)[3]
        values = set(body)
        assert values == {0, 128, 220}
