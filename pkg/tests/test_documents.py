import io
import json

import numpy as np
import pytest

from histarith import ReliableHistogram, build_histogram
from histarith.arithmetic import Op, combine
from histarith.core import DataError, eval_curve
from histarith import documents

from conftest import random_histogram


class TestReadSampleCsv:
    def test_plain(self):
        assert documents.read_sample_csv(io.StringIO("1.0\n2.0\n3.0\n")).values.tolist() == [1, 2, 3]

    def test_header_skipped(self):
        assert documents.read_sample_csv(io.StringIO("value\n1.0\n")).values.tolist() == [1.0]

    def test_bad_line(self):
        with pytest.raises(DataError, match="line 2: not a number"):
            documents.read_sample_csv(io.StringIO("1.0\nabc\n"))

    def test_blank_lines_ignored(self):
        assert documents.read_sample_csv(io.StringIO("\n4\n\n  5.5 \n")).values.tolist() == [4.0, 5.5]

    @pytest.mark.parametrize("text", ["", "\n\n", "header\n"])
    def test_empty(self, text):
        with pytest.raises(DataError):
            documents.read_sample_csv(io.StringIO(text))

    def test_path(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("x\n0.1\n0.2\n")
        assert documents.read_sample_csv(p).n == 2
        assert documents.read_sample_csv(str(p)).n == 2


class TestHistogramDocument:
    def test_round_trip_built(self):
        h = build_histogram(np.random.default_rng(31).normal(size=2000))
        text = documents.dumps(h)
        back = documents.loads(text)
        assert back == h
        assert documents.dumps(back) == text
        assert np.array_equal(back.edges, h.edges) and back.gammas.tobytes() == h.gammas.tobytes()

    def test_round_trip_random(self, rng):
        for _ in range(20):
            h = random_histogram(rng)
            assert documents.loads(documents.dumps(h)) == h

    def test_fields(self):
        h = build_histogram([0.1, 0.2, 0.25, 0.3, 0.9])
        doc = json.loads(documents.dumps(h))
        assert doc["format_version"] == 1 and doc["kind"] == "histogram"
        assert len(doc["edges"]) == len(doc["counts"]) + 1 == len(doc["gammas"]) + 1
        assert set(doc["config"]) == {"gamma_per_bin", "q_mode", "boundary_placement", "min_bin_count"}
        assert set(doc["flags"]) == {"degenerate", "unreliable"}

    def test_edges_out_of_order(self):
        doc = json.loads(documents.dumps(ReliableHistogram.from_edges([0, 1, 2], [3, 4])))
        doc["edges"] = [0.0, 2.0, 1.0]
        with pytest.raises(DataError, match="edges not increasing"):
            documents.loads(json.dumps(doc))

    def test_count_mismatch(self):
        doc = json.loads(documents.dumps(ReliableHistogram.from_edges([0, 1, 2], [3, 4])))
        doc["n"] = 8
        with pytest.raises(DataError, match="counts do not sum to n"):
            documents.loads(json.dumps(doc))

    def test_version(self):
        doc = json.loads(documents.dumps(ReliableHistogram.from_edges([0, 1], [3])))
        doc["format_version"] = 2
        with pytest.raises(DataError, match="format_version"):
            documents.loads(json.dumps(doc))


class TestResultDocument:
    def test_triangular(self, tmp_path):
        u = ReliableHistogram.from_edges([0.0, 1.0], [1])
        path = tmp_path / "tri.json"
        documents.write_document(combine(u, u, Op.ADD), path)
        back = documents.read_document(path)
        assert eval_curve(back.cdf, 1.0) == 0.5

    @pytest.mark.parametrize("op", list(Op))
    def test_round_trip_bit_exact(self, op, rng):
        for _ in range(5):
            d = combine(random_histogram(rng), random_histogram(rng), op)
            text = documents.dumps(d)
            back = documents.loads(text)
            assert back == d
            assert back.cdf.coeffs.tobytes() == d.cdf.coeffs.tobytes()
            assert back.pdf.coeffs.tobytes() == d.pdf.coeffs.tobytes()
            assert back.breakpoints.tobytes() == d.breakpoints.tobytes()
            assert back.provenance == d.provenance
            assert documents.dumps(back) == text

    def test_tampered_pdf(self):
        u = ReliableHistogram.from_edges([0.0, 1.0], [1])
        doc = json.loads(documents.dumps(combine(u, u, Op.ADD)))
        doc["segments"]["pdf"][0][1] += 1.0
        with pytest.raises(DataError, match="derivative"):
            documents.loads(json.dumps(doc))

    def test_unknown_kind(self):
        with pytest.raises(DataError):
            documents.loads('{"format_version": 1, "kind": "banana"}')

    def test_invalid_json(self):
        with pytest.raises(DataError):
            documents.loads("{not json")
