import json

import anyio
import numpy as np
import pytest

from spgd.config.settings import FitConfig
from spgd.fitting import fit
from spgd.io import (
    dumps,
    read_dataset,
    read_json,
    read_table,
    write_dataset,
    write_json,
    write_json_async,
    write_predictions,
)
from spgd.types import Method, SelectionKind
from spgd.validator import InvalidInputError, ValidationError


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestReadTable:
    def test_points_and_targets(self, tmp_path):
        table = read_table(write(tmp_path, "s1,s2,f\n1,2,3\n\n4,5,6\n"))
        assert (table.n, table.d) == (2, 2)
        np.testing.assert_array_equal(table.points, [[1, 2], [4, 5]])
        np.testing.assert_array_equal(table.targets, [3, 6])

    def test_without_targets(self, tmp_path):
        table = read_table(write(tmp_path, "s1\n0.5\n"))
        assert table.targets is None and table.d == 1

    def test_header_only(self, tmp_path):
        table = read_table(write(tmp_path, "s1,s2,s3\n"))
        assert table.n == 0 and table.points.shape == (0, 3)

    @pytest.mark.parametrize("header", ["x,y,f", "s2,s1,f", "f", ""])
    def test_bad_header(self, tmp_path, header):
        with pytest.raises(ValidationError):
            read_table(write(tmp_path, header + "\n1,2,3\n"))

    @pytest.mark.parametrize(
        "body, line",
        [("1,2\n", "line 2"), ("1,2,3\n1,x,3\n", "line 3"), ("1,2,3\n1,2,3\nnan,1,1\n", "line 4")],
    )
    def test_bad_rows_carry_line_numbers(self, tmp_path, body, line):
        with pytest.raises(InvalidInputError) as info:
            read_table(write(tmp_path, "s1,s2,f\n" + body))
        assert info.value.field_name == line


class TestDataset:
    def test_round_trip(self, tmp_path, xy_dataset):
        path = tmp_path / "xy.csv"
        write_dataset(path, xy_dataset)
        loaded = read_dataset(path)
        np.testing.assert_array_equal(loaded.points, xy_dataset.points)
        np.testing.assert_array_equal(loaded.targets, xy_dataset.targets)

    def test_needs_targets_and_rows(self, tmp_path):
        with pytest.raises(ValidationError):
            read_dataset(write(tmp_path, "s1,s2\n1,2\n"))
        with pytest.raises(InvalidInputError):
            read_dataset(write(tmp_path, "s1,f\n"))

    def test_domain_is_kept(self, tmp_path):
        dataset = read_dataset(write(tmp_path, "s1,f\n0.5,1\n"), [(0.0, 2.0)])
        assert dataset.domain == ((0.0, 2.0),)

    def test_predictions(self, tmp_path):
        table = read_table(write(tmp_path, "s1,f\n0.5,1\n"))
        out = tmp_path / "pred.csv"
        write_predictions(out, table, np.array([0.75]))
        assert out.read_text().splitlines() == ["s1,f,f_pred", "0.5,1.0,0.75"]


class TestJson:
    def test_numpy_and_enums(self, tmp_path):
        path = tmp_path / "doc.json"
        write_json(path, {"a": np.arange(3), "b": np.float64(0.5), "m": Method.RSPGD})
        assert read_json(path) == {"a": [0, 1, 2], "b": 0.5, "m": "rspgd"}

    def test_fit_report_shares_the_encoder(self, xy_dataset):
        _, report = fit(xy_dataset, FitConfig(max_degree=2, max_modes=1))
        document = json.loads(report.to_json())
        assert document["rank"] == 1
        assert json.loads(dumps({"v": np.float32(0.25), "k": SelectionKind.SPLIT})) == {"v": 0.25, "k": "split"}

    def test_invalid_json(self, tmp_path):
        with pytest.raises(ValidationError):
            read_json(write(tmp_path, "{not json", "doc.json"))

    def test_async_writer(self, tmp_path):
        path = tmp_path / "doc.json"
        anyio.run(write_json_async, path, {"x": [1.5]})
        assert read_json(path) == {"x": [1.5]}
