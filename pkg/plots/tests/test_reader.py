import numpy as np
import pytest

from relaxplot.reader import (
    PROFILE_COLUMNS,
    SchemaError,
    read_table,
    require_schema,
)

PROFILE = """\
# experiment=sod
# eps=0.001
# cells=3
# version=relaxeuler-0.1.0
x,rho,q,u
0.005,1.0,0.0,0.0
0.015,0.5,0.1,0.2
0.025,0.125,0.0,0.0
"""


def test_read_profile(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text(PROFILE)
    table = read_table(path)
    assert table.metadata["eps"] == "0.001"
    assert table.n_rows == 3
    np.testing.assert_allclose(table.columns["rho"], [1.0, 0.5, 0.125])
    require_schema(table, PROFILE_COLUMNS)
    assert table.label() == "sod eps=0.001 cells=3"


def test_missing_file():
    with pytest.raises(SchemaError):
        read_table("/nonexistent/file.csv")


def test_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,rho,q\n0.0,1.0,0.0\n")
    table = read_table(path)
    with pytest.raises(SchemaError, match="missing required column 'u'"):
        require_schema(table, PROFILE_COLUMNS)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# eps=1\nx,rho,q,u\n")
    table = read_table(path)
    with pytest.raises(SchemaError, match="no data rows"):
        require_schema(table, PROFILE_COLUMNS)


def test_ragged_row(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("x,rho,q,u\n1.0,2.0\n")
    with pytest.raises(SchemaError, match="expected 4 fields"):
        read_table(path)


def test_non_numeric_column(tmp_path):
    path = tmp_path / "str.csv"
    path.write_text("x,rho,q,u\n0.0,abc,0.0,0.0\n")
    with pytest.raises(SchemaError, match="column 'rho'"):
        read_table(path)


def test_label_fallback_and_override(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text("x,rho,q,u\n0.0,1.0,0.0,0.0\n")
    assert read_table(path).label() == "plain"
    path.write_text("# label=fine mesh\nx,rho,q,u\n0.0,1.0,0.0,0.0\n")
    assert read_table(path).label() == "fine mesh"
