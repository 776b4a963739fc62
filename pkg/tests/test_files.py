import math

import numpy as np
import openpyxl
import pytest
from numpy.testing import assert_array_equal

from qtsp import directory as qtsp_directory
from qtsp import exception as qtsp_exception
from qtsp.files import csv_file, instance_file, qtsp_file, xlsx_file, yml_file


@pytest.mark.parametrize(
    "value, expected",
    [
        (None, ""),
        (True, "true"),
        (np.bool_(False), "false"),
        (np.int64(7), "7"),
        (0.1, "0.1"),
        (np.float64(1 / 3), repr(1 / 3)),
        (math.nan, "nan"),
        ("group 0", "group 0"),
    ],
)
def test_format_field(value, expected):
    assert csv_file.format_field(value) == expected


def test_csv_file_writes_lf_and_reads_back(tmp_path):
    path = tmp_path / "out" / "trace.csv"
    written = csv_file.CSVFile(path, headers=["step", "p"]).write_rows([[0, 0.25], [1, None]])

    assert written
    assert path.read_bytes() == b"step,p\n0,0.25\n1,\n"
    assert csv_file.CSVFile(path).read_dicts() == [
        {"step": "0", "p": "0.25"},
        {"step": "1", "p": ""},
    ]


def test_csv_file_read_missing(tmp_path):
    with pytest.raises(qtsp_exception.QTSPFileError):
        csv_file.CSVFile(tmp_path / "missing.csv").read_rows()


def test_instance_file_preserves_costs(tmp_path, instance_n6):
    path = tmp_path / "instance.txt"
    instance_file.InstanceFile(path).write_instance(instance_n6)
    inst = instance_file.InstanceFile(path).read_instance()

    assert path.read_text().splitlines()[0] == "6 0 1 3"
    assert_array_equal(inst.costs, instance_n6.costs)
    assert (inst.n, inst.c1, inst.c2, inst.seed) == (6, 0.0, 1.0, 3)


def test_instance_file_rejects_malformed(tmp_path):
    path = tmp_path / "instance.txt"
    path.write_text("3 0 1 0\n0 1 1\n1 0 1\n")

    with pytest.raises(qtsp_exception.QTSPFileError):
        instance_file.InstanceFile(path).read_instance()


def test_qtsp_file_lines(tmp_path):
    path = tmp_path / "nested" / "report.txt"
    report_file = qtsp_file.QTSPFile(path)

    assert str(report_file) == "<QTSPFile-report.txt>"
    assert not report_file.exists
    with pytest.raises(qtsp_exception.QTSPFileError):
        report_file.read_text()

    assert report_file.write_lines(["a=1", "b=2"])
    assert report_file.exists
    assert report_file.read_lines() == ["a=1", "b=2"]


def test_qtsp_file_write_into_directory_fails(tmp_path):
    (tmp_path / "report.txt").mkdir()

    assert not qtsp_file.QTSPFile(tmp_path / "report.txt").write_lines(["a=1"])


def test_yml_file(tmp_path):
    path = tmp_path / "compare.yml"
    path.write_text("instance:\n  n: 7\ngrover:\n  M: 1\n")

    assert yml_file.YMLFile(path).disk_self == {"instance": {"n": 7}, "grover": {"M": 1}}

    path.write_text("")
    assert yml_file.YMLFile(path).disk_self == {}


@pytest.mark.parametrize("text", ["- 1\n- 2\n", "instance: [\n"])
def test_yml_file_rejects_invalid_documents(tmp_path, text):
    path = tmp_path / "bad.yml"
    path.write_text(text)

    with pytest.raises(qtsp_exception.QTSPFileError):
        yml_file.YMLFile(path).disk_self


def test_yml_file_missing(tmp_path):
    with pytest.raises(qtsp_exception.QTSPFileError):
        yml_file.YMLFile(tmp_path / "missing.yml").disk_self


def test_xlsx_file_rows(tmp_path):
    path = tmp_path / "aggregate.xlsx"
    workbook_file = xlsx_file.XLSXFile(path, headers=["n", "ratio", "flags"])

    assert workbook_file.create_on_disk()
    assert workbook_file.append_rows([[6, 2.5, ["a", "b"]], [7, math.nan, None]])
    rows = openpyxl.load_workbook(path)["Sheet"].iter_rows(values_only=True)
    assert [list(row) for row in rows] == [
        ["n", "ratio", "flags"],
        [6, 2.5, "a,b"],
        [7, None, None],
    ]


def test_experiment_directory_tracks_files(tmp_path, instance_n6):
    directory = qtsp_directory.ExperimentDirectory(tmp_path / "run")

    assert directory.write_instance(instance_n6)
    assert directory.write_csv("group_spec.csv", ["j"], [[0], [1]])
    assert directory.write_text("report.txt", ["kind=gen"])
    assert directory.written_files_names == ["instance.txt", "group_spec.csv", "report.txt"]
    assert all((tmp_path / "run" / name).exists() for name in directory.written_files_names)
    assert str(directory) == "<ExperimentDirectory-run>"

    cell = directory.subdirectory("n6_seed0")
    assert cell.write_text("report.txt", ["kind=compare"])
    assert (tmp_path / "run" / "n6_seed0" / "report.txt").read_text() == "kind=compare\n"


@pytest.mark.parametrize("file_name", ["instance.txt", "group_spec.csv", "report.txt"])
def test_experiment_directory_raises_on_blocked_path(tmp_path, instance_n6, file_name):
    directory = qtsp_directory.ExperimentDirectory(tmp_path / "run")
    (tmp_path / "run" / file_name).mkdir()
    writers = {
        "instance.txt": lambda: directory.write_instance(instance_n6),
        "group_spec.csv": lambda: directory.write_csv("group_spec.csv", ["j"], [[0]]),
        "report.txt": lambda: directory.write_text("report.txt", ["kind=gen"]),
    }

    with pytest.raises(qtsp_exception.QTSPFileError) as excinfo:
        writers[file_name]()

    assert file_name in str(excinfo.value)
    assert directory.written_files_names == []


def test_experiment_directory_raises_when_path_is_a_file(tmp_path):
    (tmp_path / "run").write_text("")

    with pytest.raises(qtsp_exception.QTSPFileError):
        qtsp_directory.ExperimentDirectory(tmp_path / "run")


def test_xlsx_export_to_blocked_path_raises(tmp_path):
    directory = qtsp_directory.ExperimentDirectory(tmp_path / "run")
    (tmp_path / "run" / "aggregate.xlsx").mkdir()

    with pytest.raises(qtsp_exception.QTSPFileError):
        directory.write_xlsx("aggregate.xlsx", ["n"], [[6]])
