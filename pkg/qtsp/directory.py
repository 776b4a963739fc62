"""
Directory
"""

from __future__ import annotations
from typing import AnyStr, List, Sequence
import os
import logging

from qtsp import exception as qtsp_exception
from qtsp.files import csv_file, instance_file, qtsp_file, xlsx_file


log = logging.getLogger(__name__)


class ExperimentDirectory(object):
    """
    Output directory of one experiment; hands out file objects and tracks what was written.
    """

    def __init__(self, file_system_path: AnyStr, create_on_init: bool = True) -> ExperimentDirectory:
        self.file_system_path = os.fspath(file_system_path)
        self.dir_alias = os.path.split(os.path.normpath(self.file_system_path))[-1]
        self.written_files: List[qtsp_file.QTSPFile] = list()

        if create_on_init:
            self.create_on_disk()

    def __repr__(self) -> AnyStr:
        return f"<{type(self).__name__}-{self.dir_alias}>"

    @property
    def written_files_names(self) -> List[AnyStr]:
        return [written_file.file_name for written_file in self.written_files]

    def create_on_disk(self) -> bool:
        try:
            os.makedirs(self.file_system_path, exist_ok=True)
        except OSError as e:
            raise qtsp_exception.QTSPFileError(f"{self} failed to create directory with {e}") from e

        log.debug(f"{self} created at {self.file_system_path}")

        return True

    def path(self, file_name: AnyStr) -> AnyStr:
        return os.path.join(self.file_system_path, file_name)

    def subdirectory(self, name: AnyStr) -> ExperimentDirectory:
        return ExperimentDirectory(self.path(name))

    def _track(self, written: bool, written_file: qtsp_file.QTSPFile) -> bool:
        if not written:
            log.error(f"{self} failed to write {written_file}")
            raise qtsp_exception.QTSPFileError(
                f"{self} failed to write {written_file} at {written_file.file_path}"
            )

        self.written_files.append(written_file)

        return written

    def write_instance(self, inst, file_name: AnyStr = "instance.txt") -> bool:
        written_file = instance_file.InstanceFile(self.path(file_name))
        return self._track(written_file.write_instance(inst), written_file)

    def write_csv(
        self, file_name: AnyStr, headers: Sequence[AnyStr], rows: Sequence[Sequence]
    ) -> bool:
        written_file = csv_file.CSVFile(self.path(file_name), headers=headers)
        return self._track(written_file.write_rows(rows), written_file)

    def write_xlsx(
        self, file_name: AnyStr, headers: Sequence[AnyStr], rows: Sequence[Sequence]
    ) -> bool:
        written_file = xlsx_file.XLSXFile(self.path(file_name), headers=headers)
        written = written_file.create_on_disk() and written_file.append_rows(rows)

        return self._track(written, written_file)

    def write_text(self, file_name: AnyStr, lines: Sequence[AnyStr]) -> bool:
        written_file = qtsp_file.QTSPFile(self.path(file_name))
        return self._track(written_file.write_lines(list(lines)), written_file)
