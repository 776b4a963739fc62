"""
Base file
"""

from __future__ import annotations
from typing import AnyStr, List, Optional
import logging
import os

from qtsp import exception as qtsp_exception
from qtsp import qtsp_abc


log = logging.getLogger(__name__)


class QTSPFile(qtsp_abc._QTSPABC):

    __slots__ = ["file_directory_path", "file_name", "file_path"]

    def __init__(
        self,
        file_path: AnyStr,
        file_directory_path: Optional[AnyStr] = None,
        file_name: Optional[AnyStr] = None,
        **kwargs,
    ) -> QTSPFile:
        super().__init__()
        file_path = os.fspath(file_path)
        if not file_directory_path:
            file_directory_path = os.path.dirname(file_path)

        if not file_name:
            file_name = os.path.basename(file_path)

        self.file_directory_path = file_directory_path
        self.file_name = file_name
        self.file_path = file_path

    @property
    def label(self) -> AnyStr:
        return self.file_name

    @property
    def exists(self) -> bool:
        return os.path.exists(self.file_path)

    def read_text(self) -> AnyStr:
        try:
            with open(self.file_path, mode="r", newline="") as fh:
                return fh.read()
        except OSError as e:
            raise qtsp_exception.QTSPFileError(f"{self} failed to read with {e}") from e

    def read_lines(self) -> List[AnyStr]:
        lines = [
            line.replace("\r", "") for line in self.read_text().split("\n")
        ]
        if lines and lines[-1] == "":
            lines.pop()

        log.debug(f"{self} read {len(lines)} lines")

        return lines

    def write_lines(self, lines: List[AnyStr]) -> bool:
        written = False
        try:
            os.makedirs(self.file_directory_path or ".", exist_ok=True)
            with open(self.file_path, mode="w", newline="\n") as fh:
                for line in lines:
                    fh.write(f"{line}\n")
            written = True
            log.debug(f"{self} wrote {len(lines)} lines")
        except OSError as e:
            log.error(f"{self} failed to write lines with {e}")

        return written
