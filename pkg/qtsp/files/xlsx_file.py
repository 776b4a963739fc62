"""
XLSX file
"""

from __future__ import annotations
import logging
import math
import os
from typing import Any, AnyStr, List, Optional, Sequence

import openpyxl

from qtsp.files import qtsp_file


log = logging.getLogger(__name__)


def sanitize_cell(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, (list, tuple)):
        return ",".join(str(item) for item in value)

    return value


class XLSXFile(qtsp_file.QTSPFile):

    __slots__ = ["headers", "xlsx_workbook"]

    def __init__(
        self,
        file_path: AnyStr,
        headers: Sequence[AnyStr] = (),
        **kwargs,
    ) -> XLSXFile:
        super().__init__(file_path=file_path, **kwargs)
        self.headers = list(headers)
        self.xlsx_workbook: Optional[openpyxl.Workbook] = None

    def append_row(self, row_fields: List[Any], worksheet: AnyStr = "Sheet") -> bool:
        appended = False
        try:
            self.xlsx_workbook[worksheet].append([sanitize_cell(value) for value in row_fields])
            log.debug(f"{self} appended row {row_fields} to worksheet {worksheet}")
            appended = True
        except (KeyError, TypeError, ValueError) as e:
            log.error(f"{self} failed to append row {row_fields} to sheet {worksheet} with {e}")

        return appended

    def create_on_disk(self) -> bool:
        """
        Fresh workbook holding only the header row, saved over any existing file.
        """
        try:
            os.makedirs(self.file_directory_path or ".", exist_ok=True)
        except OSError as e:
            log.error(f"{self} failed to create its directory with {e}")
            return False

        self.xlsx_workbook = openpyxl.Workbook()
        if self.headers:
            self.xlsx_workbook["Sheet"].append(self.headers)
        created = self.save_workbook()

        if created:
            log.debug(f"created file {str(self)} on disk")
        else:
            log.debug(f"did not create file {str(self)} on disk")

        return created

    def append_rows(self, rows: Sequence[Sequence[Any]], worksheet: AnyStr = "Sheet") -> bool:
        appended = all(self.append_row(list(row), worksheet) for row in rows)
        return self.save_workbook() and appended

    def save_workbook(self) -> bool:
        saved = False
        try:
            self.xlsx_workbook.save(filename=self.file_path)
            saved = True
        except OSError as e:
            log.error(f"{str(self)} failed to save xlsx workbook with {str(e)}")

        if saved:
            log.debug(f"{str(self)} saved xlsx workbook")

        return saved
