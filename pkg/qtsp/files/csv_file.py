"""
CSV file
"""

from __future__ import annotations
import csv
import logging
import math
import os
from typing import Any, AnyStr, List, Sequence

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp.files import qtsp_file


log = logging.getLogger(__name__)


def format_field(value: Any) -> AnyStr:
    """
    Shortest round-tripping text for floats, lower-case booleans, empty for None.
    """
    if value is None:
        return ""

    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"

    if isinstance(value, (int, np.integer)):
        return str(int(value))

    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)

    return str(value)


class CSVFile(qtsp_file.QTSPFile):

    __slots__ = ["headers"]

    def __init__(self, file_path: AnyStr, headers: Sequence[AnyStr] = (), **kwargs) -> CSVFile:
        super().__init__(file_path=file_path, **kwargs)
        self.headers = list(headers)

    def write_rows(self, rows: Sequence[Sequence[Any]]) -> bool:
        written = False
        try:
            os.makedirs(self.file_directory_path or ".", exist_ok=True)
            with open(self.file_path, mode="w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(self.headers)
                for row in rows:
                    writer.writerow([format_field(field) for field in row])
            written = True
            log.debug(f"{self} wrote {len(rows)} rows")
        except OSError as e:
            log.error(f"{self} failed to write rows with {e}")

        return written

    def read_rows(self) -> List[List[AnyStr]]:
        try:
            with open(self.file_path, mode="r", newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as e:
            raise qtsp_exception.QTSPFileError(f"{self} failed to read with {e}") from e

        if rows:
            self.headers = rows.pop(0)

        return rows

    def read_dicts(self) -> List[dict]:
        rows = self.read_rows()
        return [dict(zip(self.headers, row)) for row in rows]
