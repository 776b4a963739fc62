"""
YML file
"""

from __future__ import annotations
import logging
from typing import AnyStr, Dict

import yaml

from qtsp import exception as qtsp_exception
from qtsp.files import qtsp_file


log = logging.getLogger(__name__)


class YMLFile(qtsp_file.QTSPFile):

    __slots__ = []

    @property
    def disk_self(self) -> Dict:
        if not self.exists:
            raise qtsp_exception.QTSPFileError(f"{self} does not exist at {self.file_path}")

        try:
            with open(self.file_path) as fh:
                loaded_dict = yaml.safe_load(fh)
        except (OSError, yaml.YAMLError) as e:
            raise qtsp_exception.QTSPFileError(f"{self} is not readable YAML: {e}") from e

        if loaded_dict is None:
            loaded_dict = dict()

        if not isinstance(loaded_dict, dict):
            raise qtsp_exception.QTSPFileError(
                f"{self} must hold a mapping, got {type(loaded_dict).__name__}"
            )

        log.debug(f"{self} loaded sections {list(loaded_dict)}")

        return loaded_dict
