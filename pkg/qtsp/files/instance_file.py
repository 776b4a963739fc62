"""
Instance file: header line `n c1 c2 seed`, then n rows of n costs
"""

from __future__ import annotations
import logging
from typing import AnyStr, List

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp.files import qtsp_file


log = logging.getLogger(__name__)


def format_cost(value: float) -> AnyStr:
    return f"{float(value):.17g}"


class InstanceFile(qtsp_file.QTSPFile):

    __slots__ = []

    def instance_lines(self, inst: qtsp_instance.TspInstance) -> List[AnyStr]:
        lines = [f"{inst.n} {format_cost(inst.c1)} {format_cost(inst.c2)} {inst.seed}"]
        for row in inst.costs:
            lines.append(" ".join(format_cost(cost) for cost in row))

        return lines

    def write_instance(self, inst: qtsp_instance.TspInstance) -> bool:
        written = self.write_lines(self.instance_lines(inst))
        if written:
            log.debug(f"{self} wrote {inst}")

        return written

    def read_instance(self) -> qtsp_instance.TspInstance:
        lines = [line for line in self.read_lines() if line.strip()]
        try:
            n_text, c1_text, c2_text, seed_text = lines[0].split()
            n = int(n_text)
            costs = np.array(
                [[float(cost) for cost in line.split()] for line in lines[1 : n + 1]],
                dtype=np.float64,
            )
            if costs.shape != (n, n):
                raise ValueError(f"expected a {n}x{n} cost matrix, got {costs.shape}")

            inst = qtsp_instance.TspInstance(
                costs, c1=float(c1_text), c2=float(c2_text), seed=int(seed_text)
            )
        except (IndexError, ValueError) as e:
            raise qtsp_exception.QTSPFileError(f"{self} is not a valid instance file: {e}") from e

        log.debug(f"{self} read {inst}")

        return inst
