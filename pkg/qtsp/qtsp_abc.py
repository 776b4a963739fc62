"""
QTSP record type
"""

from __future__ import annotations
from abc import ABC
import enum
import pathlib
from typing import Any, AnyStr, Dict, Iterator, List, Tuple

import numpy as np


class _QTSPABC(ABC):

    __slots__ = ()

    # Slots left out of serialization, e.g. large per-tour arrays.
    unserialized_slots: Tuple[str, ...] = ()

    def __repr__(self) -> AnyStr:
        return f"<{type(self).__name__}-{self.label}>"

    @property
    def label(self) -> AnyStr:
        return hex(id(self))

    @classmethod
    def slot_names(cls) -> List[str]:
        names = list()
        for klass in reversed(cls.__mro__):
            for slot in getattr(klass, "__slots__", ()):
                if slot not in names:
                    names.append(slot)

        return names

    def to_dict(self) -> Dict:
        return {
            slot: self.serialize_slot_value(getattr(self, slot, None))
            for slot in self.slot_names()
            if slot not in self.unserialized_slots
        }

    def __iter__(self) -> Iterator[Tuple[str, Any]]:
        yield from self.to_dict().items()

    def serialize_slot_value(self, slot_value: Any) -> Any:
        serialized_slot_value = None

        if slot_value is None or isinstance(slot_value, (bool, int, str)):
            serialized_slot_value = slot_value

        elif isinstance(slot_value, float):
            serialized_slot_value = float(slot_value)

        elif isinstance(slot_value, enum.Enum):
            serialized_slot_value = slot_value.value

        elif isinstance(slot_value, _QTSPABC):
            serialized_slot_value = slot_value.to_dict()

        elif isinstance(slot_value, np.ndarray):
            serialized_slot_value = slot_value.tolist()

        elif isinstance(slot_value, np.generic):
            serialized_slot_value = slot_value.item()

        elif isinstance(slot_value, pathlib.PurePath):
            serialized_slot_value = str(slot_value)

        elif isinstance(slot_value, dict):
            serialized_slot_value = {
                str(key): self.serialize_slot_value(value)
                for key, value in slot_value.items()
            }

        elif isinstance(slot_value, (list, tuple)):
            serialized_slot_value = [
                self.serialize_slot_value(list_item) for list_item in slot_value
            ]
        else:
            serialized_slot_value = str(slot_value)

        return serialized_slot_value
