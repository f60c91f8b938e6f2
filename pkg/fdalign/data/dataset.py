from typing import Dict, Iterator, List

from fdalign.data.dataset_spec import DatasetSpec
from fdalign.entities import LocalizationSample
from fdalign.types import SplitType


class Dataset:
    def __init__(
        self, spec: DatasetSpec, splits: Dict[SplitType, List[LocalizationSample]]
    ) -> None:
        self._spec = spec
        self._splits = {split: list(splits.get(split, [])) for split in SplitType}

    @property
    def spec(self) -> DatasetSpec:
        return self._spec

    @property
    def num_classes(self) -> int:
        return self._spec.num_classes

    def split(self, split: SplitType) -> List[LocalizationSample]:
        return self._splits[split]

    def __iter__(self) -> Iterator[LocalizationSample]:
        for split in SplitType:
            yield from self._splits[split]

    def __len__(self) -> int:
        return sum(len(samples) for samples in self._splits.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._spec == other._spec and self._splits == other._splits

    __hash__ = None
