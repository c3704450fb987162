"""Line-delimited dataset manifests and bulk audio loading."""

import json
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple, Union

from .audio import Waveform, load_waveform
from ..utils.exceptions import AudioFormatError, DuplicateIdError, ManifestError
from ..utils.logger import get_logger

logger = get_logger(__name__)

REQUIRED_FIELDS = ('id', 'path', 'label')


@dataclass(frozen=True)
class DatasetEntry:
    id: str
    path: str
    label: str


@dataclass(frozen=True)
class Dataset:
    """Ordered, immutable collection of labeled audio entries."""

    entries: Tuple[DatasetEntry, ...] = ()
    label_vocabulary: FrozenSet[str] = field(default=frozenset())

    def __post_init__(self):
        entries = tuple(self.entries)
        seen = set()
        for entry in entries:
            if entry.id in seen:
                raise DuplicateIdError(entry.id)
            seen.add(entry.id)
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'label_vocabulary', frozenset(e.label for e in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ids(self) -> List[str]:
        return [e.id for e in self.entries]

    def get(self, entry_id: str) -> DatasetEntry:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        raise KeyError(entry_id)

    def subset(self, ids: Iterable[str]) -> 'Dataset':
        """Keep only the given ids, preserving manifest order."""
        wanted = set(ids)
        return Dataset(tuple(e for e in self.entries if e.id in wanted))

    def labels_of(self, ids: Sequence[str]) -> List[str]:
        by_id = {e.id: e.label for e in self.entries}
        return [by_id[i] for i in ids]


def _parse_record(raw: bytes, path: str, line_number: int) -> DatasetEntry:
    try:
        line = raw.decode('utf-8')
    except UnicodeDecodeError as e:
        raise ManifestError(f"invalid UTF-8 at byte {e.start}", path, line_number)
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise ManifestError(f"malformed record ({e.msg})", path, line_number)

    if not isinstance(record, dict):
        raise ManifestError("record is not an object", path, line_number)
    missing = [f for f in REQUIRED_FIELDS if f not in record]
    if missing:
        raise ManifestError(f"missing field(s) {', '.join(missing)}", path, line_number)
    for name in REQUIRED_FIELDS:
        if not isinstance(record[name], str) or not record[name]:
            raise ManifestError(f"field '{name}' must be a nonempty string", path, line_number)

    audio_path = record['path']
    if not os.path.isabs(audio_path):
        audio_path = str(Path(path).parent / audio_path)
    return DatasetEntry(id=record['id'], path=audio_path, label=record['label'])


def load_manifest(path: Union[str, Path]) -> Dataset:
    """Load a JSON-lines manifest with one {id, path, label} object per line.

    Relative audio paths are resolved against the manifest's directory. Blank
    lines are ignored.
    """
    path = str(path)
    if not os.path.exists(path):
        raise ManifestError("manifest file not found", path)

    entries: List[DatasetEntry] = []
    seen: Dict[str, int] = {}
    with open(path, 'rb') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            entry = _parse_record(line, path, line_number)
            if entry.id in seen:
                raise DuplicateIdError(entry.id, path, line_number)
            seen[entry.id] = line_number
            entries.append(entry)

    dataset = Dataset(tuple(entries))
    logger.info(f"Loaded manifest {path}: {len(dataset)} entries, {len(dataset.label_vocabulary)} labels")
    return dataset


def write_manifest(entries: Iterable[DatasetEntry], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        for entry in entries:
            f.write(json.dumps({'id': entry.id, 'path': entry.path, 'label': entry.label}) + '\n')
    return path


def load_dataset_audio(ds: Dataset, expected_rate: int = 16000, workers: int = 1) -> Dict[str, Waveform]:
    """Load every waveform of a dataset, rejecting sample-rate mismatches."""
    audio: Dict[str, Waveform] = {}

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        future_to_id = {executor.submit(load_waveform, e.path): e.id for e in ds.entries}
        for future in as_completed(future_to_id):
            audio[future_to_id[future]] = future.result()

    for entry in ds.entries:
        rate = audio[entry.id].sample_rate
        if rate != expected_rate:
            raise AudioFormatError(
                f"sample rate {rate} Hz does not match the dataset rate {expected_rate} Hz", entry.path
            )

    return {entry.id: audio[entry.id] for entry in ds.entries}
