import json
import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from neural_linucb.environments.models import KNOWN_DATASETS, DatasetSpec, RawDataset
from neural_linucb.exceptions import DatasetError

logger = logging.getLogger(__name__)

_PANDAS_LINE = re.compile(r"line (\d+)")


class ManifestEntry(BaseModel):
    model_config = ConfigDict(extra="ignore", frozen=True)

    path: Path
    n_attributes: int | None = Field(default=None, gt=0)
    n_arms: int | None = Field(default=None, ge=2)
    # None detects a header line, see load_dataset
    header: bool | None = None

    def spec(self, name: str) -> DatasetSpec | None:
        """Expected shape: explicit counts first, then the built-in table."""
        known = KNOWN_DATASETS.get(name.lower())
        n_attributes = self.n_attributes or (known.n_attributes if known else None)
        n_arms = self.n_arms or (known.n_arms if known else None)
        if n_attributes is None or n_arms is None:
            return None
        return DatasetSpec(name=name, n_attributes=n_attributes, n_arms=n_arms)


def _read_table(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, header=None, dtype=str, skip_blank_lines=False)
    except FileNotFoundError as e:
        raise DatasetError(f"dataset file not found: {path}", path=path) from e
    except pd.errors.EmptyDataError as e:
        raise DatasetError(f"dataset file is empty: {path}", path=path) from e
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        line = int(match.group(1)) if match else None
        raise DatasetError(f"cannot parse {path}: {e}", path=path, line_number=line) from e


def _is_header_row(row: pd.Series) -> bool:
    """Every field present and none of them a number."""
    if row.isna().any():
        return False
    numeric = pd.to_numeric(row.str.strip(), errors="coerce").notna()
    return not numeric.any()


def load_dataset(
    path: Path | str,
    name: str | None = None,
    *,
    spec: DatasetSpec | None = None,
    header: bool | None = None,
) -> RawDataset:
    """Read a comma-separated file whose last column is an integer class label.

    With header unset, a full-width first line with no numeric field is taken
    as a header; anything else on line 1 is data and must parse. An explicit
    header flag skips or keeps line 1 regardless. Labels are remapped to
    0..K-1 in sorted order. When name matches a known dataset (or spec is
    given) the attribute count is checked and K is the expected arm count.
    """
    path = Path(path)
    if spec is None and name is not None:
        spec = KNOWN_DATASETS.get(name.lower())

    table = _read_table(path)
    # file line of each row, 1-based
    line_numbers = np.arange(1, len(table) + 1)
    if header is None:
        header = bool(len(table)) and _is_header_row(table.iloc[0])
    if header:
        table = table.iloc[1:]
        line_numbers = line_numbers[1:]
    blank = table.isna().all(axis=1).to_numpy()
    table = table[~blank]
    line_numbers = line_numbers[~blank]
    if table.empty:
        raise DatasetError(f"dataset {path} has no rows", path=path)
    if table.shape[1] < 2:
        raise DatasetError(f"dataset {path} needs attributes and a label column", path=path)

    values = table.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    bad = values.isna().any(axis=1).to_numpy()
    if bad.any():
        first = int(np.argmax(bad))
        raise DatasetError(
            f"{path}:{line_numbers[first]}: non-numeric field in row "
            f"{','.join(table.iloc[first].fillna('').tolist())!r}",
            path=path,
            line_number=int(line_numbers[first]),
        )

    array = values.to_numpy(dtype=np.float64)
    features, raw_labels = array[:, :-1], array[:, -1]
    fractional = raw_labels != np.round(raw_labels)
    if fractional.any():
        first = int(np.argmax(fractional))
        raise DatasetError(
            f"{path}:{line_numbers[first]}: label {raw_labels[first]} is not an integer",
            path=path,
            line_number=int(line_numbers[first]),
        )

    classes, labels = np.unique(raw_labels.astype(np.int64), return_inverse=True)
    n_arms = len(classes)
    if spec is not None:
        if features.shape[1] != spec.n_attributes:
            raise DatasetError(
                f"{spec.name} expects {spec.n_attributes} attributes, "
                f"{path} has {features.shape[1]}",
                path=path,
            )
        if n_arms > spec.n_arms:
            raise DatasetError(
                f"{spec.name} has {spec.n_arms} classes, {path} has {n_arms} distinct labels",
                path=path,
            )
        n_arms = spec.n_arms
    if n_arms < 2:
        raise DatasetError(f"{path} has a single class; a bandit needs two arms", path=path)

    logger.info(
        "loaded %s: %d rows, %d attributes, %d arms", path, len(labels), features.shape[1], n_arms
    )
    return RawDataset(
        name=spec.name if spec is not None else (name or path.stem),
        features=features,
        labels=labels.astype(np.int64),
        n_arms=n_arms,
    )


def load_manifest(path: Path | str) -> dict[str, ManifestEntry]:
    """Parse a JSON manifest {name: {path, n_attributes, n_arms}}.

    Relative dataset paths resolve against the manifest's directory.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise DatasetError(f"manifest not found: {path}", path=path) from e
    except json.JSONDecodeError as e:
        raise DatasetError(
            f"manifest {path} is not valid JSON: {e}", path=path, line_number=e.lineno
        ) from e
    if not isinstance(payload, dict):
        raise DatasetError(f"manifest {path} must map dataset names to entries", path=path)

    entries: dict[str, ManifestEntry] = {}
    for name, raw in payload.items():
        try:
            entry = ManifestEntry.model_validate(raw)
        except ValidationError as e:
            raise DatasetError(f"manifest entry {name!r} in {path}: {e}", path=path) from e
        if not entry.path.is_absolute():
            entry = entry.model_copy(update={"path": path.parent / entry.path})
        entries[name] = entry
    return entries
