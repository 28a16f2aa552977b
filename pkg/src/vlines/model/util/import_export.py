"""
Import (load) and Export (render) of vlines documents.
"""

import json
import logging
from pathlib import Path
from typing import Any, Optional, Type, Union

from pydantic import ValidationError

from ...errors import DocumentError
from .base_model import BaseModel
from .schema_version import SchemaVersion

logger = logging.getLogger(__name__)

DocumentInput = Union[str, dict, Path]


class ImportExport:
    """Common behaviors for import (load) and export."""

    # The document field identifying the version the data was written with.
    schema_version_field: str = "schema_version"

    def __init__(self, *, model: Type[BaseModel], version: Union[SchemaVersion, str]):
        self.model = model
        self.version = SchemaVersion.create(version)

    def get_schema_version(self, data: dict) -> SchemaVersion:
        """Documents without a version field are taken to be current."""

        raw = data.get(self.schema_version_field)
        if raw is None:
            return self.version
        try:
            return SchemaVersion.create(raw)
        except (ValueError, ValidationError) as e:
            raise DocumentError(f"invalid {self.schema_version_field} {raw!r}: {e}")


class Loader(ImportExport):
    """
    Create a document model from a path, a JSON string or a dict.

    load() reads the raw data, checks that the data's schema version can be read by
    self.version, gives make_compatible() a chance to rewrite the raw dict and finally
    delegates to pydantic via materialize_model().
    """

    def load(self, *, input: DocumentInput) -> BaseModel:
        if not isinstance(input, (str, dict, Path)):
            # Old-school type checking; str/dict/Path carry different meanings.
            raise DocumentError(f"Cannot load {type(input)}. Must be str, dict or Path.")

        raw_data, base_path = self.load_raw_data(input)

        if not isinstance(raw_data, dict):
            raise DocumentError(f"{self.model.__name__} document must be a JSON object, got {type(raw_data).__name__}")

        data_version = self.get_schema_version(raw_data)
        if not self.version.can_read(data_version):
            raise DocumentError(f"{self.model.__name__} version [{self.version}] cannot read [{data_version}] data.")

        raw_data = self.make_compatible(data=raw_data, data_version=data_version, base_path=base_path)
        return self.materialize_model(data=raw_data)

    def make_compatible(self, *, data: dict, data_version: SchemaVersion, base_path: Optional[Path]) -> dict:
        """
        Rewrite `data` (if necessary) into something self.model can parse.
        The default drops the version field, which is not a model field.
        """

        return {k: v for k, v in data.items() if k != self.schema_version_field}

    def materialize_model(self, *, data: dict) -> BaseModel:
        # ValidationError propagates: its message names the offending entry.
        return self.model.parse_obj(data)

    # #### Implementation details

    def load_raw_data(self, input: DocumentInput):
        if isinstance(input, Path):
            logger.debug("loading %s from %s", self.model.__name__, input)
            try:
                text = input.read_text(encoding="utf-8")
            except UnicodeDecodeError as e:
                raise DocumentError(f"{input}: not UTF-8: {e}")
            return self.parse_text(text, input), input.parent

        if isinstance(input, dict):
            return input, None

        return self.parse_text(input, None), None

    def parse_text(self, text: str, path: Optional[Path]) -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            where = f"{path}: " if path else ""
            raise DocumentError(f"{where}malformed JSON: {e}")


class Exporter(ImportExport):
    """
    Render a document model as deterministic JSON: sorted keys, two-space indent,
    aliases instead of field names, a trailing newline and the exporter's version.
    """

    def export(self, *, input: BaseModel) -> str:
        if not isinstance(input, self.model):
            raise DocumentError(f"{type(self).__name__}.export() expected [{self.model.__name__}] got [{type(input)}]")
        data = self.make_compatible(model=input)
        data[self.schema_version_field] = str(self.version)
        return json.dumps(data, sort_keys=True, indent=2, default=str) + "\n"

    def make_compatible(self, *, model: BaseModel) -> dict:
        return model.dict(by_alias=True, exclude_none=True)
