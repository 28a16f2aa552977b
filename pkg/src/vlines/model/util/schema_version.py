"""
Prefixed semantic versions for vlines documents ("v1.0.0").
"""

import re
from typing import Union

from pydantic import validator
from semver import VersionInfo as Version  # type: ignore

from .base_model import BaseModel
from .mixin_arbitrary_type import ArbitraryTypeMixin

DEFAULT_PREFIX = "v"

VERSION_REGEX = r"^(?P<prefix>[^\d]+)?(?P<semver>\d+\.\d+\.\d+(?:-[0-9A-Za-z.-]+)?(?:\+[0-9A-Za-z.-]+)?)$"

VERSION_PATTERN = re.compile(VERSION_REGEX)


class SemVer(ArbitraryTypeMixin, Version):
    """A semver.VersionInfo that pydantic can validate from a string."""

    @classmethod
    def coerce(cls, v):
        if isinstance(v, Version):
            return cls(**v.to_dict())
        if isinstance(v, str):
            return cls(**Version.parse(v).to_dict())
        raise TypeError(f"SemVer expected [str, VersionInfo] got [{type(v).__name__}]")


class SchemaVersion(BaseModel):
    """
    A version prefix plus a semantic version.

    Data written at version A can be read by version B when the prefixes agree and the
    major versions agree (the minor versions too while major is zero).
    """

    prefix: str = DEFAULT_PREFIX
    semver: SemVer

    class Config:
        json_encoders = {SemVer: lambda v: str(v)}

    @validator("prefix")
    @classmethod
    def validate_prefix(cls, prefix: str) -> str:
        if not prefix or any(ch.isdigit() for ch in prefix):
            raise ValueError(f"invalid version prefix {prefix!r}")
        return prefix

    @classmethod
    def create(cls, version: Union["SchemaVersion", str]) -> "SchemaVersion":
        if isinstance(version, SchemaVersion):
            return version
        match = VERSION_PATTERN.match(str(version).strip())
        if not match:
            raise ValueError(f"invalid schema version {version!r}")
        parts = match.groupdict()
        return cls(prefix=parts["prefix"] or DEFAULT_PREFIX, semver=parts["semver"])

    def __str__(self) -> str:
        return f"{self.prefix}{self.semver}"

    def __repr__(self) -> str:
        return self.__str__()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SchemaVersion):
            other = SchemaVersion.create(other)
        return self.prefix == other.prefix and self.semver.compare(other.semver) == 0

    def __lt__(self, other) -> bool:
        if not isinstance(other, SchemaVersion):
            other = SchemaVersion.create(other)
        return self.prefix == other.prefix and self.semver.compare(other.semver) < 0

    def can_read(self, other: Union["SchemaVersion", str]) -> bool:
        the_other = SchemaVersion.create(other)
        if self.prefix != the_other.prefix:
            return False
        if self.semver.major != the_other.semver.major:
            return False
        if self.semver.major == 0 and self.semver.minor != the_other.semver.minor:
            return False
        # Newer data may carry fields an older reader does not understand.
        return the_other.semver.compare(self.semver) <= 0
