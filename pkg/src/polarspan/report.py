"""Run configuration and the versioned verification report schema."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

SCHEMA_VERSION = "1.0.0"


def report_schema_version() -> str:
    return SCHEMA_VERSION


class SchemaVersionError(ValueError):
    pass


def check_schema_version(version: str) -> None:
    """Refuse reports written by a newer major version of the schema."""
    try:
        major = int(str(version).split(".")[0])
    except (ValueError, IndexError) as exc:
        raise SchemaVersionError(f"unparseable schema version {version!r}") from exc
    ours = int(SCHEMA_VERSION.split(".")[0])
    if major > ours:
        raise SchemaVersionError(
            f"report schema {version} is newer than supported {SCHEMA_VERSION}"
        )


@dataclass
class ResourceCaps:
    memory_mb: int = 4096
    seconds_per_genus: float = 600.0
    max_points: int = 1_000_000

    def __post_init__(self):
        if self.memory_mb <= 0 or self.seconds_per_genus <= 0 or self.max_points <= 0:
            raise ValueError("resource caps must be positive")


@dataclass
class RunConfig:
    subcommand: str
    genus_min: int = 0
    genus_max: int = 0
    fmt: str = "json"
    threads: int = 1
    allow_large: bool = False
    caps: ResourceCaps = field(default_factory=ResourceCaps)
    output: Optional[str] = None

    def __post_init__(self):
        if self.genus_min < 0 or self.genus_max < self.genus_min:
            raise ValueError("bad genus range")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.fmt not in ("json", "text", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")


def checked(expected: Any, actual: Any) -> dict[str, Any]:
    return {"expected": expected, "actual": actual, "match": expected == actual}


@dataclass
class GenusRecord:
    genus: int
    checks: dict[str, dict[str, Any]]
    skipped: list[str]
    elapsed: float

    @property
    def all_match(self) -> bool:
        return all(c["match"] for c in self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "genus": self.genus,
            "checks": self.checks,
            "skipped": self.skipped,
            "all_match": self.all_match,
            "elapsed_seconds": round(self.elapsed, 3),
        }


@dataclass
class VerificationReport:
    records: list[GenusRecord]
    config: dict[str, Any]
    elapsed: float

    @property
    def all_match(self) -> bool:
        return all(r.all_match for r in self.records)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "genus_records": [r.to_dict() for r in self.records],
            "all_match": self.all_match,
            "elapsed_seconds": round(self.elapsed, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def parse_report(text: str) -> dict[str, Any]:
    """Load a report produced by ``VerificationReport.to_json``.

    Accepts any report whose major schema version is not newer than ours.
    """
    data = json.loads(text)
    check_schema_version(data.get("schema_version", "0"))
    return data


def error_record(kind: str, message: str, **extra: Any) -> str:
    rec = {"schema_version": SCHEMA_VERSION, "error": {"type": kind, "message": message, **extra}}
    return json.dumps(rec, indent=2)
