"""Provenance records attached to every emitted annotation.

Seven fields travel with each annotation: who annotated (agent name and
version), which annotation system produced it, which program ran, where and
in what environment, and when.  Four of them come from the settings file;
the rest are filled in automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable

from .errors import ConfigurationError

# Identifies this software in every record; fixed at build time, not a
# config knob.
SOURCE_ID = "semannot"

_CONFIG_FIELDS = ("agent_name", "agent_version", "environment_description", "location")


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _rfc3339(moment: datetime) -> str:
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    moment = moment.astimezone(timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class ProvenanceRecord:
    """The seven provenance fields, serialized with every annotation."""

    agent_name: str
    agent_version: str
    annotation_system: str
    source: str
    environment_description: str
    date_time: str
    location: str

    def to_json(self) -> dict:
        return {
            "agent_name": self.agent_name,
            "agent_version": self.agent_version,
            "annotation_system": self.annotation_system,
            "source": self.source,
            "environment": self.environment_description,
            "date_time": self.date_time,
            "location": self.location,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ProvenanceRecord":
        return cls(
            agent_name=obj["agent_name"],
            agent_version=obj["agent_version"],
            annotation_system=obj["annotation_system"],
            source=obj["source"],
            environment_description=obj["environment"],
            date_time=obj["date_time"],
            location=obj["location"],
        )


def build_provenance(
    agent_name: str,
    agent_version: str,
    environment_description: str,
    location: str,
    system,
    clock: Callable[[], datetime] = utc_now,
    source: str = SOURCE_ID,
) -> ProvenanceRecord:
    """Assemble a record for one annotation system.

    ``system`` is a SourceKind; its serialized name becomes the
    ``annotation_system`` field.  ``clock`` is injected so batch runs can be
    made byte-reproducible.  Missing configured fields raise
    :class:`ConfigurationError` naming the field.
    """
    values = {
        "agent_name": agent_name,
        "agent_version": agent_version,
        "environment_description": environment_description,
        "location": location,
    }
    for name in _CONFIG_FIELDS:
        if not values[name]:
            raise ConfigurationError(f"provenance field {name!r} is not configured")
    return ProvenanceRecord(
        agent_name=agent_name,
        agent_version=agent_version,
        annotation_system=system.value,
        source=source,
        environment_description=environment_description,
        date_time=_rfc3339(clock()),
        location=location,
    )
