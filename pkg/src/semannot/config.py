"""settings.cfg parsing and validation.

Grammar: UTF-8 ``key=value`` lines, ``#`` comments and blank lines ignored.
Unknown keys warn.  Relative resource paths are resolved against the
directory containing the settings file.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path

from .dbpedia import DEFAULT_ENDPOINT
from .errors import ConfigurationError
from .model import SourceKind

log = logging.getLogger(__name__)

KNOWN_KEYS = {
    "sources",
    "skos.files",
    "wordnet.path",
    "wordnet.stopwords",
    "dbpedia.endpoint",
    "dbpedia.min_interval_ms",
    "dbpedia.max_retries",
    "dbpedia.lang",
    "dbpedia.optional",
    "metamap.host",
    "metamap.port",
    "metamap.optional",
    "agent.name",
    "agent.version",
    "environment.description",
    "location",
}

_SOURCE_NAMES = {kind.value.lower(): kind for kind in SourceKind}

_TRUE_WORDS = {"true", "yes", "on", "1"}
_FALSE_WORDS = {"false", "no", "off", "0"}


@dataclass(frozen=True)
class Settings:
    sources: tuple[SourceKind, ...]
    skos_files: tuple[Path, ...] = ()
    wordnet_path: Path | None = None
    wordnet_stopwords: bool = True
    dbpedia_endpoint: str = DEFAULT_ENDPOINT
    dbpedia_min_interval_ms: int = 1000
    dbpedia_max_retries: int = 3
    dbpedia_lang: str = "en"
    dbpedia_optional: bool = False
    metamap_host: str | None = None
    metamap_port: int | None = None
    metamap_optional: bool = False
    agent_name: str = ""
    agent_version: str = ""
    environment_description: str = ""
    location: str = ""

    def with_sources(self, sources: tuple[SourceKind, ...]) -> "Settings":
        updated = replace(self, sources=sources)
        _validate(updated)
        return updated


def parse_source_list(value: str) -> tuple[SourceKind, ...]:
    """Parse a comma-separated source list ('skos,wordnet', case-insensitive)."""
    names = [part.strip().lower() for part in value.split(",") if part.strip()]
    if not names:
        raise ConfigurationError("sources list is empty")
    sources = []
    for name in names:
        if name not in _SOURCE_NAMES:
            known = ", ".join(sorted(_SOURCE_NAMES))
            raise ConfigurationError(f"unknown source {name!r} (known: {known})")
        kind = _SOURCE_NAMES[name]
        if kind not in sources:
            sources.append(kind)
    return tuple(sources)


def _parse_bool(key: str, value: str) -> bool:
    word = value.strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ConfigurationError(f"{key}: expected a boolean, got {value!r}")


def _parse_int(key: str, value: str, minimum: int = 0) -> int:
    try:
        number = int(value.strip())
    except ValueError as exc:
        raise ConfigurationError(f"{key}: expected an integer, got {value!r}") from exc
    if number < minimum:
        raise ConfigurationError(f"{key}: must be >= {minimum}")
    return number


def _read_pairs(path: Path) -> dict[str, str]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read settings file {path}: {exc}") from exc
    pairs = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            log.warning("%s:%d: unknown settings key %r ignored", path, lineno, key)
            continue
        pairs[key] = value
    return pairs


def _validate(settings: Settings) -> None:
    if not settings.sources:
        raise ConfigurationError("at least one source must be enabled")
    if SourceKind.SKOS in settings.sources and not settings.skos_files:
        raise ConfigurationError("missing required key 'skos.files' for source skos")
    if SourceKind.WORDNET in settings.sources and settings.wordnet_path is None:
        raise ConfigurationError("missing required key 'wordnet.path' for source wordnet")
    if SourceKind.METAMAP in settings.sources:
        if not settings.metamap_host:
            raise ConfigurationError("missing required key 'metamap.host' for source metamap")
        if settings.metamap_port is None:
            raise ConfigurationError("missing required key 'metamap.port' for source metamap")
    for key, value in (
        ("agent.name", settings.agent_name),
        ("agent.version", settings.agent_version),
        ("environment.description", settings.environment_description),
        ("location", settings.location),
    ):
        if not value:
            raise ConfigurationError(f"missing required provenance key {key!r}")


def parse_settings(path) -> Settings:
    """Load and validate a settings file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"settings file not found: {path}")
    pairs = _read_pairs(path)
    base = path.resolve().parent

    def resolve(value: str) -> Path:
        candidate = Path(value)
        return candidate if candidate.is_absolute() else base / candidate

    if "sources" not in pairs:
        raise ConfigurationError("missing required key 'sources'")
    skos_files = tuple(
        resolve(part.strip())
        for part in pairs.get("skos.files", "").split(",")
        if part.strip()
    )
    port = pairs.get("metamap.port")
    settings = Settings(
        sources=parse_source_list(pairs["sources"]),
        skos_files=skos_files,
        wordnet_path=resolve(pairs["wordnet.path"]) if "wordnet.path" in pairs else None,
        wordnet_stopwords=_parse_bool("wordnet.stopwords", pairs["wordnet.stopwords"])
        if "wordnet.stopwords" in pairs else True,
        dbpedia_endpoint=pairs.get("dbpedia.endpoint", DEFAULT_ENDPOINT),
        dbpedia_min_interval_ms=_parse_int(
            "dbpedia.min_interval_ms", pairs.get("dbpedia.min_interval_ms", "1000")),
        dbpedia_max_retries=_parse_int(
            "dbpedia.max_retries", pairs.get("dbpedia.max_retries", "3")),
        dbpedia_lang=pairs.get("dbpedia.lang", "en"),
        dbpedia_optional=_parse_bool("dbpedia.optional", pairs["dbpedia.optional"])
        if "dbpedia.optional" in pairs else False,
        metamap_host=pairs.get("metamap.host") or None,
        metamap_port=_parse_int("metamap.port", port, minimum=1) if port else None,
        metamap_optional=_parse_bool("metamap.optional", pairs["metamap.optional"])
        if "metamap.optional" in pairs else False,
        agent_name=pairs.get("agent.name", ""),
        agent_version=pairs.get("agent.version", ""),
        environment_description=pairs.get("environment.description", ""),
        location=pairs.get("location", ""),
    )
    _validate(settings)
    return settings
