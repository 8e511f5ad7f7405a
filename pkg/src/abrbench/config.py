"""Parameter files: INI text with a version stamp, session overrides and
per-logic sections.

    [abrbench]
    version = 1

    [session]
    request_latency = 0.16

    [festive]
    efficiency_factor = 0.85
"""

from __future__ import annotations

import ast
import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .adaptation import LOGICS

FORMAT_VERSION = 1
SESSION_KEYS = ("mpd_size", "request_latency", "startup_threshold", "resume_threshold")


class ConfigError(ValueError):
    pass


@dataclass
class ParamFile:
    session: dict[str, Any] = field(default_factory=dict)
    logics: dict[str, dict[str, Any]] = field(default_factory=dict)

    def for_logic(self, name: str) -> dict[str, Any]:
        return dict(self.logics.get(name, {}))


def _value(raw: str) -> Any:
    text = raw.strip()
    lowered = text.lower()
    if lowered in ("none", "null", ""):
        return None
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def parse_params(text: str, source: str = "<params>") -> ParamFile:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if not cp.has_section("abrbench") or not cp.has_option("abrbench", "version"):
        raise ConfigError(f"{source}: missing [abrbench] version")
    version = _value(cp.get("abrbench", "version"))
    if version != FORMAT_VERSION:
        raise ConfigError(f"{source}: unsupported version {version!r}")
    out = ParamFile()
    for section in cp.sections():
        if section == "abrbench":
            continue
        items = {k: _value(v) for k, v in cp.items(section)}
        if section == "session":
            unknown = set(items) - set(SESSION_KEYS)
            if unknown:
                raise ConfigError(f"{source}: [session] unknown key(s) {', '.join(sorted(unknown))}")
            out.session = items
        elif section in LOGICS:
            unknown = set(items) - set(LOGICS[section].param_names())
            if unknown:
                raise ConfigError(f"{source}: [{section}] unknown key(s) {', '.join(sorted(unknown))}")
            out.logics[section] = items
        else:
            raise ConfigError(f"{source}: unknown section [{section}]")
    return out


def load_params(path: str | Path | None) -> ParamFile:
    if path is None:
        return ParamFile()
    return parse_params(Path(path).read_text(), str(path))
