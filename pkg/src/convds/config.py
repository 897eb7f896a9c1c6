"""Process configuration, sourced from CONVDS_* environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True)
class Settings:
    host: str = "127.0.0.1"
    port: int = 8712
    data_dir: str = "convds-data"
    provider: str = "scripted"  # "scripted" or "http"
    script_path: str = ""
    script_strict: bool = False
    provider_url: str = ""
    provider_api_key: str = ""
    provider_model: str = "gpt-3.5-turbo"
    backend: str = "builtin"  # "builtin" or a worker base URL
    level_override: int | None = None
    seed: int = 0
    cors_origin: str = "*"
    auth_token: str = ""


def _as_bool(raw: str) -> bool:
    return raw.strip().lower() in {"1", "true", "yes", "on"}


def load_settings(env: Mapping[str, str] | None = None) -> Settings:
    env = os.environ if env is None else env
    level_raw = env.get("CONVDS_LEVEL", "").strip()
    return Settings(
        host=env.get("CONVDS_HOST", Settings.host),
        port=int(env.get("CONVDS_PORT", str(Settings.port))),
        data_dir=env.get("CONVDS_DATA_DIR", Settings.data_dir),
        provider=env.get("CONVDS_PROVIDER", Settings.provider),
        script_path=env.get("CONVDS_SCRIPT", ""),
        script_strict=_as_bool(env.get("CONVDS_SCRIPT_STRICT", "")),
        provider_url=env.get("CONVDS_PROVIDER_URL", ""),
        provider_api_key=env.get("CONVDS_PROVIDER_API_KEY", ""),
        provider_model=env.get("CONVDS_PROVIDER_MODEL", Settings.provider_model),
        backend=env.get("CONVDS_BACKEND", Settings.backend),
        level_override=int(level_raw) if level_raw else None,
        seed=int(env.get("CONVDS_SEED", "0")),
        cors_origin=env.get("CONVDS_CORS_ORIGIN", Settings.cors_origin),
        auth_token=env.get("CONVDS_AUTH_TOKEN", ""),
    )
