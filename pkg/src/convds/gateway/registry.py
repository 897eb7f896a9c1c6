"""Loads per-agent template assets from disk and renders directives by level.

Asset layout, one directory per agent:

    assets/<agent>/system.txt
    assets/<agent>/demo_00_user.txt     (paired with demo_00_assistant.txt)
    assets/<agent>/directive_level2.txt (one file per supported level)
    assets/<agent>/ladder.json          (structural elements introduced per level)

Files are UTF-8 with LF endings. The ladder is validated at load time: every
element a level introduces must appear verbatim in that level's directive file
and in every higher one, which is what makes the level ladder monotone.
"""
from __future__ import annotations

import json
import re
from enum import Enum
from pathlib import Path
from typing import Mapping

from ..errors import UnsupportedLevel
from .templates import Demonstration, PromptTemplate, placeholder_names, substitute


class AgentId(str, Enum):
    STATE_DETECTOR = "state_detector"
    DIALOGUE_SUMMARIZER = "dialogue_summarizer"
    CONVERSATION_MANAGER = "conversation_manager"
    DATASET_SUMMARIZER = "dataset_summarizer"
    TASK_SUGGESTOR = "task_suggestor"
    TASK_SELECTOR = "task_selector"
    SEEKER = "seeker"
    FEEDER = "feeder"
    DESCRIPTOR = "descriptor"

    def __str__(self) -> str:  # event logs and script matching use the bare value
        return self.value


#: directive level each agent runs at unless a caller overrides it
DEFAULT_LEVELS: dict[AgentId, int] = {
    AgentId.STATE_DETECTOR: 2,
    AgentId.DIALOGUE_SUMMARIZER: 2,
    AgentId.CONVERSATION_MANAGER: 1,
    AgentId.DATASET_SUMMARIZER: 2,
    AgentId.TASK_SUGGESTOR: 1,
    AgentId.TASK_SELECTOR: 2,
    AgentId.SEEKER: 2,
    AgentId.FEEDER: 2,
    AgentId.DESCRIPTOR: 1,
}

_DIRECTIVE_FILE = re.compile(r"directive_level(\d+)\.txt$")
_DEMO_USER_FILE = re.compile(r"demo_(\d+)_user\.txt$")

_ASSET_ROOT = Path(__file__).parent / "assets"


def _read(path: Path) -> str:
    text = path.read_text(encoding="utf-8")
    return text.rstrip("\n")


class TemplateRegistry:
    """All nine agents' templates, indexed by agent and directive level."""

    def __init__(self, root: Path | None = None):
        self._root = root or _ASSET_ROOT
        self._systems: dict[AgentId, str] = {}
        self._demos: dict[AgentId, tuple[Demonstration, ...]] = {}
        self._directives: dict[AgentId, dict[int, str]] = {}
        self._ladders: dict[AgentId, dict[int, list[str]]] = {}
        for agent in AgentId:
            self._load_agent(agent)

    def _load_agent(self, agent: AgentId) -> None:
        agent_dir = self._root / agent.value
        self._systems[agent] = _read(agent_dir / "system.txt")

        demos: list[Demonstration] = []
        for user_path in sorted(agent_dir.glob("demo_*_user.txt")):
            m = _DEMO_USER_FILE.search(user_path.name)
            assert m, user_path
            assistant_path = agent_dir / f"demo_{m.group(1)}_assistant.txt"
            demos.append(Demonstration(user=_read(user_path), assistant=_read(assistant_path)))
        self._demos[agent] = tuple(demos)

        directives: dict[int, str] = {}
        for path in agent_dir.glob("directive_level*.txt"):
            m = _DIRECTIVE_FILE.search(path.name)
            assert m, path
            directives[int(m.group(1))] = _read(path)
        if not directives:
            raise FileNotFoundError(f"no directive files for agent {agent.value}")
        self._directives[agent] = directives

        ladder_path = agent_dir / "ladder.json"
        ladder: dict[int, list[str]] = {}
        if ladder_path.exists():
            raw = json.loads(ladder_path.read_text(encoding="utf-8"))
            ladder = {int(k): list(v) for k, v in raw.items()}
        self._ladders[agent] = ladder
        self._check_ladder(agent)

    def _check_ladder(self, agent: AgentId) -> None:
        """Every element introduced at level k must appear at every level >= k."""
        directives = self._directives[agent]
        for intro_level, elements in self._ladders[agent].items():
            for element in elements:
                if placeholder_names(element):
                    raise ValueError(
                        f"{agent.value}: ladder element may not contain placeholders: {element!r}"
                    )
                for level, text in directives.items():
                    if level >= intro_level and element not in text:
                        raise ValueError(
                            f"{agent.value}: level {level} directive is missing the "
                            f"level-{intro_level} element {element!r}"
                        )

    # ------------------------------------------------------------------ queries

    def supported_levels(self, agent: AgentId) -> list[int]:
        return sorted(self._directives[agent])

    def default_level(self, agent: AgentId) -> int:
        return DEFAULT_LEVELS[agent]

    def ladder(self, agent: AgentId) -> dict[int, list[str]]:
        return {k: list(v) for k, v in self._ladders[agent].items()}

    def template_for(self, agent: AgentId, level: int | None = None) -> PromptTemplate:
        chosen = DEFAULT_LEVELS[agent] if level is None else level
        try:
            directive = self._directives[agent][chosen]
        except KeyError:
            raise UnsupportedLevel(agent.value, chosen) from None
        return PromptTemplate(
            agent_id=agent.value,
            system_setup=self._systems[agent],
            demonstrations=self._demos[agent],
            directive_template=directive,
            level=chosen,
        )

    def render_directive(self, agent: AgentId, level: int, payload: Mapping[str, str]) -> str:
        """The resolved directive text for one agent at one ladder level."""
        template = self.template_for(agent, level)
        return substitute(template.directive_template, payload)


_default_registry: TemplateRegistry | None = None


def default_registry() -> TemplateRegistry:
    global _default_registry
    if _default_registry is None:
        _default_registry = TemplateRegistry()
    return _default_registry
