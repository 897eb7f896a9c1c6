"""Running-context summarization over the fenced dialogue history."""

from __future__ import annotations

from typing import Sequence

from convds.errors import SummaryEmpty
from convds.gateway import AgentId

# The history block is fenced so the model cannot mistake the demonstrations
# or the directive itself for the dialog it is asked to summarize.
FENCE_OPEN = "<<<dialog>>>"
FENCE_CLOSE = "<<<end of dialog>>>"


def fence_history(
    history: Sequence[tuple[str, str]],
    latest_utterance: str = "",
    latest_response: str = "",
) -> str:
    lines = [FENCE_OPEN]
    for role, text in history:
        lines.append(f"{role}: {text}")
    if latest_utterance:
        lines.append(f"user: {latest_utterance}")
    if latest_response:
        lines.append(f"assistant: {latest_response}")
    lines.append(FENCE_CLOSE)
    return "\n".join(lines)


def summarize_dialogue(
    history: Sequence[tuple[str, str]],
    latest_utterance: str,
    latest_response: str,
    gateway,
) -> str:
    """Summarize the dialog so far, including the newest exchange.

    An empty prior history short-circuits to the utterance itself with no
    provider call.
    """
    if not history:
        return latest_utterance
    reply = gateway.call(
        AgentId.DIALOGUE_SUMMARIZER,
        {"history": fence_history(history, latest_utterance, latest_response)},
    )
    if not reply.strip():
        raise SummaryEmpty("summarizer returned an empty reply")
    return reply.strip()
