"""Fenced code-block extraction from model responses."""

from __future__ import annotations

import logging

__all__ = ["extract_code_blocks"]

logger = logging.getLogger(__name__)


def extract_code_blocks(text: str, tag: str) -> list[str]:
    """All fenced blocks opened with ```<tag>, in order of appearance.

    Inside a block, other fence openings are treated as content; only a
    bare ``` line closes it.  An unclosed block extends to the end of the
    text, with a warning.
    """
    blocks: list[str] = []
    current: list[str] | None = None
    for line in text.splitlines():
        stripped = line.strip()
        if current is None:
            if stripped.startswith("```") and stripped[3:].strip() == tag:
                current = []
        elif stripped == "```":
            blocks.append("\n".join(current))
            current = None
        else:
            current.append(line)
    if current is not None:
        logger.warning("unclosed ```%s fence; block extended to end of text", tag)
        blocks.append("\n".join(current))
    return blocks
