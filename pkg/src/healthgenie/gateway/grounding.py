"""Numeral grounding: generated text may only contain numbers from its payload."""
from __future__ import annotations

import re

_NUMERAL = re.compile(r"\d+(?:\.\d+)?")


def format_number(value: float) -> str:
    """Canonical rendering shared by payload builders and templates."""
    return f"{value:g}"


def numerals_in_text(text: str) -> set[str]:
    return {format_number(float(m)) for m in _NUMERAL.findall(text)}


def numerals_in_payload(payload) -> set[str]:
    """Every number reachable in the structure, including inside strings."""
    found: set[str] = set()

    def walk(value):
        if isinstance(value, bool):
            return
        if isinstance(value, (int, float)):
            found.add(format_number(float(value)))
        elif isinstance(value, str):
            found.update(format_number(float(m)) for m in _NUMERAL.findall(value))
        elif isinstance(value, dict):
            for v in value.values():
                walk(v)
        elif isinstance(value, (list, tuple, set)):
            for v in value:
                walk(v)

    walk(payload)
    return found


def ungrounded_numerals(text: str, payload) -> set[str]:
    return numerals_in_text(text) - numerals_in_payload(payload)
