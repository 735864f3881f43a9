"""
Helpers for pulling structured objects out of free-form LLM text
"""

import re
from typing import Optional

_FENCE = re.compile(r"```[A-Za-z0-9_-]*")


def strip_code_fences(text: str) -> str:
    """Remove markdown code fences, keeping their contents."""
    return _FENCE.sub("", text)


def find_first_object(text: str, max_depth: int = 32) -> Optional[str]:
    """
    Return the first balanced {...} span in text, or None

    Braces inside single- or double-quoted strings are ignored. Spans nested
    deeper than max_depth are skipped.
    """
    start = text.find("{")
    while start != -1:
        depth = 0
        quote = None
        escaped = False
        for i in range(start, len(text)):
            ch = text[i]
            if quote is not None:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == quote:
                    quote = None
                continue
            if ch in ("'", '"'):
                quote = ch
            elif ch == "{":
                depth += 1
                if depth > max_depth:
                    break
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return text[start:i + 1]
        start = text.find("{", start + 1)
    return None
