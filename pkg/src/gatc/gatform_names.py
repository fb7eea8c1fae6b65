"""Identifier-safe names for constructed theories.

Generated theories get printed with their name in the block header, so
the name has to lex as an identifier.
"""

from __future__ import annotations

import re

_OK = re.compile(r"[^A-Za-z0-9_'#-]")


def safe_name(name: str) -> str:
    out = _OK.sub("_", name)
    if not out or not (out[0].isalpha() or out[0] == "_"):
        out = f"T_{out}"
    return out
