"""Robustness checking for a small imperative language with attacker holes."""

import json
from typing import List, Optional, Sequence, Tuple

from . import _core
from ._core import Error, __version__

__all__ = ["Error", "check", "typecheck", "lower", "run", "knowledge", "execute", "__version__"]


def check(source: str, property: str = "robustness", mode: str = "ps", domain: int = 4,
          attack_len: Optional[int] = None, diverge: Optional[bool] = None) -> dict:
    """Semantic check over the finite universe; returns the verdict report."""
    return json.loads(_core.check_json(source, property, mode, domain,
                                       -1 if attack_len is None else attack_len, diverge))


def typecheck(source: str, domain: int = 4) -> List[dict]:
    """Type diagnostics; an empty list means the program is well typed."""
    return json.loads(_core.typecheck_json(source, domain))


def lower(source: str, domain: int = 4) -> str:
    return _core.lower(source, domain)


def run(source: str, memory: str = "", domain: int = 4) -> List[str]:
    """Events of the run of a hole-free program, one string each."""
    return _core.run(source, memory, domain)


def knowledge(source: str, memory: str, after: int, mode: str = "ps", domain: int = 4,
              progress: bool = False) -> List[str]:
    """Memories consistent with the first `after` low events of the run from `memory`."""
    return _core.knowledge(source, memory, after, mode, domain, progress)


def execute(args: Sequence[str]) -> Tuple[int, Optional[dict], str]:
    """Run a CLI command in-process: (exit code, JSON report, text report)."""
    code, js, text = _core.execute(list(args))
    return code, (json.loads(js) if js else None), text
