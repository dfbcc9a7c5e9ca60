"""Analysis engines and the token registry used by the CLI."""

from __future__ import annotations

from ..trace import Trace
from .base import Engine
from .djitp import DjitpEngine
from .orderedlist import OrderedListEngine
from .sampling import SamplingEngine
from .uclock import UclockEngine

ENGINE_TOKENS = ("djitp", "sampling", "uclock", "orderedlist")

_CLASSES = {
    "djitp": DjitpEngine,
    "sampling": SamplingEngine,
    "uclock": UclockEngine,
    "orderedlist": OrderedListEngine,
}


def create_engine(token: str, tr: Trace, *, local_epoch_opt: bool = True, **kwargs) -> Engine:
    """Instantiate the engine named by ``token``, sized for ``tr``."""
    try:
        cls = _CLASSES[token]
    except KeyError:
        raise ValueError(f"unknown engine token {token!r}") from None
    if token == "orderedlist":
        kwargs["local_epoch_opt"] = local_epoch_opt
    return cls(tr.num_threads, tr.num_locks, tr.num_vars, **kwargs)


__all__ = [
    "ENGINE_TOKENS",
    "Engine",
    "DjitpEngine",
    "SamplingEngine",
    "UclockEngine",
    "OrderedListEngine",
    "create_engine",
]
