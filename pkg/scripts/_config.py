"""Build an argparse front end from a dataclass config (field defaults become option defaults)."""
from __future__ import annotations

import argparse
import dataclasses
import json
from typing import TypeVar, get_type_hints

T = TypeVar("T")


def parse_config(cls: type[T], argv=None) -> T:
    hints = get_type_hints(cls)
    p = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        typ = hints[f.name]
        opt = "--" + f.name.replace("_", "-")
        if typ is bool:
            p.add_argument(opt, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, (list, tuple)):
            p.add_argument(opt, type=int, nargs="+", default=list(default))
        else:
            p.add_argument(opt, type=type(default), default=default)
    return cls(**vars(p.parse_args(argv)))


def dump(cfg, result: dict) -> str:
    return json.dumps({"config": dataclasses.asdict(cfg), "result": result}, indent=2, sort_keys=True, default=str)
