import argparse
from dataclasses import dataclass, field
from typing import Any, Callable

import pandas as pd

from services.config_utils import Settings

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def arg(*flags: str, **kwargs) -> tuple[tuple[str, ...], dict]:
    """Argument declaration forwarded to ``add_argument``."""
    return flags, kwargs


@dataclass
class Context:
    """What a verb needs besides its own flags."""

    settings: Settings
    threads: int


@dataclass
class Outcome:
    payload: dict
    text: str
    tables: dict[str, list[pd.DataFrame]] = field(default_factory=dict)
    status: int = EXIT_OK


@dataclass
class Command:
    verb: str
    handler: Callable[[argparse.Namespace, Context], Outcome]
    help: str
    arguments: tuple


class CommandGroup:
    """A set of verbs registered on the parser together."""

    def __init__(self, name: str):
        self.name = name
        self.commands: dict[str, Command] = {}

    def command(self, verb: str, *arguments, help: str = ""):
        def decorator(handler):
            self.commands[verb] = Command(verb, handler, help, arguments)
            return handler

        return decorator

    def register(self, subparsers, parents: list[argparse.ArgumentParser]):
        for verb, command in self.commands.items():
            parser = subparsers.add_parser(verb, help=command.help, parents=parents)
            for flags, kwargs in command.arguments:
                parser.add_argument(*flags, **kwargs)
            parser.set_defaults(handler=command.handler)


def setting(args: argparse.Namespace, name: str, settings: Settings, key: str) -> Any:
    """The flag value when given, the configured one otherwise."""
    value = getattr(args, name, None)
    return settings[key] if value is None else value
