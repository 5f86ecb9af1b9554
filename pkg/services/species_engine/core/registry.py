"""
Command Registry

Auto-discovers CLI subcommands: every concrete BaseCommand defined in a
module of the commands package becomes a subcommand under its ``name``.
A module that fails to import, or two commands sharing a name, abort
discovery with an InternalError (exit 2) instead of silently shrinking
the command list.
"""

import importlib
import inspect
import logging
import pkgutil

from common.errors import ErrorCodes
from common.exceptions import InternalError
from services.species_engine.commands.base import BaseCommand

logger = logging.getLogger(__name__)

COMMANDS_PACKAGE = "services.species_engine.commands"


class CommandRegistry:
    """
    Subcommands by lowercase name.

    Usage:
        registry = get_registry()
        command = registry.get("mutate")
    """

    def __init__(self, package: str = COMMANDS_PACKAGE):
        self.package = package
        self._commands: dict[str, BaseCommand] = {}
        self._discovered = False

    def auto_discover(self) -> None:
        """
        Import every non-base module of the package and register its commands.

        Raises:
            InternalError: a module does not import, a command cannot be
                instantiated, or two commands share a name.
        """
        if self._discovered:
            return

        package = importlib.import_module(self.package)
        for info in pkgutil.iter_modules(package.__path__):
            if info.ispkg or info.name == "base":
                continue
            module_name = f"{self.package}.{info.name}"
            try:
                module = importlib.import_module(module_name)
            except Exception as e:
                raise InternalError(
                    f"command module {module_name} failed to import: {e}",
                    code=ErrorCodes.COMMAND_DISCOVERY,
                    diagnostics={"module": module_name},
                ) from e
            for command_class in self._commands_in(module):
                self._register(command_class)

        self._discovered = True
        logger.debug(f"Discovered {len(self._commands)} commands: {self.names()}")

    @staticmethod
    def _commands_in(module) -> list[type[BaseCommand]]:
        return [
            obj
            for _, obj in inspect.getmembers(module, inspect.isclass)
            if issubclass(obj, BaseCommand)
            and obj.__module__ == module.__name__
            and not inspect.isabstract(obj)
        ]

    def _register(self, command_class: type[BaseCommand]) -> None:
        try:
            command = command_class()
        except Exception as e:
            raise InternalError(
                f"command {command_class.__name__} cannot be instantiated: {e}",
                code=ErrorCodes.COMMAND_DISCOVERY,
            ) from e
        name = command.name.lower()
        if name in self._commands:
            raise InternalError(
                f"commands {type(self._commands[name]).__name__} and "
                f"{command_class.__name__} share the name '{name}'",
                code=ErrorCodes.COMMAND_DISCOVERY,
            )
        self._commands[name] = command

    def get(self, name: str) -> BaseCommand | None:
        return self._commands.get(name.lower())

    def names(self) -> list[str]:
        """Registered command names, sorted."""
        return sorted(self._commands)


_registry: CommandRegistry | None = None


def get_registry() -> CommandRegistry:
    """The process-wide registry, discovered on first use."""
    global _registry
    if _registry is None:
        registry = CommandRegistry()
        registry.auto_discover()
        _registry = registry
    return _registry
