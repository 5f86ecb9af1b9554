import pytest

from common.errors import ErrorCodes
from common.exceptions import InternalError
from services.species_engine.commands.base import BaseCommand
from services.species_engine.core.registry import CommandRegistry, get_registry

COMMAND_SOURCE = '''
from services.species_engine.commands.base import BaseCommand, CommandResult


class {cls}(BaseCommand):
    name = "{name}"
    help = "test command"

    def run(self, problem, args):
        return CommandResult(data={{}})
'''


def test_every_subcommand_is_discovered():
    assert get_registry().names() == [
        "def-dim",
        "delta",
        "ideal-dim",
        "involution-check",
        "matrix",
        "mutate",
        "reduce",
        "search",
        "seed-potential",
        "validate",
        "xgen",
        "xmap",
    ]


def test_lookup_is_case_insensitive():
    command = get_registry().get("MUTATE")
    assert isinstance(command, BaseCommand)
    assert command.name == "mutate"
    assert get_registry().get("unknown") is None


@pytest.fixture
def command_package(tmp_path, monkeypatch):
    """An importable package the registry can scan; returns a module writer."""

    def _make(name, modules):
        root = tmp_path / name
        root.mkdir()
        (root / "__init__.py").write_text("")
        for module, source in modules.items():
            (root / f"{module}.py").write_text(source)
        return name

    monkeypatch.syspath_prepend(str(tmp_path))
    return _make


def test_discovers_commands_of_another_package(command_package):
    package = command_package(
        "extra_commands", {"echo": COMMAND_SOURCE.format(cls="Echo", name="Echo")}
    )
    registry = CommandRegistry(package)
    registry.auto_discover()
    assert registry.names() == ["echo"]


def test_broken_module_aborts_discovery(command_package):
    package = command_package(
        "broken_commands",
        {
            "fine": COMMAND_SOURCE.format(cls="Fine", name="fine"),
            "broken": "import a_module_that_does_not_exist\n",
        },
    )
    with pytest.raises(InternalError) as exc:
        CommandRegistry(package).auto_discover()
    assert exc.value.code == ErrorCodes.COMMAND_DISCOVERY
    assert exc.value.exit_code == 2
    assert exc.value.details["diagnostics"]["module"] == "broken_commands.broken"


def test_duplicate_names_abort_discovery(command_package):
    package = command_package(
        "twin_commands",
        {
            "one": COMMAND_SOURCE.format(cls="One", name="twin"),
            "two": COMMAND_SOURCE.format(cls="Two", name="twin"),
        },
    )
    with pytest.raises(InternalError) as exc:
        CommandRegistry(package).auto_discover()
    assert "twin" in exc.value.message
