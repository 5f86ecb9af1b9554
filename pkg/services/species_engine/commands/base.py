"""
Base Command Interface

Defines the contract for CLI subcommands using the Strategy pattern.
Each command declares its flags and turns a parsed problem into a report.
"""

from __future__ import annotations

import argparse
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

from services.species_engine.persistence.codec import Problem


@dataclass
class CommandResult:
    """Report payload plus a short message and optional metadata."""

    data: dict[str, Any]
    message: str | None = None
    meta: dict[str, Any] = field(default_factory=dict)


class BaseCommand(ABC):
    """
    Abstract base class for subcommands.

    Implementations must provide:
    - name: Subcommand name (e.g., 'xgen', 'mutate')
    - help: One-line description for --help
    - run: Compute the report from the problem and flags
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Subcommand name used on the command line.

        Returns:
            Lowercase name (e.g., 'ideal-dim')
        """
        pass

    @property
    @abstractmethod
    def help(self) -> str:
        pass

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """
        Add command-specific flags.

        Args:
            parser: The subcommand parser; common flags are already present
        """
        return None

    @abstractmethod
    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        """
        Execute the command.

        Args:
            problem: Parsed problem file
            args: Parsed flags (args.degree, args.seed, args.trace, ...)

        Returns:
            CommandResult with the JSON-ready report

        Raises:
            EngineException: invalid input (exit 1) or failed precondition (exit 2)
        """
        pass
