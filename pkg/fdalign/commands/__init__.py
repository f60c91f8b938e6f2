from fdalign.commands.base_command import BaseCommand
from fdalign.commands.command_registry import CommandRegistry

__all__ = [BaseCommand, CommandRegistry]
