import sys
from argparse import SUPPRESS, ArgumentParser
from dataclasses import fields
from typing import Any, Dict, List, Optional

from fdalign.commands import CommandRegistry
from fdalign.config import RunConfig
from fdalign.config.flat_dataclass import create_flat_dataclass
from fdalign.errors import FdalignError, UsageError
from fdalign.logger import init_logger, set_log_level
from fdalign.utils.random import set_seeds

logger = init_logger(__name__)


class CliArgumentParser(ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    shared = CliArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON config file; explicit flags override it.")
    shared.add_argument(
        "--output", dest="output_dir", default=SUPPRESS, help="Alias of --output_dir."
    )
    create_flat_dataclass(RunConfig).add_cli_arguments(shared)

    parser = CliArgumentParser(
        prog="fdalign", description="Feature-direction alignment for WSOL."
    )
    subparsers = parser.add_subparsers(
        dest="command", required=True, parser_class=CliArgumentParser
    )
    for command_type in CommandRegistry.keys():
        command_class = CommandRegistry.get_class(command_type)
        subparser = subparsers.add_parser(
            str(command_type), parents=[shared], help=command_class.help
        )
        command_class.add_arguments(subparser)
        subparser.set_defaults(command_type=command_type)
    return parser


def collect_overrides(args, command_class) -> Dict[str, Any]:
    flat_names = {field.name for field in fields(create_flat_dataclass(RunConfig))}
    overrides = {
        name: value for name, value in vars(args).items() if name in flat_names
    }
    overrides.update(command_class.config_overrides(args))
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        command_class = CommandRegistry.get_class(args.command_type)
        config = RunConfig.create_from_cli_args(
            args.config, collect_overrides(args, command_class)
        )
        set_log_level(config.log_level)
        set_seeds(config.seed)
        return CommandRegistry.get(args.command_type, config, args).run()
    except FdalignError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
