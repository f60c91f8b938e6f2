from fdalign.commands.decompose_command import DecomposeCommand
from fdalign.commands.eval_command import EvalCommand, SweepCommand
from fdalign.commands.gen_data_command import GenDataCommand
from fdalign.commands.gradcheck_command import GradCheckCommand
from fdalign.commands.train_command import TrainCommand
from fdalign.types import CommandType
from fdalign.utils.base_registry import BaseRegistry


class CommandRegistry(BaseRegistry):
    _key_class = CommandType


CommandRegistry.register(CommandType.GEN_DATA, GenDataCommand)
CommandRegistry.register(CommandType.TRAIN, TrainCommand)
CommandRegistry.register(CommandType.EVAL, EvalCommand)
CommandRegistry.register(CommandType.DECOMPOSE, DecomposeCommand)
CommandRegistry.register(CommandType.SWEEP, SweepCommand)
CommandRegistry.register(CommandType.GRADCHECK, GradCheckCommand)
