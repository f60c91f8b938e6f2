import json
import os

from fdalign.config import ModelConfig
from fdalign.config.utils import dataclass_from_dict, dataclass_to_dict
from fdalign.errors import CheckpointError, FtenFormatError
from fdalign.logger import init_logger
from fdalign.model.model import Model
from fdalign.tensor import Tensor, read_ften, write_ften
from fdalign.utils.file_lock import exclusive_dir

logger = init_logger(__name__)

MANIFEST_FILE = "manifest.json"


def _param_file(name: str) -> str:
    return name.replace(".", "_") + ".ften"


def save_checkpoint(model: Model, path: str) -> None:
    groups = model.param_groups
    manifest = {
        "model_config": dataclass_to_dict(model.config),
        "parameters": {},
    }
    with exclusive_dir(path):
        for name, param in model.parameters.items():
            file_name = _param_file(name)
            write_ften(os.path.join(path, file_name), param)
            manifest["parameters"][name] = {
                "file": file_name,
                "shape": list(param.shape),
                "group": groups[name],
            }
        with open(os.path.join(path, MANIFEST_FILE), "w") as f:
            json.dump(manifest, f, indent=4)
    logger.debug(f"Checkpoint written to {path}")


def load_checkpoint(path: str) -> Model:
    manifest_path = os.path.join(path, MANIFEST_FILE)
    try:
        with open(manifest_path) as f:
            manifest = json.load(f)
        config = dataclass_from_dict(ModelConfig, manifest["model_config"])
        entries = manifest["parameters"]
    except OSError as e:
        raise CheckpointError(f"{manifest_path}: cannot read manifest ({e.strerror})") from e
    except (ValueError, KeyError, TypeError) as e:
        raise CheckpointError(f"{manifest_path}: invalid manifest ({e})") from e

    parameters, groups = {}, {}
    for name, entry in entries.items():
        file_path = os.path.join(path, entry["file"])
        try:
            values = read_ften(file_path)
        except FtenFormatError as e:
            raise CheckpointError(str(e)) from e
        if list(values.shape) != entry["shape"]:
            raise CheckpointError(
                f"{file_path}: shape {list(values.shape)} differs from manifest"
                f" {entry['shape']}"
            )
        parameters[name] = Tensor(values, requires_grad=True, name=name)
        groups[name] = entry["group"]
    return Model(config, parameters, groups)
