import os
from contextlib import contextmanager

from fasteners import InterProcessLock

LOCK_FILE_NAME = ".write.lock"


@contextmanager
def exclusive_dir(path: str):
    """Creates `path` and holds an inter-process lock on it while writing."""
    os.makedirs(path, exist_ok=True)
    lock = InterProcessLock(os.path.join(path, LOCK_FILE_NAME))
    with lock:
        yield path
