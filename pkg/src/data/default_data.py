DEFAULT_CONFIG = {
    "census": {
        "seed": 7,
        "samples": 200,
        "depth": 12,
        "k": 3,
    },
    "certify": {
        "zero_tolerance": 1e-12,
        "max_cells": 2_000_000,
        "max_retries": 20,
        "condition_limit": 1e8,
        "path_depth": 10,
        "depth": 12,
    },
    "degree": {
        "depth": 10,
    },
    "threads": 1,
    "output": {
        "directory": ".",
        "overwrite": False,
    },
}

THREADS_ENV = "RESOLVENT_THREADS"
# Read from the working directory when --config is not given.
CONFIG_FILE = "config.json"
