"""JSON schemas for the input files and the CLI verdict payloads."""

import json
from importlib import resources


def load_schema(name):
    return json.loads(resources.files(__name__).joinpath(name + ".json").read_text(encoding="utf-8"))
