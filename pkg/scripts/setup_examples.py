"""
This script writes the example frames as frame files.
"""

import pathlib

from loguru import logger

from framelab.construct import example_registry
from framelab.io import write_frame


def export_examples(output_path="./data/frames") -> list:
    """
    Writes every registry example to `<output_path>/<name>.json`.

    :param output_path: The directory to write the frame files to.

    :return: The paths written, in registry order.
    """
    pathlib.Path(output_path).mkdir(parents=True, exist_ok=True)
    written = []
    for name, example in example_registry().items():
        path = write_frame(
            example.frame,
            pathlib.Path(output_path) / f"{name}.json",
            name=name,
            description=example.description,
            expected={k: v.value for k, v in example.expected.items()},
        )
        logger.debug("wrote {}", path)
        written.append(path)
    return written


if __name__ == "__main__":
    export_examples()
