"""
Data loading and saving utilities for the selection toolkit.

Graphs are read from and written to edge-list text or JSON files.
"""
import json
import logging
from pathlib import Path
from typing import Any, Union

from config.settings import DEFAULT_ENCODING, INDENT_LEVEL, PATHS
from selection.graph import Graph, graph_from_json, graph_to_json, parse_graph, serialize_graph
from utils.validators import validate_file_exists

logger = logging.getLogger(__name__)


def save_json_file(data: Any, file_path: Path) -> None:
    """
    Write ``data`` as indented JSON, creating parent directories.

    Raises:
        OSError: If the file cannot be written
        TypeError: If the data is not JSON serializable
    """
    text = json.dumps(data, indent=INDENT_LEVEL, ensure_ascii=False)
    save_text_file(text + "\n", file_path)


def save_text_file(text: str, file_path: Path) -> None:
    """Write text (an edge list or CSV table), creating parent directories."""
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_path.write_text(text, encoding=DEFAULT_ENCODING)
    except OSError as e:
        logger.error("Error writing to %s: %s", file_path, e)
        raise
    logger.info("wrote %s", file_path)


def resolve_graph_path(name: Union[str, Path]) -> Path:
    """
    Find a graph file as given, or by name in the bundled graph directory.

    Raises:
        FileNotFoundError: If neither location has the file
    """
    path = Path(name)
    if validate_file_exists(path):
        return path
    bundled = PATHS['GRAPHS'] / path.name
    if validate_file_exists(bundled):
        return bundled
    raise FileNotFoundError(f"Graph file not found: {name}")


def load_graph_file(name: Union[str, Path]) -> Graph:
    """
    Load a graph from the edge-list format, or from JSON when the file ends in ``.json``.

    Raises:
        FileNotFoundError: If the file is missing
        GraphParseError: If the contents are not a valid graph
    """
    path = resolve_graph_path(name)
    text = path.read_text(encoding=DEFAULT_ENCODING)
    if path.suffix == '.json':
        return graph_from_json(text)
    return parse_graph(text)


def save_graph_file(g: Graph, file_path: Path, comment: str = '') -> None:
    """Write ``g`` as JSON when the path ends in ``.json``, as an edge list otherwise."""
    if file_path.suffix == '.json':
        save_json_file(graph_to_json(g), file_path)
    else:
        save_text_file(serialize_graph(g, comment or None), file_path)
