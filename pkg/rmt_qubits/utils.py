# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Functions to support cli commands."""

import argparse
import configparser
import logging
import os
import posixpath
import sys

import yaml

from .errors import ConfigError

_log = logging.getLogger("cli_utils")

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

THREADS_ENV = "RMT_QUBITS_THREADS"

CONFIG_SECTION = "scenario"


def setup_logging(level="INFO", compact=True):
    """Configure the root logger once, on stderr."""
    if compact:
        fmt = "{levelname:<7} :: {message}"
    else:
        fmt = "{asctime} {levelname:<7} {name} :: {message}"
    logging.basicConfig(level=level, format=fmt, style="{", stream=sys.stderr)


def args_interactive(arg, add_args_function, description):
    parser = argparse.ArgumentParser(description=description, prog="")
    add_args_function(parser)

    try:
        if isinstance(arg, argparse.Namespace):
            # already parsed by main(), only fill in missing defaults
            known, _unknown = parser.parse_known_args(args=[], namespace=arg)
        else:
            known, _unknown = parser.parse_known_args(args=arg.split() if arg else [])
        return known
    except SystemExit:
        if isinstance(arg, argparse.Namespace):
            raise
    return None


def file_write(work_dir, file_name, content):
    """Write ``content`` below ``work_dir``; YAML for ``.yaml``/``.yml`` names, plain text otherwise."""
    file_path = posixpath.join(work_dir, file_name)
    os.makedirs(os.path.dirname(file_path) or ".", exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as file:
        if file_name.endswith((".yaml", ".yml")):
            yaml.safe_dump(content, file, indent=4, default_flow_style=False, sort_keys=False)
        else:
            file.write(content)
    _log.info("File '%s' written", file_path)
    return file_path


def remove_outputs(paths):
    """Delete partially written result files."""
    for path in paths:
        if path and os.path.exists(path):
            os.remove(path)
            _log.info("Removed partial output '%s'", path)


def read_config(path, known_keys):
    """Read a flat ``key = value`` file into a dict keyed by argparse dest names.

    Keys may be written with ``-`` or ``_``. Keys not in ``known_keys`` raise
    :class:`ConfigError`.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file '{path}' does not exist")
    with open(path, "r", encoding="utf-8") as file:
        text = file.read()
    parser = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",))
    try:
        parser.read_string(f"[{CONFIG_SECTION}]\n{text}", source=path)
    except configparser.Error as ex_msg:
        raise ConfigError(f"cannot parse config file '{path}': {ex_msg}") from ex_msg

    values = {}
    for key, value in parser[CONFIG_SECTION].items():
        dest = key.strip().replace("-", "_")
        if dest not in known_keys:
            raise ConfigError(f"unknown key '{key}' in config file '{path}'")
        values[dest] = value.strip()
    _log.debug("Config '%s' provides %s", path, sorted(values))
    return values


def thread_count(flag_value, config_value=None):
    """Resolve the worker count: flag, then config, then environment, then 1."""
    sources = (("flag", flag_value), ("config", config_value), ("env", os.environ.get(THREADS_ENV)))
    for source, value in sources:
        if value in {None, ""}:
            continue
        try:
            threads = int(value)
        except ValueError as ex_msg:
            raise ConfigError(f"thread count from {source} is not an integer: {value!r}") from ex_msg
        if threads < 1:
            raise ConfigError(f"thread count from {source} must be positive, got {threads}")
        return threads
    return 1


def parse_list(text, kind=float):
    """Parse a comma separated list such as ``100,200,400``."""
    try:
        return [kind(item) for item in str(text).split(",") if item.strip()]
    except ValueError as ex_msg:
        raise ConfigError(f"cannot parse list {text!r}") from ex_msg


def format_number(value):
    return f"{value:.12g}"


def csv_text(header, rows, comments=()):
    """Render a CSV document with 12 significant digits and ``#`` comment lines."""
    lines = [",".join(header)]
    lines.extend(",".join(format_number(value) for value in row) for row in rows)
    lines.extend(f"# {comment}" for comment in comments)
    return "\n".join(lines) + "\n"


def manifest_name(out):
    root, _ext = os.path.splitext(out)
    return f"{root}.manifest.yaml"
