"""
Command-line frontend: model file codec and subcommands.
"""

from .model_file import load_model, parse_model, save_model, serialize_model
from .main import build_parser, main

__all__ = [
    'load_model',
    'parse_model',
    'save_model',
    'serialize_model',
    'build_parser',
    'main',
]
