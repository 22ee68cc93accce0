"""Command-line handlers for DG Labeler"""
from .console import Console
from .router import RunConfig, parse_classes, route_command
from .commands import COMMAND_HANDLERS

__all__ = ['Console', 'RunConfig', 'parse_classes', 'route_command', 'COMMAND_HANDLERS']
