"""
CLI components package
"""
from .commands import (
    COMMANDS,
    CommandOutput,
    RunRequest,
    cmd_compare,
    cmd_compute,
    cmd_curve,
    cmd_list,
    cmd_sweep,
    cmd_verify
)

__all__ = [
    'COMMANDS',
    'CommandOutput',
    'RunRequest',
    'cmd_compare',
    'cmd_compute',
    'cmd_curve',
    'cmd_list',
    'cmd_sweep',
    'cmd_verify'
]
