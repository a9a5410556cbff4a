# app/core/exceptions.py
from typing import Optional


class SimulationError(Exception):
    """Base class for errors raised by the simulator"""


class DomainError(SimulationError, ValueError):
    """An operation was called outside its valid domain"""


class IngestionError(SimulationError, ValueError):
    """A curve file was readable but its content is invalid"""

    def __init__(self, message: str, path: Optional[str] = None, row: Optional[int] = None):
        self.path = path
        self.row = row
        location = f"{path}: " if path else ""
        super().__init__(f"{location}{message}")


class ConfigError(SimulationError, ValueError):
    """Invalid experiment configuration"""

    def __init__(self, message: str, source: Optional[str] = None, key: Optional[str] = None):
        self.source = source
        self.key = key
        prefix = ""
        if source:
            prefix += f"{source}: "
        if key:
            prefix += f"{key}: "
        super().__init__(f"{prefix}{message}")
