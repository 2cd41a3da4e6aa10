"""Event log for notable computations.

Events go to the ``app.events`` logger (stderr), never to stdout, which is
reserved for result documents.
"""
import logging
from typing import Optional

MODULES = ('ratgeom', 'toric', 'divisors', 'mult', 'sing', 'cli')

IMPORTANCE_LEVELS = {
    'low': logging.DEBUG,
    'medium': logging.INFO,
    'high': logging.WARNING,
    'critical': logging.ERROR,
}

event_logger = logging.getLogger('app.events')


def log_event(
    module: str,
    action: str,
    details: Optional[str] = None,
    importance: str = 'low',
) -> dict:
    """Emit an event record.

    Args:
        module: Module code, one of ``MODULES``
        action: Action code (e.g. 'resolution_built', 'boundary_found')
        details: Optional human-readable description
        importance: 'low', 'medium', 'high' or 'critical'

    Returns:
        dict: The emitted record

    Raises:
        ValueError: If the module code is unknown

    Example:
        ```python
        from app.services.logging_service import log_event

        log_event('toric', 'resolution_built', details='7 rays, 6 cones')
        log_event('mult', 'boundary_not_found', importance='medium')
        ```
    """
    if importance not in IMPORTANCE_LEVELS:
        importance = 'low'

    if module not in MODULES:
        raise ValueError(f"Unknown module: {module}")

    record = {
        'module': module,
        'action': action,
        'details': details,
        'importance': importance,
    }
    event_logger.log(
        IMPORTANCE_LEVELS[importance],
        "[%s] %s%s", module, action, f": {details}" if details else '',
    )
    return record


def log_critical(module: str, action: str, details: Optional[str] = None) -> dict:
    """Shortcut for logging critical events."""
    return log_event(module, action, details, importance='critical')


def log_high(module: str, action: str, details: Optional[str] = None) -> dict:
    """Shortcut for logging high-importance events."""
    return log_event(module, action, details, importance='high')


def log_medium(module: str, action: str, details: Optional[str] = None) -> dict:
    """Shortcut for logging medium-importance events."""
    return log_event(module, action, details, importance='medium')
