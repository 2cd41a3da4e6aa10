"""Flask Application Configuration."""
import logging
import os

logger = logging.getLogger(__name__)


def _env_int(name: str, default):
    """Read a positive integer from the environment, falling back to default."""
    raw = os.environ.get(name)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", name, raw)
        return default
    if value <= 0:
        logger.warning("Ignoring %s=%r: must be positive", name, raw)
        return default
    return value


class Config:
    """Base configuration."""
    # Parallelism cap for per-ray / per-candidate work
    THREADS = _env_int('TORIMULT_THREADS', 1)

    # Cooperative cancellation deadline (seconds), None = no deadline
    TIMEOUT_SECS = _env_int('TORIMULT_TIMEOUT_SECS', None)

    LOG_LEVEL = os.environ.get('TORIMULT_LOG_LEVEL', 'WARNING').upper()

    BOUNDARY_DENOMINATOR_BOUND = _env_int('TORIMULT_BOUNDARY_BOUND', 4)


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True
    LOG_LEVEL = os.environ.get('TORIMULT_LOG_LEVEL', 'DEBUG').upper()


class ProductionConfig(Config):
    """Production configuration."""
    DEBUG = False


class TestingConfig(Config):
    """Testing configuration."""
    TESTING = True
    THREADS = 1
    TIMEOUT_SECS = None


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
