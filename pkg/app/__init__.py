"""Flask Application Factory."""
import logging
import os

from flask import Flask

from app.config import config


def create_app(config_name=None):
    """Create and configure the Flask application."""
    if config_name is None:
        config_name = os.environ.get('FLASK_CONFIG', 'default')

    app = Flask(__name__)
    app.config.from_object(config[config_name])

    # Library modules log through children of the 'app' logger
    level = logging.getLevelName(app.config['LOG_LEVEL'])
    if not isinstance(level, int):
        level = logging.WARNING
    app.logger.setLevel(level)
    logging.getLogger('app').setLevel(level)

    register_cli_commands(app)

    return app


def register_cli_commands(app):
    """Register CLI commands."""
    from app.cli import register_cli_commands as register
    register(app)
