#!/usr/bin/env python
"""Entry point for the torimult command line."""
from flask.cli import FlaskGroup

from app import create_app


def _create_app():
    return create_app()


cli = FlaskGroup(create_app=_create_app, add_default_commands=False, load_dotenv=True)


def main():
    cli(prog_name='torimult')


if __name__ == '__main__':
    main()
