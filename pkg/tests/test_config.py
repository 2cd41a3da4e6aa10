"""Tests for configuration selection."""
import logging

from app import create_app
from app.config import DevelopmentConfig, ProductionConfig, config


class TestConfigSelection:

    def test_default_is_development(self):
        assert config['default'] is DevelopmentConfig

    def test_factory_without_name_uses_flask_config(self, monkeypatch):
        monkeypatch.delenv('FLASK_CONFIG', raising=False)
        app = create_app()
        assert app.config['DEBUG'] is True

    def test_flask_config_selects_production(self, monkeypatch):
        monkeypatch.setenv('FLASK_CONFIG', 'production')
        app = create_app()
        assert app.config['DEBUG'] is False
        assert app.config['LOG_LEVEL'] == ProductionConfig.LOG_LEVEL

    def test_log_level_reaches_library_loggers(self):
        app = create_app('testing')
        expected = logging.getLevelName(app.config['LOG_LEVEL'])
        assert logging.getLogger('app').level == expected
