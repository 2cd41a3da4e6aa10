"""Tests for the event log."""
import logging

import pytest

from app.services.logging_service import log_event, log_high, log_medium


def test_log_event_returns_record():
    record = log_event('mult', 'boundary_found', details='[0, 0]', importance='medium')
    assert record == {
        'module': 'mult',
        'action': 'boundary_found',
        'details': '[0, 0]',
        'importance': 'medium',
    }


def test_unknown_importance_falls_back_to_low():
    assert log_event('toric', 'resolution_built', importance='urgent')['importance'] == 'low'


def test_unknown_module():
    with pytest.raises(ValueError):
        log_event('nowhere', 'anything')


def test_events_use_the_importance_level(caplog):
    with caplog.at_level(logging.DEBUG, logger='app.events'):
        log_medium('sing', 'canonical_not_lc', details='x')
        log_high('cli', 'precondition_failed')
    levels = [(r.levelno, r.getMessage()) for r in caplog.records if r.name == 'app.events']
    assert levels == [
        (logging.INFO, '[sing] canonical_not_lc: x'),
        (logging.WARNING, '[cli] precondition_failed'),
    ]
