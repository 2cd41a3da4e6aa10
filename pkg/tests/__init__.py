"""Test package."""
