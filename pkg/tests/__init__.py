"""Tests for marangoni."""
