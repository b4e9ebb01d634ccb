"""Tests for the cost benchmark."""
