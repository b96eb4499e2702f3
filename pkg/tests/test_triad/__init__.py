"""Tests for contact triads."""
