"""Tests for fields on the cylinder."""
