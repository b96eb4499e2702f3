"""Tests for Reeb orbits and the asymptotic operator."""
