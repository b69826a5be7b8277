"""Tests for cubicplanar."""
