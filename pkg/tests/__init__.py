"""Tests for the differential spectrum toolkit."""
