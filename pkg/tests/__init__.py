"""Tests package for loomp."""
