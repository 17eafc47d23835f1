"""Experiment orchestration, CSV reports and charts."""
