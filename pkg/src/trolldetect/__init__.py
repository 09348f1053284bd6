"""Troll detection pipeline for Weibo-style comments."""

__version__ = "0.1.0"
