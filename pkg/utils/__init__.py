"""Utility functions for the application"""
from .csv_utils import curve_frame, read_csv, render_csv, write_atomic

__all__ = ["curve_frame", "read_csv", "render_csv", "write_atomic"]
