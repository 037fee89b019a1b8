"""Render figures from secure-rate sweep CSV files.

The renderers never compute any physics: every plotted number is read from
the input CSV, which is produced by the rate engine's command-line tools.
"""

__version__ = "0.1.0"
