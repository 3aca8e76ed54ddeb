"""
High-level script for running framelab.
"""

from .cli import main

main()
