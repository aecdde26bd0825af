"""Exact trace ranges, pfaffian minors and Heisenberg-module checks for noncommutative tori and their orbifolds."""

__version__ = "0.1.0"
