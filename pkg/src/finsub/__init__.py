"""Outcome and nim-value periodicity of finite subtraction games."""

__version__ = "0.1.0"
