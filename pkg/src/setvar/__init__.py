"""Set-valued calculus of bounded Riesz p-variation."""

__version__ = "0.1.0"
