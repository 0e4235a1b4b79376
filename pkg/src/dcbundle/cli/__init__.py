from .main import main, run_command
from .parser import ParseError, parse_poly

__all__ = ["main", "run_command", "ParseError", "parse_poly"]
