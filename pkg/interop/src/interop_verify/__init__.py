"""Independent structural cross-check for exported edge lists."""

from .verify import InteropReport, verify_export

__all__ = ["InteropReport", "verify_export"]
__version__ = "1.0.0"
