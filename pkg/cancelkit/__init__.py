"""
Small cancellation group toolkit.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from cancelkit.const import __version__

__all__ = ["__version__"]
