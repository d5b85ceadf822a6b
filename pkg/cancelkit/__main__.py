"""
Entry point of "python -m cancelkit".

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from cancelkit.cli import main

main()
