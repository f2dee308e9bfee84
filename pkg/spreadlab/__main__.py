# spreadlab/__main__.py
# `python -m spreadlab` behaves like the built executable: both forward into
# spreadlab.cli.main.

from .cli import main

if __name__ == "__main__":
    import sys
    sys.exit(main())
