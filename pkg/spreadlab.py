# spreadlab.py
# -----------------------------------------------------------------------------
# PyInstaller entrypoint.
#
# A stable single-file "script" target for PyInstaller (and for direct
# `python spreadlab.py` usage); the implementation lives in the `spreadlab`
# package.
# -----------------------------------------------------------------------------

from spreadlab.cli import main

if __name__ == "__main__":
    import sys
    # main() returns the documented exit code (0/2/3/130).
    sys.exit(main())
