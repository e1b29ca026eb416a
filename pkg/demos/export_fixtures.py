"""Rewrite the packaged derivation files from the fixture constructors.

Run with ``python demos/export_fixtures.py [DIRECTORY]``; the default is the
package's own data directory.  The test suite checks that the packaged files
equal a fresh export.
"""

from __future__ import annotations

import sys

from ttrkit.derivfile import DATA_DIR, write_corpus


def main() -> None:
    target = sys.argv[1] if len(sys.argv) > 1 else DATA_DIR
    for path in write_corpus(target):
        print(path)


if __name__ == "__main__":
    main()
