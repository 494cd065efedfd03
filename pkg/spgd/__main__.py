import sys

from spgd import __version__
from spgd.cli.main import main

banner = f"""
  ___ _ __   __ _  __| |
 / __| '_ \\ / _` |/ _` |
 \\__ \\ |_) | (_| | (_| |
 |___/ .__/ \\__, |\\__,_|
     |_|    |___/

    sparse separated regression
    Version: {__version__}
"""

if len(sys.argv) == 1:
    print(banner, file=sys.stderr)

sys.exit(main())
