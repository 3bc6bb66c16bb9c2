import sys

from gapforge.cli import main

sys.exit(main())
