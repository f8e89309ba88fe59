import sys

from hazekit.cli import main

sys.exit(main())
