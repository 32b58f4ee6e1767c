import sys

from tfbs_compact.cli import main

sys.exit(main())
