import sys

from funceq.cli import main

sys.exit(main())
