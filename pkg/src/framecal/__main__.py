import sys

from framecal.cli import main

sys.exit(main())
