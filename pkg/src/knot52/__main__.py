import sys

from knot52.cli import main

sys.exit(main())
