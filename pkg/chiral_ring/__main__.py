import sys

from chiral_ring.cli import main

sys.exit(main())
