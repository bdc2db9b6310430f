import sys

from uqlab.cli import main

sys.exit(main())
