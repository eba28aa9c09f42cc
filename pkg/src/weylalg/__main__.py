import sys

from weylalg.cli import main

sys.exit(main())
