import sys

from fieldpos.cli import main

sys.exit(main())
