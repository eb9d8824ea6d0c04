import sys

from fracsobolev.cli import main

sys.exit(main())
