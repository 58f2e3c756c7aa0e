import sys

from ofm.cli import main

sys.exit(main())
