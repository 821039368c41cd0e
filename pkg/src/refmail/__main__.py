import sys

from refmail.cli import main

sys.exit(main())
