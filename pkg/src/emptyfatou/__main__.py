import sys

from emptyfatou.cli import main

sys.exit(main())
