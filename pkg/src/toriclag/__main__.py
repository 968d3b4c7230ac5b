import sys

from toriclag.cli import main

sys.exit(main())
