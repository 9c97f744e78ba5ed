import sys

from fraclms.cli import main

sys.exit(main())
