import sys

from hypersearch.main import main

sys.exit(main())
