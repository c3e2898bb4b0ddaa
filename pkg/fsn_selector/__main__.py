import sys

from fsn_selector.app import main

sys.exit(main())
