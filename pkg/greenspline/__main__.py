import sys

from greenspline.cli import main

sys.exit(main())
