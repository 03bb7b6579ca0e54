import sys
from distill.__main__ import main

sys.exit(main())
