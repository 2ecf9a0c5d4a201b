import sys

from marangoni.driver.cli import main

if __name__ == "__main__":
    sys.exit(main())
