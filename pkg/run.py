"""Script to run the command line interface."""

from src.cli import main

if __name__ == '__main__':
    main()
