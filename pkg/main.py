"""Entry point for the isofoliate command-line interface."""

from isofoliate import cli

if __name__ == "__main__":
    cli.main()
