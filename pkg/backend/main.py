"""Main entry point for the D2PC experiment backend"""

from backend.app.api.cli import cli


def main():
    """Main application entry point - runs the experiment CLI"""
    cli()


if __name__ == "__main__":
    main()
