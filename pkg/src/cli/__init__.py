"""Command-line front end: typer app, run configuration and CSV I/O."""
