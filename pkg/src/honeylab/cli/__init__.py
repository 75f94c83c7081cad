"""Subcommand implementations for the honeylab command line."""
