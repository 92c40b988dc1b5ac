"""Verification suites, component extraction and the command-line front end."""
