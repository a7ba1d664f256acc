"""Seeded synthetic fixtures shared by the test-suite and the CLI smoke runs."""
