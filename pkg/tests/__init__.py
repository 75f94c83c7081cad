"""honeylab tests."""
