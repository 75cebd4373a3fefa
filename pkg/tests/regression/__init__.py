# Example model regression tests
