"""Unit test module for dwellcert."""
