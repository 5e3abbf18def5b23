"""Test suite for mpemba_relax."""
