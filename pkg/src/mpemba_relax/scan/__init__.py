"""Crossing detection, boundary tracing and parameter scans."""
