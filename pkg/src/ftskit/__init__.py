"""Conformance testing for software product lines over featured transition systems."""
