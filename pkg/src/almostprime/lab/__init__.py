"""Desk-scale arithmetic side of the workbench."""
