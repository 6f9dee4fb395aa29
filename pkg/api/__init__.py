"""API package."""

