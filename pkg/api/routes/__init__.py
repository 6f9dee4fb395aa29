"""API routes package."""

