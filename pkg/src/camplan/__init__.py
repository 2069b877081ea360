"""Minimal 360-degree camera placement planning for 2D floorplans."""

__version__ = "0.1.0"
