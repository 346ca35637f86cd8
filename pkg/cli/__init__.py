"""Command-line surface and plot-ready output files."""
